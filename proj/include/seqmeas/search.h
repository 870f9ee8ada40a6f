// Copyright 2026 The seqmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEQMEAS_SEARCH_H_
#define SEQMEAS_SEARCH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqmeas/criteria.h"
#include "seqmeas/linalg.h"
#include "seqmeas/measurement.h"

namespace seqmeas {

enum class Constraint { kAdjacentA, kAdjacentB, kSeparatedABA, kSeparatedBAB };

inline constexpr Constraint kAllConstraints[] = {Constraint::kAdjacentA, Constraint::kAdjacentB,
                                                 Constraint::kSeparatedABA, Constraint::kSeparatedBAB};

/// "aa-a", "aa-b", "aba", "bab".
std::string_view constraint_name(Constraint c);
/// Comma-separated names; "" and "none" give the empty list. Throws kInvalidInput.
std::vector<Constraint> parse_constraints(std::string_view text);

/// Axis-aligned projectors generalizing the 4D example: P1 onto e_1..e_{r1},
/// P2 onto e_1..e_k plus the last r2-k basis vectors, k = max(0, r1+r2-dim).
std::pair<Matrix, Matrix> default_projectors(int dim, int rank1, int rank2);

struct SearchProblem {
    int dim = 4;
    int rank1 = 3;
    int rank2 = 3;
    std::vector<Constraint> constraints;
    /// When false the projectors are fixed: `fixed_projectors` if given,
    /// otherwise default_projectors(dim, rank1, rank2).
    bool free_projectors = false;
    std::optional<std::pair<Matrix, Matrix>> fixed_projectors;
    double penalty_weight = 100;
    /// Multiplier for the second ascent pass; 0 skips it.
    double escalation = 10;
    int restarts = 16;
    /// Nelder-Mead iterations per ascent pass.
    int max_iters = 3000;
    uint64_t seed = 0;
    double feasibility_tol = 1e-6;
    /// Worker threads for restarts; 0 means hardware concurrency.
    int threads = 0;

    void validate() const;
    bool has(Constraint c) const;
    /// d^2 reals per skew generator: two for U1, U2, two more for free projectors.
    size_t parameter_count() const;
    std::pair<Matrix, Matrix> resolved_projectors() const;
};

/// Skew-Hermitian generator from d^2 reals: diagonal entries i*x, then for
/// each (j < k) in row-major order K_jk = x + i*y, K_kj = -x + i*y.
Matrix skew_from_params(std::span<const double> x, int dim);

/// Throws kBadParameterLength on a size mismatch.
InstancePair parametrize(std::span<const double> x, const SearchProblem &problem);

/// Per-constraint Frobenius residuals, computed directly from the factors
/// (independently of the criteria module).
std::vector<double> constraint_residuals(const InstancePair &pair, std::span<const Constraint> constraints);

/// Squared-residual sum over the problem's constraints.
double total_penalty(const InstancePair &pair, const SearchProblem &problem);

/// order_effect_magnitude - penalty_weight * sum of squared residuals.
double penalized_objective(std::span<const double> x, const SearchProblem &problem);
double penalized_objective(std::span<const double> x, const SearchProblem &problem, double weight);

struct RestorationOutcome {
    std::vector<double> params;
    double residual_norm = 0;
    int iterations = 0;
};

/// Levenberg-Marquardt on the stacked constraint residual entries, starting
/// from `x`. Stops below 1e-13 or when no further progress is possible.
RestorationOutcome restore_feasibility(std::span<const double> x, const SearchProblem &problem,
                                       int max_iters = 200);

struct TraceRow {
    int restart;
    /// 0: ascent at penalty_weight, 1: escalated ascent, 2: restoration.
    int phase;
    int iter;
    double objective;
    double penalty;
};

struct SearchResult {
    SearchProblem problem;
    InstancePair best_pair;
    std::vector<double> best_params;
    int best_restart = -1;
    /// order_effect_magnitude(best_pair).
    double objective = 0;
    std::vector<std::pair<Constraint, double>> residuals;
    bool feasible = false;
    std::vector<TraceRow> trace;
};

/// `restarts` independent local searches from seeded random starts; returns
/// the best by (feasible, objective), ties to the lowest restart index.
SearchResult optimize(const SearchProblem &problem);

struct ConstraintAgreement {
    Constraint constraint;
    double search_residual;
    double criteria_residual;
    bool agree;
};

struct FeasibilityReport {
    CriteriaReport criteria;
    std::vector<ConstraintAgreement> constraints;
    double objective_discrepancy = 0;
    bool agreement = false;
    std::optional<NoGoCertificate> certificate;
    std::string certificate_note;
};

/// Re-evaluates the best pair through the criteria module.
FeasibilityReport feasibility_report(const SearchResult &result, const Tolerances &tol = {});

}  // namespace seqmeas

#endif  // SEQMEAS_SEARCH_H_
