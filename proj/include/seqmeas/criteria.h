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

#ifndef SEQMEAS_CRITERIA_H_
#define SEQMEAS_CRITERIA_H_

#include <string>
#include <vector>

#include "seqmeas/linalg.h"
#include "seqmeas/measurement.h"

namespace seqmeas {

/// Outcome of an operator-equality predicate: holds iff residual <= eq_tol.
struct Check {
    bool holds = false;
    double residual = 0;

    static Check from_residual(double residual, double threshold) { return {residual <= threshold, residual}; }
};

/// <E phi, phi> = 1 for an effect E forces E phi = phi.
/// Throws kPreconditionUnmet if E is not an effect, phi is not a unit vector,
/// or <E phi, phi> < 1 - prob_tol.
bool theorem1_certificate(const Matrix &e, const Vector &phi, const Tolerances &tol = {});

/// A-A repeatability: |P U P - U P|_F.
Check adjacent_repeatability(const Measurement &m, const Tolerances &tol = {});

struct Theorem2Result {
    bool em_equals_m;
    bool gram_is_projector;
};

/// Evaluates both sides of "(M^* M) M = M" vs "M^* M is a projector".
Theorem2Result theorem2_check(const Matrix &m, const Tolerances &tol = {});

/// D = P1 U1^* P2 U1 P1 - P2 U2^* P1 U2 P2. <D psi, psi> = p_{A-B}(psi) - p_{B-A}(psi).
Matrix order_effect_operator(const InstancePair &pair);

/// Spectral norm of D: max over unit psi of |p_{A-B} - p_{B-A}|.
double order_effect_magnitude(const InstancePair &pair);

/// A-B-A repeatability: |P1 U2 P2 U1 P1 - U2 P2 U1 P1|_F.
Check aba_repeatability(const InstancePair &pair, const Tolerances &tol = {});

/// B-A-B repeatability: |P2 U1 P1 U2 P2 - U1 P1 U2 P2|_F.
Check bab_repeatability(const InstancePair &pair, const Tolerances &tol = {});

/// Geometric facts that the repeatability conditions force.
struct StructuralReport {
    Check projectors_commute;  // |[P1, P2]|_F
    Check p2_h1_is_h12;        // range(P2 P1) = H12
    Check p1_h2_is_h12;        // range(P1 P2) = H12
    Check u1_preserves_h12;    // |P12 U1 P12 - U1 P12|_F
    Check u2_preserves_h12;
    Check perpendicular;       // |P_L1 P_L2|_F
    Eigen::Index intersection_dim = 0;
};

StructuralReport structural_consequences(const InstancePair &pair, const Tolerances &tol = {});

struct CriteriaReport {
    Check aa_a;
    Check aa_b;
    Check aba;
    Check bab;
    double order_effect_magnitude = 0;
    Check projectors_commute;
    Check perpendicular;
    Eigen::Index intersection_dim = 0;
};

CriteriaReport evaluate_criteria(const InstancePair &pair, const Tolerances &tol = {});

/// Evidence that a pair satisfying all four repeatability conditions shows
/// no order effect.
struct NoGoCertificate {
    double order_effect_magnitude = 0;
    double compression_a_residual = 0;  // |P1 U1^* P2 U1 P1 - P12|_F
    double compression_b_residual = 0;  // |P2 U2^* P1 U2 P2 - P12|_F
    BlockDecomposition blocks_a;        // U1 over {H12, L1, H1^perp}
    BlockDecomposition blocks_b;        // U2 over {H12, L2, H2^perp}
    Eigen::Index dims[4] = {0, 0, 0, 0};  // H12, L1, L2, rest
    bool passes = false;
};

/// Throws kPreconditionUnmet naming each repeatability condition whose
/// residual exceeds eq_tol. Certificate thresholds are 10 * eq_tol.
NoGoCertificate no_go_certificate(const InstancePair &pair, const Tolerances &tol = {});

}  // namespace seqmeas

#endif  // SEQMEAS_CRITERIA_H_
