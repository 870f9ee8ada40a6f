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

#include "seqmeas/search.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "dense_oracle.h"
#include "gtest/gtest.h"
#include "seqmeas/criteria.h"
#include "seqmeas/errors.h"
#include "seqmeas/instances.h"
#include "test_util.h"

using namespace seqmeas;
using seqmeas::testing::diag;

namespace {

// Position of Re K_{12} (0-based) among the 16 reals of a 4x4 generator.
constexpr size_t kRe12 = 4 + 3 * 2;

std::vector<double> canonical_params(double theta) {
    std::vector<double> x(32, 0.0);
    x[kRe12] = -theta;
    return x;
}

SearchProblem small_problem(std::string_view constraints, uint64_t seed) {
    SearchProblem p;
    p.constraints = parse_constraints(constraints);
    p.restarts = 4;
    p.max_iters = 800;
    p.seed = seed;
    p.threads = 1;
    return p;
}

}  // namespace

TEST(search, parse_constraints) {
    EXPECT_TRUE(parse_constraints("").empty());
    EXPECT_TRUE(parse_constraints("none").empty());
    std::vector<Constraint> all(std::begin(kAllConstraints), std::end(kAllConstraints));
    EXPECT_EQ(parse_constraints("bab,aba,aa-b,aa-a,aba"), all);
    try {
        parse_constraints("aa-c");
        ADD_FAILURE();
    } catch (const SeqMeasError &e) {
        EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
    }
    for (Constraint c : kAllConstraints) EXPECT_EQ(parse_constraints(constraint_name(c)).front(), c);
}

TEST(search, default_projectors_reproduce_canonical_pair) {
    auto [p1, p2] = default_projectors(4, 3, 3);
    EXPECT_LE((p1 - diag({1, 1, 1, 0})).norm(), 0.0);
    EXPECT_LE((p2 - diag({1, 1, 0, 1})).norm(), 0.0);
    auto [q1, q2] = default_projectors(4, 1, 2);
    EXPECT_LE((q1 - diag({1, 0, 0, 0})).norm(), 0.0);
    EXPECT_LE((q2 - diag({0, 0, 1, 1})).norm(), 0.0);
}

TEST(search, zero_parameters_give_identity_unitaries) {
    SearchProblem p;
    std::vector<double> x(p.parameter_count(), 0.0);
    InstancePair pair = parametrize(x, p);
    EXPECT_LE((pair.a.unitary - Matrix::Identity(4, 4)).norm(), 1e-15);
    EXPECT_LE((pair.b.unitary - Matrix::Identity(4, 4)).norm(), 1e-15);
    EXPECT_LE(order_effect_magnitude(pair), 1e-15);
}

TEST(search, parameter_count) {
    SearchProblem p;
    EXPECT_EQ(p.parameter_count(), 32u);
    p.free_projectors = true;
    EXPECT_EQ(p.parameter_count(), 64u);
    std::vector<double> x(10, 0.0);
    try {
        parametrize(x, p);
        ADD_FAILURE();
    } catch (const SeqMeasError &e) {
        EXPECT_EQ(e.kind(), ErrorKind::kBadParameterLength);
    }
}

TEST(search, parametrization_is_unitary) {
    SeededRng rng(501);
    SearchProblem p;
    p.free_projectors = true;
    p.rank1 = 2;
    for (int trial = 0; trial < 50; trial++) {
        std::vector<double> x(p.parameter_count());
        for (double &v : x) v = 2 * rng.normal();
        InstancePair pair = parametrize(x, p);
        EXPECT_TRUE(is_unitary(pair.a.unitary));
        EXPECT_TRUE(is_unitary(pair.b.unitary));
        EXPECT_TRUE(is_projector(pair.a.projector));
        EXPECT_NEAR(pair.a.projector.trace().real(), 2, 1e-10);
        EXPECT_NEAR(pair.b.projector.trace().real(), 3, 1e-10);
    }
}

TEST(search, encoded_canonical_example) {
    SearchProblem p;
    p.constraints = parse_constraints("aa-a,aa-b,aba");
    const double theta = std::numbers::pi / 4;
    InstancePair pair = parametrize(canonical_params(theta), p);
    InstancePair expected = canonical_example_theta(theta);
    EXPECT_LE((pair.a.unitary - expected.a.unitary).norm(), 1e-14);
    EXPECT_LE((pair.b.unitary - expected.b.unitary).norm(), 1e-14);

    std::vector<double> x = canonical_params(std::numbers::pi / 2);
    EXPECT_NEAR(penalized_objective(x, p), 1.0, 1e-12);
    EXPECT_LE(total_penalty(parametrize(x, p), p), 1e-28);
}

TEST(search, zero_weight_gives_raw_magnitude) {
    SeededRng rng(503);
    SearchProblem p;
    p.constraints = parse_constraints("aa-a,aa-b,aba,bab");
    for (int trial = 0; trial < 20; trial++) {
        std::vector<double> x(p.parameter_count());
        for (double &v : x) v = rng.normal();
        InstancePair pair = parametrize(x, p);
        EXPECT_NEAR(penalized_objective(x, p, 0.0), order_effect_magnitude(pair), 1e-12);
        EXPECT_NEAR(penalized_objective(x, p), order_effect_magnitude(pair) - 100 * total_penalty(pair, p), 1e-9);
    }
}

TEST(search, residuals_agree_with_criteria) {
    SeededRng rng(505);
    SearchProblem p;
    std::vector<Constraint> all(std::begin(kAllConstraints), std::end(kAllConstraints));
    for (int trial = 0; trial < 50; trial++) {
        std::vector<double> x(p.parameter_count());
        for (double &v : x) v = rng.normal();
        InstancePair pair = parametrize(x, p);
        std::vector<double> r = constraint_residuals(pair, all);
        CriteriaReport c = evaluate_criteria(pair);
        EXPECT_NEAR(r[0], c.aa_a.residual, 1e-12);
        EXPECT_NEAR(r[1], c.aa_b.residual, 1e-12);
        EXPECT_NEAR(r[2], c.aba.residual, 1e-12);
        EXPECT_NEAR(r[3], c.bab.residual, 1e-12);
    }
}

TEST(search, restoration_reaches_feasible_set) {
    SeededRng rng(507);
    SearchProblem p;
    p.constraints = parse_constraints("aa-a,aa-b,aba");
    int converged = 0;
    for (int trial = 0; trial < 10; trial++) {
        std::vector<double> x(p.parameter_count());
        for (double &v : x) v = 0.3 * rng.normal();
        RestorationOutcome out = restore_feasibility(x, p);
        if (out.residual_norm <= 1e-12) {
            converged++;
            CriteriaReport c = evaluate_criteria(parametrize(out.params, p));
            EXPECT_TRUE(c.aa_a.holds && c.aa_b.holds && c.aba.holds);
        }
    }
    EXPECT_GE(converged, 5);
}

TEST(search, optimize_is_deterministic) {
    SearchProblem p = small_problem("aa-a,aa-b,aba", 7);
    SearchResult r1 = optimize(p);
    p.threads = 2;
    SearchResult r2 = optimize(p);
    EXPECT_EQ(r1.best_params, r2.best_params);
    EXPECT_EQ(r1.best_restart, r2.best_restart);
    EXPECT_EQ(r1.objective, r2.objective);
    ASSERT_EQ(r1.trace.size(), r2.trace.size());
    for (size_t i = 0; i < r1.trace.size(); i++) EXPECT_EQ(r1.trace[i].objective, r2.trace[i].objective);
}

TEST(search, trace_is_monotone_within_ascent_passes) {
    SearchResult r = optimize(small_problem("aa-a,aa-b,aba", 11));
    ASSERT_FALSE(r.trace.empty());
    std::map<std::pair<int, int>, double> last;
    for (const TraceRow &row : r.trace) {
        if (row.phase == 2) continue;
        auto key = std::make_pair(row.restart, row.phase);
        auto it = last.find(key);
        if (it != last.end()) EXPECT_GE(row.objective, it->second - 1e-15);
        last[key] = row.objective;
    }
}

TEST(search, objective_matches_criteria_reevaluation) {
    SearchResult r = optimize(small_problem("aa-a,aa-b,aba", 13));
    FeasibilityReport f = feasibility_report(r);
    EXPECT_TRUE(f.agreement);
    EXPECT_LE(f.objective_discrepancy, 1e-9);
    EXPECT_NEAR(r.objective, f.criteria.order_effect_magnitude, 1e-9);
}

TEST(search, unconstrained_qubit_pair_beats_grid) {
    SearchProblem p = small_problem("none", 17);
    p.dim = 2;
    p.rank1 = 1;
    p.rank2 = 1;
    p.free_projectors = true;
    SearchResult r = optimize(p);
    EXPECT_GT(r.objective, 0.0);

    // Real rotations of the two lines and the two unitaries, evaluated by the dense oracle.
    double grid_best = 0;
    const int steps = 12;
    for (int i = 0; i < steps; i++) {
        for (int j = 0; j < steps; j++) {
            for (int k = 0; k < steps; k++) {
                double t1 = std::numbers::pi * i / steps, t2 = std::numbers::pi * j / steps;
                double s = std::numbers::pi * k / steps;
                dense_oracle::DMat q1 = dense_oracle::plane_rotation(2, 0, 1, t1);
                dense_oracle::DMat q2 = dense_oracle::plane_rotation(2, 0, 1, t2);
                dense_oracle::DMat e1 = dense_oracle::diag_projector({1, 0});
                dense_oracle::DMeasurement a{dense_oracle::mul(dense_oracle::mul(q1, e1), dense_oracle::adj(q1)),
                                             dense_oracle::plane_rotation(2, 0, 1, s)};
                dense_oracle::DMeasurement b{dense_oracle::mul(dense_oracle::mul(q2, e1), dense_oracle::adj(q2)),
                                             dense_oracle::identity(2)};
                grid_best = std::max(grid_best, dense_oracle::hermitian_spectral_norm(
                                                    dense_oracle::order_difference(a, b)));
            }
        }
    }
    EXPECT_GT(grid_best, 0.9);
    EXPECT_GE(r.objective, grid_best - 1e-6);
    EXPECT_LE(r.objective, 1 + 1e-9);
}

TEST(search, all_four_constraints_kill_the_order_effect) {
    int feasible = 0, runs = 0;
    for (int dim : {3, 4, 5}) {
        for (uint64_t seed = 1; seed <= 5; seed++) {
            SearchProblem p = small_problem("aa-a,aa-b,aba,bab", seed);
            p.dim = dim;
            p.rank1 = dim - 1;
            p.rank2 = dim - 1;
            SearchResult r = optimize(p);
            runs++;
            if (r.feasible) {
                feasible++;
                EXPECT_LE(r.objective, 1e-5) << "dim " << dim << " seed " << seed;
            }
        }
    }
    EXPECT_GE(feasible * 2, runs);
}

TEST(search, three_constraints_reach_full_gap) {
    SearchResult r = optimize(small_problem("aa-a,aa-b,aba", 3));
    EXPECT_TRUE(r.feasible);
    EXPECT_GE(r.objective, 0.9);
}

TEST(search, problem_validation) {
    SearchProblem p;
    p.dim = 0;
    EXPECT_THROW(p.validate(), SeqMeasError);
    p.dim = 4;
    p.rank1 = 5;
    EXPECT_THROW(p.validate(), SeqMeasError);
    p.rank1 = 3;
    p.restarts = 0;
    EXPECT_THROW(p.validate(), SeqMeasError);
}
