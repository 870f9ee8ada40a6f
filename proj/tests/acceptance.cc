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

// Acceptance gate: one PASS/FAIL line per criterion at the published
// tolerances. `acceptance --criterion N` runs a single criterion.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dense_oracle.h"
#include "seqmeas/criteria.h"
#include "seqmeas/errors.h"
#include "seqmeas/instances.h"
#include "seqmeas/linalg.h"
#include "seqmeas/measurement.h"
#include "seqmeas/search.h"
#include "test_util.h"

using namespace seqmeas;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

Verdict criterion_1() {
    SeededRng rng(1001);
    int pass = 0;
    double worst = 0;
    for (int i = 0; i < 500; i++) {
        int dim = rng.uniform_int(2, 8);
        EffectSample s = random_effect_with_unit_eigenspace(dim, rng.uniform_int(1, dim), rng);
        double residual = (s.effect * s.unit_vector - s.unit_vector).norm();
        bool ok = theorem1_certificate(s.effect, s.unit_vector) && residual <= 1e-9;
        pass += ok ? 1 : 0;
        worst = std::max(worst, residual);
    }
    return {pass == 500, fmt("%d/500 certified, worst |E phi - phi| = %.3g", pass, worst)};
}

Verdict criterion_2() {
    SeededRng rng(1002);
    int agree = 0, up_agree = 0, contraction_agree = 0;
    for (int i = 0; i < 500; i++) {
        int dim = rng.uniform_int(2, 8);
        bool up_form = i < 250;
        Matrix m = up_form ? Matrix(random_unitary(dim, rng) * random_projector(dim, rng.uniform_int(0, dim), rng))
                           : random_contraction(dim, rng);
        Theorem2Result r = theorem2_check(m);
        bool ok = r.em_equals_m == r.gram_is_projector;
        agree += ok ? 1 : 0;
        (up_form ? up_agree : contraction_agree) += ok ? 1 : 0;
    }
    return {agree == 500, fmt("biconditional held in %d/500 (UP form %d/250, contractions %d/250)", agree, up_agree,
                              contraction_agree)};
}

Verdict criterion_3() {
    SeededRng rng(1003);
    int pass = 0;
    double worst = 0;
    for (int i = 0; i < 200; i++) {
        int dim = rng.uniform_int(2, 6);
        Matrix m = random_unitary(dim, rng) * random_projector(dim, rng.uniform_int(0, dim), rng);
        UnitaryFactor f = extract_unitary_factor(m);
        double residual = (f.unitary * f.projector - m).norm();
        pass += residual <= 1e-9 && is_unitary(f.unitary) && is_projector(f.projector) ? 1 : 0;
        worst = std::max(worst, residual);
    }
    return {pass == 200, fmt("%d/200 round trips, worst |UP - M| = %.3g", pass, worst)};
}

Verdict criterion_4() {
    const double theta = std::numbers::pi / 4;
    InstancePair pair = canonical_example_theta(theta);
    Tolerances tol;
    tol.eq_tol = 1e-10;
    CriteriaReport r = evaluate_criteria(pair, tol);
    Vector e2 = Vector::Unit(4, 1);
    const Measurement ab[] = {pair.a, pair.b};
    const Measurement ba[] = {pair.b, pair.a};
    const Measurement a_then_b[] = {pair.a, pair.b};
    double p_ab = sequence_joint_prob(ab, e2);
    double p_ba = sequence_joint_prob(ba, e2);
    double aba_cond = conditional_final_prob(a_then_b, pair.a, e2);

    dense_oracle::DMeasurement da = dense_oracle::canonical_a(theta), db = dense_oracle::canonical_b();
    dense_oracle::DVec de2 = dense_oracle::basis(4, 1);
    double o_ab = dense_oracle::joint({da, db}, de2);
    double o_ba = dense_oracle::joint({db, da}, de2);
    double o_aba = dense_oracle::conditional({da, db}, da, de2);
    double oracle_gap = std::max({std::abs(p_ab - o_ab), std::abs(p_ba - o_ba), std::abs(aba_cond - o_aba)});

    bool ok = r.aa_a.residual <= 1e-10 && r.aa_b.residual <= 1e-10 && r.aba.residual <= 1e-10 &&
              r.bab.residual >= 0.1 && std::abs(p_ab - 0.5) <= 1e-10 && std::abs(p_ba - 1.0) <= 1e-10 &&
              std::abs(aba_cond - 1.0) <= 1e-10 && oracle_gap <= 1e-10;
    return {ok, fmt("aaA %.1g aaB %.1g aba %.1g bab %.4f; pAB %.12f pBA %.12f ABA %.12f; oracle gap %.1g",
                    r.aa_a.residual, r.aa_b.residual, r.aba.residual, r.bab.residual, p_ab, p_ba, aba_cond,
                    oracle_gap)};
}

Verdict criterion_5() {
    SeededRng rng(1005);
    int pass = 0, samples = 0, discarded = 0;
    double worst_commute = 0, worst_perp = 0;
    while (samples < 200) {
        SearchProblem p;
        p.dim = rng.uniform_int(3, 5);
        p.rank1 = rng.uniform_int(1, p.dim - 1);
        p.rank2 = rng.uniform_int(1, p.dim - 1);
        p.free_projectors = true;
        p.constraints = parse_constraints("aa-a,aa-b,aba");
        std::vector<double> x(p.parameter_count());
        for (double &v : x) v = rng.normal();
        RestorationOutcome out = restore_feasibility(x, p);
        InstancePair pair = parametrize(out.params, p);
        CriteriaReport r = evaluate_criteria(pair);
        if (!(r.aa_a.holds && r.aa_b.holds && r.aba.holds)) {
            discarded++;
            continue;
        }
        samples++;
        worst_commute = std::max(worst_commute, r.projectors_commute.residual);
        worst_perp = std::max(worst_perp, r.perpendicular.residual);
        pass += r.projectors_commute.residual <= 1e-8 && r.perpendicular.residual <= 1e-8 ? 1 : 0;
    }
    return {pass == 200, fmt("%d/200 (dims 3-5, free projectors, %d unconverged starts resampled); worst "
                             "commutator %.3g, worst L1.L2 %.3g",
                             pass, discarded, worst_commute, worst_perp)};
}

Verdict criterion_6() {
    SeededRng rng(1006);
    int certified = 0;
    double worst = 0;
    for (int i = 0; i < 100; i++) {
        int target = 3 + i % 4;
        DecompositionDims dims;
        do {
            dims = {rng.uniform_int(1, 3), rng.uniform_int(0, 2), rng.uniform_int(0, 2), rng.uniform_int(0, 2)};
        } while (dims.total() != target);
        NoGoCertificate c = no_go_certificate(no_go_generator(dims, rng));
        certified += c.passes && c.order_effect_magnitude <= 1e-8 ? 1 : 0;
        worst = std::max(worst, c.order_effect_magnitude);
    }

    int feasible = 0;
    double worst_objective = 0;
    for (uint64_t seed = 1; seed <= 5; seed++) {
        SearchProblem p;
        p.constraints = parse_constraints("aa-a,aa-b,aba,bab");
        p.seed = seed;
        p.restarts = 16;
        SearchResult r = optimize(p);
        feasible += r.feasible && r.objective <= 1e-5 ? 1 : 0;
        worst_objective = std::max(worst_objective, r.objective);
    }
    return {certified == 100 && feasible == 5,
            fmt("(a) %d/100 certificates, worst magnitude %.3g; (b) %d/5 seeds feasible, worst objective %.3g",
                certified, worst, feasible, worst_objective)};
}

Verdict criterion_7() {
    int good = 0;
    double worst = 1;
    for (uint64_t seed = 1; seed <= 5; seed++) {
        SearchProblem p;
        p.constraints = parse_constraints("aa-a,aa-b,aba");
        p.seed = seed;
        p.restarts = 16;
        SearchResult r = optimize(p);
        good += r.feasible && r.objective >= 0.9 ? 1 : 0;
        worst = std::min(worst, r.objective);
    }
    return {good == 5, fmt("%d/5 seeds feasible with objective >= 0.9, lowest %.6f", good, worst)};
}

Verdict criterion_8() {
    ShiftInstance s = truncated_shift(0.5, 6);
    HermitianEig eig = hermitian_eig(s.e);
    bool has_quarter = false;
    for (Eigen::Index i = 0; i < eig.values.size(); i++) has_quarter |= std::abs(eig.values(i) - 0.25) <= 1e-12;
    bool boundary = is_projector(truncated_shift(0.0, 6).e) && is_projector(truncated_shift(1.0, 6).e);
    double residual = s.em_residual();
    bool ok = residual == 0.0 && has_quarter && !is_projector(s.e) && boundary;
    return {ok, fmt("|EM - M|_F = %.3g (untruncated columns %.3g), eigenvalue 0.25 %s, projector %s, boundary "
                    "projectors %s",
                    residual, s.em_residual_untruncated_columns(), has_quarter ? "present" : "absent",
                    is_projector(s.e) ? "yes" : "no", boundary ? "yes" : "no")};
}

struct Entry {
    int id;
    Verdict (*run)();
    double budget_seconds;
};

const Entry kEntries[] = {
    {1, criterion_1, 5}, {2, criterion_2, 5}, {3, criterion_3, 0}, {4, criterion_4, 0},
    {5, criterion_5, 0}, {6, criterion_6, 120}, {7, criterion_7, 120}, {8, criterion_8, 0},
};

}  // namespace

int main(int argc, char **argv) {
    int only = 0;
    for (int i = 1; i < argc; i++) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    int failures = 0;
    for (const Entry &e : kEntries) {
        if (only != 0 && e.id != only) continue;
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = e.run();
        } catch (const std::exception &ex) {
            v = {false, std::string("exception: ") + ex.what()};
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (e.budget_seconds > 0 && seconds > e.budget_seconds) {
            v.pass = false;
            v.detail += fmt("; over the %.0f s budget", e.budget_seconds);
        }
        std::printf("criterion %d: %s  %s (%.2f s)\n", e.id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), seconds);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
