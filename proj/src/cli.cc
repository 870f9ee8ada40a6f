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

#include "seqmeas/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "seqmeas/criteria.h"
#include "seqmeas/errors.h"
#include "seqmeas/instances.h"
#include "seqmeas/json_io.h"
#include "seqmeas/measurement.h"

namespace seqmeas::cli {

namespace {

constexpr const char *kToolVersion = "1.0.0";

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw SeqMeasError(ErrorKind::kInvalidInput, "cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

Json header(const RunConfig &config, std::string_view command) {
    return {{"schema_version", kSchemaVersion},
            {"tool_version", kToolVersion},
            {"command", command},
            {"seed", config.seed},
            {"tolerances", tolerances_to_json(config.tol)}};
}

void flatten(const Json &j, const std::string &prefix, std::ostream &os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
        }
    } else if (j.is_array()) {
        os << prefix << ",\"" << j.dump() << "\"\n";
    } else {
        os << prefix << "," << j.dump() << "\n";
    }
}

// Writes `text` to the configured path, or to `out` when none is set.
int write_text(const RunConfig &config, const std::string &text, std::ostream &out, std::ostream &err) {
    if (config.out_path.empty()) {
        out << text;
        return kExitOk;
    }
    std::ofstream file(config.out_path);
    if (!file) {
        err << "error: cannot write " << config.out_path << "\n";
        return kExitInvalidInput;
    }
    file << text;
    return file ? kExitOk : kExitInvalidInput;
}

int emit(const RunConfig &config, const Json &report, std::ostream &out, std::ostream &err) {
    if (config.format == Format::kCsv) {
        std::ostringstream os;
        os << "key,value\n";
        flatten(report, "", os);
        return write_text(config, os.str(), out, err);
    }
    return write_text(config, report.dump(2) + "\n", out, err);
}

// ---------------------------------------------------------------------------
// verify suites

struct Suite {
    std::string name;
    bool passed = true;
    int samples = 0;
    double worst = 0;
    Json details = Json::object();
};

int sample_count(const RunConfig &config, int base) {
    return std::max(1, static_cast<int>(std::lround(base * config.sample_scale)));
}

Suite suite_theorem1(const RunConfig &config, SeededRng rng) {
    Suite s{"theorem1_unit_expectation_forces_eigenvector"};
    s.samples = sample_count(config, 500);
    for (int i = 0; i < s.samples; i++) {
        int dim = rng.uniform_int(2, 8);
        int mult = rng.uniform_int(1, dim);
        EffectSample e = random_effect_with_unit_eigenspace(dim, mult, rng);
        bool ok = theorem1_certificate(e.effect, e.unit_vector, config.tol);
        s.worst = std::max(s.worst, (e.effect * e.unit_vector - e.unit_vector).norm());
        s.passed = s.passed && ok;
    }
    return s;
}

Suite suite_theorem2(const RunConfig &config, SeededRng rng) {
    Suite s{"theorem2_em_equals_m_vs_projector_gram"};
    s.samples = sample_count(config, 500);
    int forward_failures = 0;
    int biconditional_failures = 0;
    int converse_counterexamples = 0;
    for (int i = 0; i < s.samples; i++) {
        int dim = rng.uniform_int(2, 8);
        Matrix m;
        int kind = i % 3;
        if (kind == 2) {
            m = random_contraction(dim, rng);
        } else {
            int rank = rng.uniform_int(0, dim);
            Matrix p = random_projector(dim, rank, rng);
            Matrix u = kind == 0 ? random_unitary_preserving(range_of_projector(p), rng) : random_unitary(dim, rng);
            m = u * p;
        }
        Theorem2Result r = theorem2_check(m, config.tol);
        if (r.em_equals_m && !r.gram_is_projector) forward_failures++;
        if (kind != 1 && r.em_equals_m != r.gram_is_projector) biconditional_failures++;
        if (kind == 1 && r.gram_is_projector && !r.em_equals_m) converse_counterexamples++;
    }
    s.passed = forward_failures == 0 && biconditional_failures == 0;
    s.worst = forward_failures + biconditional_failures;
    s.details = {{"forwardFailures", forward_failures},
                 {"biconditionalFailuresOnRepeatableUPAndContractions", biconditional_failures},
                 {"genericUPConverseCounterexamples", converse_counterexamples}};
    return s;
}

Suite suite_lemma2(const RunConfig &config, SeededRng rng) {
    Suite s{"lemma2_unitary_factor_round_trip"};
    s.samples = sample_count(config, 200);
    for (int i = 0; i < s.samples; i++) {
        int dim = rng.uniform_int(2, 6);
        Matrix p = random_projector(dim, rng.uniform_int(0, dim), rng);
        Matrix m = random_unitary(dim, rng) * p;
        UnitaryFactor f = extract_unitary_factor(m, config.tol);
        double residual = (f.unitary * f.projector - m).norm();
        s.worst = std::max(s.worst, residual);
        s.passed = s.passed && residual <= config.tol.eq_tol && is_unitary(f.unitary, config.tol);
    }
    return s;
}

Suite suite_canonical(const RunConfig &config) {
    Suite s{"canonical_example_order_effect_with_aba"};
    s.samples = 1;
    InstancePair pair = canonical_example_theta(std::numbers::pi / 4);
    CriteriaReport r = evaluate_criteria(pair, config.tol);
    Vector e2 = Vector::Unit(4, 1);
    const Measurement ab[] = {pair.a, pair.b};
    const Measurement ba[] = {pair.b, pair.a};
    double p_ab = sequence_joint_prob(ab, e2, config.tol);
    double p_ba = sequence_joint_prob(ba, e2, config.tol);
    s.passed = r.aa_a.holds && r.aa_b.holds && r.aba.holds && !r.bab.holds && r.order_effect_magnitude >= 0.5 &&
               std::abs(p_ab - 0.5) <= config.tol.prob_tol && std::abs(p_ba - 1.0) <= config.tol.prob_tol;
    s.worst = std::max({r.aa_a.residual, r.aa_b.residual, r.aba.residual});
    s.details = {{"pAB", p_ab}, {"pBA", p_ba}, {"babResidual", r.bab.residual},
                 {"orderEffectMagnitude", r.order_effect_magnitude}};
    return s;
}

DecompositionDims random_dims(SeededRng &rng, int max_total) {
    DecompositionDims d;
    do {
        d.h12 = rng.uniform_int(1, 3);
        d.l1 = rng.uniform_int(0, 2);
        d.l2 = rng.uniform_int(0, 2);
        d.rest = rng.uniform_int(0, 2);
    } while (d.total() > max_total);
    return d;
}

Suite suite_structural(const RunConfig &config, SeededRng rng) {
    Suite s{"structural_consequences_of_aa_and_aba"};
    s.samples = sample_count(config, 200);
    const double threshold = 10 * config.tol.eq_tol;
    for (int i = 0; i < s.samples; i++) {
        InstancePair pair = aba_generator(random_dims(rng, 8), rng);
        CriteriaReport c = evaluate_criteria(pair, config.tol);
        if (!(c.aa_a.holds && c.aa_b.holds && c.aba.holds)) {
            s.passed = false;
            continue;
        }
        StructuralReport r = structural_consequences(pair, config.tol);
        double worst = std::max({r.projectors_commute.residual, r.perpendicular.residual, r.p2_h1_is_h12.residual,
                                 r.u2_preserves_h12.residual});
        s.worst = std::max(s.worst, worst);
        s.passed = s.passed && worst <= threshold;
    }
    return s;
}

Suite suite_no_go(const RunConfig &config, SeededRng rng) {
    Suite s{"no_go_all_four_conditions_kill_order_effect"};
    s.samples = sample_count(config, 100);
    for (int i = 0; i < s.samples; i++) {
        InstancePair pair = no_go_generator(random_dims(rng, 8), rng);
        try {
            NoGoCertificate cert = no_go_certificate(pair, config.tol);
            s.worst = std::max(s.worst, cert.order_effect_magnitude);
            s.passed = s.passed && cert.passes;
        } catch (const SeqMeasError &) {
            s.passed = false;
        }
    }
    return s;
}

Suite suite_magnitude_bound(const RunConfig &config, SeededRng rng) {
    Suite s{"order_effect_magnitude_bounds_every_state"};
    s.samples = sample_count(config, 200);
    for (int i = 0; i < s.samples; i++) {
        int dim = rng.uniform_int(2, 6);
        Measurement a{random_projector(dim, rng.uniform_int(0, dim), rng), random_unitary(dim, rng), "A"};
        Measurement b{random_projector(dim, rng.uniform_int(0, dim), rng), random_unitary(dim, rng), "B"};
        InstancePair pair{a, b};
        double magnitude = order_effect_magnitude(pair);
        for (int k = 0; k < 5; k++) {
            Vector psi = random_state(dim, rng);
            const Measurement ab[] = {a, b};
            const Measurement ba[] = {b, a};
            double gap = std::abs(sequence_joint_prob(ab, psi, config.tol) - sequence_joint_prob(ba, psi, config.tol));
            s.worst = std::max(s.worst, gap - magnitude);
            s.passed = s.passed && magnitude >= gap - config.tol.prob_tol;
        }
    }
    return s;
}

Suite suite_shift(const RunConfig &config) {
    Suite s{"truncated_shift_appendix"};
    s.samples = 3;
    ShiftInstance shift = truncated_shift(0.5, 6);
    HermitianEig eig = hermitian_eig(shift.e, config.tol);
    bool has_quarter = false;
    for (Eigen::Index i = 0; i < eig.values.size(); i++) has_quarter |= std::abs(eig.values(i) - 0.25) <= 1e-12;
    bool boundary = is_projector(truncated_shift(0.0, 6).e, config.tol) && is_projector(truncated_shift(1.0, 6).e, config.tol);
    double untruncated = shift.em_residual_untruncated_columns();
    s.passed = has_quarter && !is_projector(shift.e, config.tol) && boundary && untruncated == 0.0;
    s.worst = untruncated;
    s.details = {{"emResidualFull", shift.em_residual()}, {"emResidualUntruncatedColumns", untruncated}};
    return s;
}

}  // namespace

double parse_angle(std::string_view text) {
    std::string_view t = trim(text);
    size_t pi_at = t.find("pi");
    if (pi_at == std::string_view::npos) return parse_double(t, "angle");
    std::string_view coeff = trim(t.substr(0, pi_at));
    std::string_view rest = trim(t.substr(pi_at + 2));
    if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
    double factor = 1;
    if (coeff == "-") {
        factor = -1;
    } else if (!coeff.empty() && coeff != "+") {
        factor = parse_double(coeff, "angle coefficient");
    }
    double divisor = 1;
    if (!rest.empty()) {
        if (rest.front() != '/') {
            throw SeqMeasError(ErrorKind::kInvalidInput, "cannot parse angle '" + std::string(text) + "'");
        }
        divisor = parse_double(rest.substr(1), "angle divisor");
        if (divisor == 0) throw SeqMeasError(ErrorKind::kInvalidInput, "angle divisor is zero");
    }
    return factor * std::numbers::pi / divisor;
}

Complex parse_complex(std::string_view text) {
    size_t comma = text.find(',');
    if (comma == std::string_view::npos) return {parse_double(text, "complex value"), 0.0};
    return {parse_double(text.substr(0, comma), "real part"), parse_double(text.substr(comma + 1), "imaginary part")};
}

int cmd_verify(const RunConfig &config, std::ostream &out, std::ostream &err) {
    std::vector<std::function<Suite()>> suites = {
        [&] { return suite_theorem1(config, SeededRng(SeededRng::derive_seed(config.seed, 1))); },
        [&] { return suite_theorem2(config, SeededRng(SeededRng::derive_seed(config.seed, 2))); },
        [&] { return suite_lemma2(config, SeededRng(SeededRng::derive_seed(config.seed, 3))); },
        [&] { return suite_canonical(config); },
        [&] { return suite_structural(config, SeededRng(SeededRng::derive_seed(config.seed, 5))); },
        [&] { return suite_no_go(config, SeededRng(SeededRng::derive_seed(config.seed, 6))); },
        [&] { return suite_magnitude_bound(config, SeededRng(SeededRng::derive_seed(config.seed, 7))); },
        [&] { return suite_shift(config); },
    };
    Json report = header(config, "verify");
    Json list = Json::array();
    bool all = true;
    for (const auto &run_suite : suites) {
        Suite s;
        try {
            s = run_suite();
        } catch (const SeqMeasError &e) {
            s.passed = false;
            s.details = {{"error", e.what()}};
        }
        all = all && s.passed;
        list.push_back({{"name", s.name},
                        {"passed", s.passed},
                        {"samples", s.samples},
                        {"worstResidual", s.worst},
                        {"details", s.details}});
        if (!s.passed) err << "suite failed: " << s.name << "\n";
    }
    report["suites"] = list;
    report["passed"] = all;
    int code = emit(config, report, out, err);
    if (code != kExitOk) return code;
    return all ? kExitOk : kExitVerificationFailed;
}

namespace {

Json pair_report(const InstancePair &pair, const Tolerances &tol) {
    return {{"criteria", criteria_report_to_json(evaluate_criteria(pair, tol))},
            {"structural", structural_report_to_json(structural_consequences(pair, tol))}};
}

Json optional_prob(const std::function<double()> &f) {
    try {
        return f();
    } catch (const SeqMeasError &e) {
        if (e.kind() == ErrorKind::kZeroBranch) return nullptr;
        throw;
    }
}

}  // namespace

int cmd_example(const RunConfig &config, std::ostream &out, std::ostream &err) {
    double theta = parse_angle(config.theta);
    InstancePair pair = canonical_example_theta(theta);
    const Tolerances &tol = config.tol;
    Vector e2 = Vector::Unit(4, 1);
    const Measurement ab[] = {pair.a, pair.b};
    const Measurement ba[] = {pair.b, pair.a};

    Json report = header(config, "example");
    report["theta"] = theta;
    report["instance"] = instance_to_json(pair);
    report.update(pair_report(pair, tol));
    report["probabilities"] = {
        {"state", "e2"},
        {"pAB", sequence_joint_prob(ab, e2, tol)},
        {"pBA", sequence_joint_prob(ba, e2, tol)},
        {"abaConditional", optional_prob([&] { return conditional_final_prob(ab, pair.a, e2, tol); })},
        {"babConditional", optional_prob([&] { return conditional_final_prob(ba, pair.b, e2, tol); })},
    };
    return emit(config, report, out, err);
}

int cmd_check(const RunConfig &config, std::ostream &out, std::ostream &err) {
    if (config.in_path.empty()) {
        err << "error: check needs --in <instance.json>\n";
        return kExitInvalidInput;
    }
    std::ifstream file(config.in_path);
    if (!file) {
        err << "error: cannot read " << config.in_path << "\n";
        return kExitInvalidInput;
    }
    Json j = Json::parse(file, nullptr, false);
    if (j.is_discarded()) {
        err << "error: " << config.in_path << " is not valid JSON\n";
        return kExitInvalidInput;
    }
    InstancePair pair = instance_from_json(j, config.tol);
    Json report = header(config, "check");
    report["input"] = config.in_path;
    report.update(pair_report(pair, config.tol));
    return emit(config, report, out, err);
}

int cmd_search(const RunConfig &config, std::ostream &out, std::ostream &err) {
    SearchProblem problem = config.search;
    problem.seed = config.seed;
    SearchResult result = optimize(problem);
    FeasibilityReport feas = feasibility_report(result, config.tol);

    if (!config.trace_path.empty()) {
        std::ofstream trace(config.trace_path);
        if (!trace) {
            err << "error: cannot write " << config.trace_path << "\n";
            return kExitInvalidInput;
        }
        trace << trace_to_csv(result.trace);
    }
    if (config.format == Format::kCsv) return write_text(config, trace_to_csv(result.trace), out, err);

    Json report = header(config, "search");
    report["problem"] = search_problem_to_json(problem);
    report["result"] = search_result_to_json(result);
    report["feasibility"] = feasibility_report_to_json(feas);
    return emit(config, report, out, err);
}

int cmd_shift_demo(const RunConfig &config, std::ostream &out, std::ostream &err) {
    ShiftInstance shift = truncated_shift(parse_complex(config.a), config.n);
    HermitianEig eig = hermitian_eig(shift.e, config.tol);
    Theorem2Result t2 = theorem2_check(shift.m, config.tol);
    Json report = header(config, "shift-demo");
    report.update(shift_to_json(shift));
    std::vector<double> values(eig.values.data(), eig.values.data() + eig.values.size());
    report["eigenvaluesE"] = values;
    report["emResidual"] = shift.em_residual();
    report["emResidualUntruncatedColumns"] = shift.em_residual_untruncated_columns();
    report["isProjector"] = is_projector(shift.e, config.tol);
    report["theorem2"] = {{"emEqualsM", t2.em_equals_m}, {"gramIsProjector", t2.gram_is_projector}};
    return emit(config, report, out, err);
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Sequential projective measurements with unitary state transformers: "
                 "repeatability, order effect and search tools.",
                 "seqmeas"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    config.search.constraints = {Constraint::kAdjacentA, Constraint::kAdjacentB, Constraint::kSeparatedABA};
    std::string format = "json";
    std::string constraints = "aa-a,aa-b,aba";
    std::string ranks;

    app.add_option("--seed", config.seed, "RNG seed")->envname("SEQMEAS_SEED");
    app.add_option("--eq-tol,--tolerance", config.tol.eq_tol, "Operator-equality threshold")
        ->envname("SEQMEAS_EQ_TOL");
    app.add_option("--prob-tol", config.tol.prob_tol, "Probability threshold")->envname("SEQMEAS_PROB_TOL");
    app.add_option("--rank-tol", config.tol.rank_tol, "Subspace extraction cutoff")->envname("SEQMEAS_RANK_TOL");
    app.add_option("--out", config.out_path, "Write the report here instead of stdout")->envname("SEQMEAS_OUT");
    app.add_option("--format", format, "json or csv")
        ->envname("SEQMEAS_FORMAT")
        ->check(CLI::IsMember({"json", "csv"}));

    auto *verify = app.add_subcommand("verify", "Run every property suite");
    verify->add_option("--sample-scale", config.sample_scale, "Multiply suite sample counts")
        ->check(CLI::PositiveNumber);

    auto *example = app.add_subcommand("example", "Evaluate the 4D order-effect example");
    example->add_option("--theta", config.theta, "Rotation angle in the (e2,e3) plane, e.g. 0.3 or pi/4")
        ->envname("SEQMEAS_THETA");

    auto *check = app.add_subcommand("check", "Evaluate all criteria on an instance file");
    check->add_option("--in", config.in_path, "Instance JSON")->envname("SEQMEAS_IN");

    auto *search = app.add_subcommand("search", "Constrained search for the largest order effect");
    search->add_option("--dim", config.search.dim, "Hilbert space dimension")->envname("SEQMEAS_DIM");
    search->add_option("--constraints", constraints, "Comma list of aa-a,aa-b,aba,bab (or none)")
        ->envname("SEQMEAS_CONSTRAINTS");
    search->add_option("--ranks", ranks, "Projector ranks r1,r2 (default dim-1 each)")->envname("SEQMEAS_RANKS");
    search->add_flag("--free-projectors", config.search.free_projectors, "Optimize projector orientations too");
    search->add_option("--restarts", config.search.restarts, "Independent restarts")->envname("SEQMEAS_RESTARTS");
    search->add_option("--max-iters", config.search.max_iters, "Nelder-Mead iterations per pass")
        ->envname("SEQMEAS_MAX_ITERS");
    search->add_option("--penalty", config.search.penalty_weight, "Penalty weight")->envname("SEQMEAS_PENALTY");
    search->add_option("--threads", config.search.threads, "Worker threads (0 = all cores)");
    search->add_option("--trace", config.trace_path, "Also write the iteration trace as CSV");

    auto *shift = app.add_subcommand("shift-demo", "Truncated weighted shift with EM versus M");
    shift->add_option("--a", config.a, "Shift amplitude, 're' or 're,im'")->envname("SEQMEAS_A");
    shift->add_option("--n", config.n, "Truncation dimension (>= 3)")->envname("SEQMEAS_N");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }

    try {
        config.tol.validate();
        config.format = format == "csv" ? Format::kCsv : Format::kJson;
        if (app.got_subcommand(verify)) return cmd_verify(config, out, err);
        if (app.got_subcommand(example)) return cmd_example(config, out, err);
        if (app.got_subcommand(check)) return cmd_check(config, out, err);
        if (app.got_subcommand(shift)) return cmd_shift_demo(config, out, err);
        if (app.got_subcommand(search)) {
            config.search.constraints = parse_constraints(constraints);
            int d = config.search.dim;
            config.search.rank1 = config.search.rank2 = d - 1;
            if (!ranks.empty()) {
                size_t comma = ranks.find(',');
                if (comma == std::string::npos) {
                    throw SeqMeasError(ErrorKind::kInvalidInput, "--ranks expects r1,r2");
                }
                config.search.rank1 = static_cast<int>(parse_double(ranks.substr(0, comma), "rank1"));
                config.search.rank2 = static_cast<int>(parse_double(ranks.substr(comma + 1), "rank2"));
            }
            return cmd_search(config, out, err);
        }
    } catch (const SeqMeasError &e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}

}  // namespace seqmeas::cli
