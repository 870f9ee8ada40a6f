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

#include "seqmeas/json_io.h"

#include <cmath>
#include <sstream>

#include "seqmeas/errors.h"

namespace seqmeas {

namespace {

[[noreturn]] void bad(const std::string &what) { throw SeqMeasError(ErrorKind::kInvalidInput, what); }

bool is_pair(const Json &j) { return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(); }

const Json &field(const Json &j, const char *key, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) bad(where + ": missing field '" + key + "'");
    return j.at(key);
}

}  // namespace

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json &j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!is_pair(j)) bad("complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const Matrix &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); c++) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array");
    Matrix m;
    if (is_pair(j[0]) || j[0].is_number()) {
        auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(j.size()))));
        if (static_cast<size_t>(n * n) != j.size()) bad("flat matrix length is not a perfect square");
        m.resize(n, n);
        for (Eigen::Index i = 0; i < n * n; i++) m(i / n, i % n) = complex_from_json(j[static_cast<size_t>(i)]);
    } else {
        auto n = static_cast<Eigen::Index>(j.size());
        m.resize(n, n);
        for (Eigen::Index r = 0; r < n; r++) {
            const Json &row = j[static_cast<size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) bad("matrix must be square");
            for (Eigen::Index c = 0; c < n; c++) m(r, c) = complex_from_json(row[static_cast<size_t>(c)]);
        }
    }
    if (!m.allFinite()) bad("matrix has a non-finite entry");
    return m;
}

Json vector_to_json(const Vector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); i++) out.push_back(complex_to_json(v(i)));
    return out;
}

Vector vector_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) bad("vector must be a non-empty array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); i++) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

Json instance_to_json(const InstancePair &pair) {
    return {{"dim", pair.dim()},
            {"A", {{"P", matrix_to_json(pair.a.projector)}, {"U", matrix_to_json(pair.a.unitary)}}},
            {"B", {{"P", matrix_to_json(pair.b.projector)}, {"U", matrix_to_json(pair.b.unitary)}}}};
}

InstancePair instance_from_json(const Json &j, const Tolerances &tol) {
    if (!j.is_object()) bad("instance must be a JSON object");
    const Json &dim_field = field(j, "dim", "instance");
    if (!dim_field.is_number_integer() || dim_field.get<int>() < 1) bad("instance: dim must be a positive integer");
    auto dim = static_cast<Eigen::Index>(dim_field.get<int>());
    auto read = [&](const char *label) {
        const Json &m = field(j, label, "instance");
        Matrix p = matrix_from_json(field(m, "P", label));
        Matrix u = matrix_from_json(field(m, "U", label));
        if (p.rows() != dim || u.rows() != dim) {
            throw SeqMeasError(ErrorKind::kDimensionMismatch, std::string(label) + ": matrix size differs from dim");
        }
        return Measurement::make(p, u, label, tol);
    };
    Measurement a = read("A");
    Measurement b = read("B");
    return InstancePair::make(std::move(a), std::move(b));
}

Json tolerances_to_json(const Tolerances &tol) {
    return {{"eq_tol", tol.eq_tol}, {"rank_tol", tol.rank_tol}, {"prob_tol", tol.prob_tol}};
}

Json check_to_json(const Check &c) { return {{"holds", c.holds}, {"residual", c.residual}}; }

Json criteria_report_to_json(const CriteriaReport &r) {
    return {{"aaA", check_to_json(r.aa_a)},
            {"aaB", check_to_json(r.aa_b)},
            {"aba", check_to_json(r.aba)},
            {"bab", check_to_json(r.bab)},
            {"orderEffectMagnitude", r.order_effect_magnitude},
            {"projectorsCommute", check_to_json(r.projectors_commute)},
            {"perpendicular", check_to_json(r.perpendicular)},
            {"intersectionDim", r.intersection_dim}};
}

Json structural_report_to_json(const StructuralReport &r) {
    return {{"projectorsCommute", check_to_json(r.projectors_commute)},
            {"P2H1_is_H12", check_to_json(r.p2_h1_is_h12)},
            {"P1H2_is_H12", check_to_json(r.p1_h2_is_h12)},
            {"U1_preserves_H12", check_to_json(r.u1_preserves_h12)},
            {"U2_preserves_H12", check_to_json(r.u2_preserves_h12)},
            {"perpendicular", check_to_json(r.perpendicular)},
            {"intersectionDim", r.intersection_dim}};
}

Json block_decomposition_to_json(const BlockDecomposition &b) {
    Json violations = Json::array();
    for (const auto &v : b.violations) {
        violations.push_back({{"from", v.from}, {"to", v.to}, {"magnitude", v.magnitude}});
    }
    Json dims = Json::array();
    for (const auto &blk : b.blocks) dims.push_back(blk.rows());
    return {{"invariant", b.invariant()}, {"maxCoupling", b.max_coupling}, {"blockDims", dims},
            {"violations", violations}};
}

Json no_go_certificate_to_json(const NoGoCertificate &c) {
    return {{"passes", c.passes},
            {"orderEffectMagnitude", c.order_effect_magnitude},
            {"compressionAResidual", c.compression_a_residual},
            {"compressionBResidual", c.compression_b_residual},
            {"blocksA", block_decomposition_to_json(c.blocks_a)},
            {"blocksB", block_decomposition_to_json(c.blocks_b)},
            {"dims", {{"H12", c.dims[0]}, {"L1", c.dims[1]}, {"L2", c.dims[2]}, {"rest", c.dims[3]}}}};
}

Json shift_to_json(const ShiftInstance &s) {
    return {{"a", complex_to_json(s.a)}, {"n", s.n}, {"M", matrix_to_json(s.m)}, {"E", matrix_to_json(s.e)}};
}

Json search_problem_to_json(const SearchProblem &p) {
    Json constraints = Json::array();
    for (Constraint c : p.constraints) constraints.push_back(std::string(constraint_name(c)));
    Json out = {{"dim", p.dim},
                {"rank1", p.rank1},
                {"rank2", p.rank2},
                {"constraints", constraints},
                {"freeProjectors", p.free_projectors},
                {"penaltyWeight", p.penalty_weight},
                {"escalation", p.escalation},
                {"restarts", p.restarts},
                {"maxIters", p.max_iters},
                {"seed", p.seed},
                {"feasibilityTol", p.feasibility_tol}};
    if (!p.free_projectors) {
        auto [p1, p2] = p.resolved_projectors();
        out["fixProjectors"] = {{"P1", matrix_to_json(p1)}, {"P2", matrix_to_json(p2)}};
    }
    return out;
}

SearchProblem search_problem_from_json(const Json &j) {
    if (!j.is_object()) bad("search problem must be a JSON object");
    SearchProblem p;
    try {
        p.dim = j.value("dim", p.dim);
        p.rank1 = j.value("rank1", p.dim - 1);
        p.rank2 = j.value("rank2", p.dim - 1);
        p.free_projectors = j.value("freeProjectors", false);
        p.penalty_weight = j.value("penaltyWeight", p.penalty_weight);
        p.escalation = j.value("escalation", p.escalation);
        p.restarts = j.value("restarts", p.restarts);
        p.max_iters = j.value("maxIters", p.max_iters);
        p.seed = j.value("seed", p.seed);
        p.feasibility_tol = j.value("feasibilityTol", p.feasibility_tol);
        if (j.contains("constraints")) {
            std::string joined;
            for (const auto &c : j.at("constraints")) joined += (joined.empty() ? "" : ",") + c.get<std::string>();
            p.constraints = parse_constraints(joined);
        }
        if (j.contains("fixProjectors")) {
            const Json &fp = j.at("fixProjectors");
            p.fixed_projectors = std::make_pair(matrix_from_json(field(fp, "P1", "fixProjectors")),
                                                matrix_from_json(field(fp, "P2", "fixProjectors")));
        }
    } catch (const nlohmann::json::exception &e) {
        bad(std::string("search problem: ") + e.what());
    }
    p.validate();
    return p;
}

Json search_result_to_json(const SearchResult &r) {
    Json residuals = Json::object();
    for (const auto &[c, value] : r.residuals) residuals[std::string(constraint_name(c))] = value;
    return {{"objective", r.objective},
            {"feasible", r.feasible},
            {"bestRestart", r.best_restart},
            {"residuals", residuals},
            {"bestParams", r.best_params},
            {"bestPair", instance_to_json(r.best_pair)},
            {"traceLength", r.trace.size()}};
}

Json feasibility_report_to_json(const FeasibilityReport &r) {
    Json constraints = Json::array();
    for (const auto &c : r.constraints) {
        constraints.push_back({{"constraint", std::string(constraint_name(c.constraint))},
                               {"searchResidual", c.search_residual},
                               {"criteriaResidual", c.criteria_residual},
                               {"agree", c.agree}});
    }
    Json out = {{"criteria", criteria_report_to_json(r.criteria)},
                {"constraints", constraints},
                {"objectiveDiscrepancy", r.objective_discrepancy},
                {"agreement", r.agreement},
                {"certificateNote", r.certificate_note}};
    out["noGoCertificate"] = r.certificate ? no_go_certificate_to_json(*r.certificate) : Json(nullptr);
    return out;
}

std::string trace_to_csv(const std::vector<TraceRow> &trace) {
    std::ostringstream os;
    os.precision(17);
    os << "iter,restart,phase,objective,total_penalty\n";
    for (const auto &row : trace) {
        os << row.iter << "," << row.restart << "," << row.phase << "," << row.objective << "," << row.penalty << "\n";
    }
    return os.str();
}

}  // namespace seqmeas
