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
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "seqmeas/errors.h"
#include "seqmeas/instances.h"

namespace seqmeas {

std::string_view constraint_name(Constraint c) {
    switch (c) {
        case Constraint::kAdjacentA:
            return "aa-a";
        case Constraint::kAdjacentB:
            return "aa-b";
        case Constraint::kSeparatedABA:
            return "aba";
        case Constraint::kSeparatedBAB:
            return "bab";
    }
    return "?";
}

std::vector<Constraint> parse_constraints(std::string_view text) {
    std::vector<Constraint> out;
    if (text.empty() || text == "none") return out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view token = text.substr(start, end - start);
        bool found = false;
        for (Constraint c : kAllConstraints) {
            if (token == constraint_name(c)) {
                if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
                found = true;
            }
        }
        if (!found) {
            throw SeqMeasError(ErrorKind::kInvalidInput,
                               "unknown constraint '" + std::string(token) + "' (expected aa-a, aa-b, aba, bab)");
        }
        start = end + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<Matrix, Matrix> default_projectors(int dim, int rank1, int rank2) {
    if (dim < 1 || rank1 < 0 || rank2 < 0 || rank1 > dim || rank2 > dim) {
        throw SeqMeasError(ErrorKind::kRankOutOfRange, "projector ranks must lie in [0, dim]");
    }
    int overlap = std::max(0, rank1 + rank2 - dim);
    Matrix p1 = Matrix::Zero(dim, dim);
    Matrix p2 = Matrix::Zero(dim, dim);
    for (int i = 0; i < rank1; i++) p1(i, i) = 1.0;
    for (int i = 0; i < overlap; i++) p2(i, i) = 1.0;
    for (int i = dim - (rank2 - overlap); i < dim; i++) p2(i, i) = 1.0;
    return {p1, p2};
}

void SearchProblem::validate() const {
    if (dim < 1 || dim > 16) throw SeqMeasError(ErrorKind::kInvalidInput, "search dimension must lie in [1, 16]");
    if (rank1 < 0 || rank2 < 0 || rank1 > dim || rank2 > dim) {
        throw SeqMeasError(ErrorKind::kRankOutOfRange, "projector ranks must lie in [0, dim]");
    }
    if (!(penalty_weight > 0)) throw SeqMeasError(ErrorKind::kInvalidInput, "penalty weight must be positive");
    if (escalation < 0) throw SeqMeasError(ErrorKind::kInvalidInput, "escalation must be non-negative");
    if (restarts < 1 || max_iters < 1) throw SeqMeasError(ErrorKind::kInvalidInput, "restarts and max_iters >= 1");
    if (!(feasibility_tol > 0)) throw SeqMeasError(ErrorKind::kInvalidInput, "feasibility tolerance must be positive");
    if (fixed_projectors) {
        const auto &[p1, p2] = *fixed_projectors;
        if (p1.rows() != dim || p2.rows() != dim || !is_projector(p1) || !is_projector(p2)) {
            throw SeqMeasError(ErrorKind::kNotProjector, "fixed projectors must be dim x dim orthogonal projectors");
        }
    }
}

bool SearchProblem::has(Constraint c) const {
    return std::find(constraints.begin(), constraints.end(), c) != constraints.end();
}

size_t SearchProblem::parameter_count() const {
    size_t per = static_cast<size_t>(dim) * static_cast<size_t>(dim);
    return free_projectors ? 4 * per : 2 * per;
}

std::pair<Matrix, Matrix> SearchProblem::resolved_projectors() const {
    if (fixed_projectors) return *fixed_projectors;
    return default_projectors(dim, rank1, rank2);
}

Matrix skew_from_params(std::span<const double> x, int dim) {
    if (x.size() != static_cast<size_t>(dim) * static_cast<size_t>(dim)) {
        throw SeqMeasError(ErrorKind::kBadParameterLength, "generator needs dim^2 parameters");
    }
    Matrix k = Matrix::Zero(dim, dim);
    size_t at = 0;
    for (int i = 0; i < dim; i++) k(i, i) = Complex(0, x[at++]);
    for (int i = 0; i < dim; i++) {
        for (int j = i + 1; j < dim; j++) {
            double re = x[at++];
            double im = x[at++];
            k(i, j) = Complex(re, im);
            k(j, i) = Complex(-re, im);
        }
    }
    return k;
}

namespace {

Matrix coordinate_projector(int dim, int rank) {
    Matrix d = Matrix::Zero(dim, dim);
    for (int i = 0; i < rank; i++) d(i, i) = 1.0;
    return d;
}

// Builds the pair without re-validating: exp of a skew generator is unitary
// and Q D Q^* is a projector by construction.
InstancePair build_pair(std::span<const double> x, const SearchProblem &problem) {
    if (x.size() != problem.parameter_count()) {
        std::ostringstream os;
        os << "expected " << problem.parameter_count() << " parameters, got " << x.size();
        throw SeqMeasError(ErrorKind::kBadParameterLength, os.str());
    }
    const int d = problem.dim;
    const size_t per = static_cast<size_t>(d) * static_cast<size_t>(d);
    Matrix u1 = unitary_from_skew(skew_from_params(x.subspan(0, per), d));
    Matrix u2 = unitary_from_skew(skew_from_params(x.subspan(per, per), d));
    Matrix p1, p2;
    if (problem.free_projectors) {
        Matrix q1 = unitary_from_skew(skew_from_params(x.subspan(2 * per, per), d));
        Matrix q2 = unitary_from_skew(skew_from_params(x.subspan(3 * per, per), d));
        p1 = q1 * coordinate_projector(d, problem.rank1) * q1.adjoint();
        p2 = q2 * coordinate_projector(d, problem.rank2) * q2.adjoint();
        p1 = (p1 + p1.adjoint()) * 0.5;
        p2 = (p2 + p2.adjoint()) * 0.5;
    } else {
        std::tie(p1, p2) = problem.resolved_projectors();
    }
    return {{p1, u1, "A"}, {p2, u2, "B"}};
}

// Residual matrix for one constraint.
Matrix residual_matrix(const InstancePair &pair, Constraint c) {
    const Matrix &p1 = pair.a.projector;
    const Matrix &u1 = pair.a.unitary;
    const Matrix &p2 = pair.b.projector;
    const Matrix &u2 = pair.b.unitary;
    switch (c) {
        case Constraint::kAdjacentA: {
            Matrix up = u1 * p1;
            return p1 * up - up;
        }
        case Constraint::kAdjacentB: {
            Matrix up = u2 * p2;
            return p2 * up - up;
        }
        case Constraint::kSeparatedABA: {
            Matrix chain = u2 * (p2 * (u1 * p1));
            return p1 * chain - chain;
        }
        case Constraint::kSeparatedBAB: {
            Matrix chain = u1 * (p1 * (u2 * p2));
            return p2 * chain - chain;
        }
    }
    return {};
}

Eigen::VectorXd residual_vector(std::span<const double> x, const SearchProblem &problem) {
    InstancePair pair = build_pair(x, problem);
    const Eigen::Index d2 = static_cast<Eigen::Index>(problem.dim) * problem.dim;
    Eigen::VectorXd out(2 * d2 * static_cast<Eigen::Index>(problem.constraints.size()));
    Eigen::Index at = 0;
    for (Constraint c : problem.constraints) {
        Matrix r = residual_matrix(pair, c);
        for (Eigen::Index i = 0; i < d2; i++) {
            out(at++) = r.data()[i].real();
            out(at++) = r.data()[i].imag();
        }
    }
    return out;
}

using Objective = std::function<double(std::span<const double>)>;
using ImproveHook = std::function<void(int iter, std::span<const double> x, double value)>;

struct NelderMeadOutcome {
    std::vector<double> best;
    double value;
};

// Maximizes f with the dimension-adaptive Nelder-Mead coefficients. When the
// simplex collapses it is rebuilt around the best point; the run ends after
// `max_iters` iterations or a rebuild that finds nothing better.
NelderMeadOutcome nelder_mead_maximize(const Objective &f, std::vector<double> x0, double step, int max_iters,
                                       const ImproveHook &on_improve) {
    const size_t n = x0.size();
    const double dn = static_cast<double>(n);
    const double alpha = 1.0;
    const double gamma = 1.0 + 2.0 / dn;
    const double rho = 0.75 - 1.0 / (2.0 * dn);
    const double sigma = 1.0 - 1.0 / dn;

    std::vector<std::vector<double>> simplex;
    std::vector<double> values;
    std::vector<double> best = x0;
    double best_value = f(x0);
    on_improve(0, best, best_value);

    auto build = [&](const std::vector<double> &center) {
        simplex.assign(n + 1, center);
        values.assign(n + 1, 0);
        values[0] = best_value;
        for (size_t i = 0; i < n; i++) {
            simplex[i + 1][i] += step;
            values[i + 1] = f(simplex[i + 1]);
        }
    };
    build(best);

    std::vector<size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    double rebuild_value = best_value;
    for (int iter = 1; iter <= max_iters; iter++) {
        std::iota(order.begin(), order.end(), 0);
        // Descending by value, stable on index, so ties resolve identically every run.
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return values[a] > values[b]; });
        const size_t hi = order[0];
        const size_t lo = order[n];
        const size_t second_lo = order[n - 1];

        if (values[hi] > best_value) {
            best_value = values[hi];
            best = simplex[hi];
            on_improve(iter, best, best_value);
        }

        double spread = values[hi] - values[lo];
        double diameter = 0;
        for (size_t i = 0; i <= n; i++)
            for (size_t j = 0; j < n; j++) diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[hi][j]));
        if (spread <= 1e-14 * (1.0 + std::abs(values[hi])) && diameter <= 1e-9) {
            if (best_value <= rebuild_value + 1e-14) break;
            rebuild_value = best_value;
            build(best);
            continue;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (size_t i = 0; i <= n; i++) {
            if (i == lo) continue;
            for (size_t j = 0; j < n; j++) centroid[j] += simplex[i][j] / dn;
        }
        for (size_t j = 0; j < n; j++) trial[j] = centroid[j] + alpha * (centroid[j] - simplex[lo][j]);
        double f_reflect = f(trial);

        if (f_reflect > values[hi]) {
            for (size_t j = 0; j < n; j++) trial2[j] = centroid[j] + gamma * (trial[j] - centroid[j]);
            double f_expand = f(trial2);
            if (f_expand > f_reflect) {
                simplex[lo] = trial2;
                values[lo] = f_expand;
            } else {
                simplex[lo] = trial;
                values[lo] = f_reflect;
            }
            continue;
        }
        if (f_reflect > values[second_lo]) {
            simplex[lo] = trial;
            values[lo] = f_reflect;
            continue;
        }
        bool outside = f_reflect > values[lo];
        for (size_t j = 0; j < n; j++) {
            trial2[j] = outside ? centroid[j] + rho * (trial[j] - centroid[j])
                                : centroid[j] - rho * (centroid[j] - simplex[lo][j]);
        }
        double f_contract = f(trial2);
        if (f_contract > (outside ? f_reflect : values[lo])) {
            simplex[lo] = trial2;
            values[lo] = f_contract;
            continue;
        }
        // Shrink toward the best vertex.
        for (size_t i = 0; i <= n; i++) {
            if (i == hi) continue;
            for (size_t j = 0; j < n; j++) simplex[i][j] = simplex[hi][j] + sigma * (simplex[i][j] - simplex[hi][j]);
            values[i] = f(simplex[i]);
        }
    }
    for (size_t i = 0; i <= n; i++) {
        if (values[i] > best_value) {
            best_value = values[i];
            best = simplex[i];
        }
    }
    return {best, best_value};
}

struct RestartOutcome {
    std::vector<double> params;
    InstancePair pair;
    double magnitude = 0;
    std::vector<double> residuals;
    bool feasible = false;
    std::vector<TraceRow> trace;
};

RestartOutcome run_restart(const SearchProblem &problem, int restart) {
    SeededRng rng(SeededRng::derive_seed(problem.seed, static_cast<uint64_t>(restart)));
    std::vector<double> x(problem.parameter_count());
    for (double &v : x) v = rng.normal();

    RestartOutcome out;
    auto run_phase = [&](int phase, double weight, double step) {
        Objective f = [&](std::span<const double> p) { return penalized_objective(p, problem, weight); };
        ImproveHook hook = [&](int iter, std::span<const double> p, double value) {
            InstancePair pair = build_pair(p, problem);
            out.trace.push_back({restart, phase, iter, value, total_penalty(pair, problem)});
        };
        x = nelder_mead_maximize(f, x, step, problem.max_iters, hook).best;
    };

    run_phase(0, problem.penalty_weight, 0.5);
    double final_weight = problem.penalty_weight;
    if (problem.escalation > 0 && !problem.constraints.empty()) {
        final_weight = problem.penalty_weight * problem.escalation;
        run_phase(1, final_weight, 0.05);
    }
    if (!problem.constraints.empty()) {
        RestorationOutcome restored = restore_feasibility(x, problem);
        x = restored.params;
        InstancePair pair = build_pair(x, problem);
        out.trace.push_back({restart, 2, restored.iterations, penalized_objective(x, problem, final_weight),
                             total_penalty(pair, problem)});
    }

    out.params = x;
    out.pair = build_pair(x, problem);
    out.magnitude = order_effect_magnitude(out.pair);
    out.residuals = constraint_residuals(out.pair, problem.constraints);
    out.feasible = std::all_of(out.residuals.begin(), out.residuals.end(),
                               [&](double r) { return r <= problem.feasibility_tol; });
    return out;
}

}  // namespace

InstancePair parametrize(std::span<const double> x, const SearchProblem &problem) {
    InstancePair raw = build_pair(x, problem);
    Tolerances tol;
    return InstancePair::make(Measurement::make(raw.a.projector, raw.a.unitary, "A", tol),
                              Measurement::make(raw.b.projector, raw.b.unitary, "B", tol));
}

std::vector<double> constraint_residuals(const InstancePair &pair, std::span<const Constraint> constraints) {
    std::vector<double> out;
    out.reserve(constraints.size());
    for (Constraint c : constraints) out.push_back(residual_matrix(pair, c).norm());
    return out;
}

double total_penalty(const InstancePair &pair, const SearchProblem &problem) {
    double sum = 0;
    for (Constraint c : problem.constraints) sum += residual_matrix(pair, c).squaredNorm();
    return sum;
}

double penalized_objective(std::span<const double> x, const SearchProblem &problem, double weight) {
    InstancePair pair = build_pair(x, problem);
    double penalty = weight == 0 ? 0.0 : weight * total_penalty(pair, problem);
    return order_effect_magnitude(pair) - penalty;
}

double penalized_objective(std::span<const double> x, const SearchProblem &problem) {
    return penalized_objective(x, problem, problem.penalty_weight);
}

RestorationOutcome restore_feasibility(std::span<const double> x, const SearchProblem &problem, int max_iters) {
    RestorationOutcome out{std::vector<double>(x.begin(), x.end()), 0, 0};
    if (problem.constraints.empty()) return out;
    const size_t n = out.params.size();
    const double h = 1e-6;
    const double target = 1e-13;

    Eigen::VectorXd r = residual_vector(out.params, problem);
    double cost = r.norm();
    double mu = 1e-3;
    std::vector<double> probe(n);
    for (int iter = 0; iter < max_iters && cost > target; iter++) {
        out.iterations = iter + 1;
        Eigen::MatrixXd jac(r.size(), static_cast<Eigen::Index>(n));
        probe = out.params;
        for (size_t j = 0; j < n; j++) {
            probe[j] = out.params[j] + h;
            Eigen::VectorXd plus = residual_vector(probe, problem);
            probe[j] = out.params[j] - h;
            Eigen::VectorXd minus = residual_vector(probe, problem);
            probe[j] = out.params[j];
            jac.col(static_cast<Eigen::Index>(j)) = (plus - minus) / (2 * h);
        }
        Eigen::MatrixXd normal = jac.transpose() * jac;
        Eigen::VectorXd rhs = -jac.transpose() * r;
        bool accepted = false;
        while (mu < 1e12) {
            Eigen::MatrixXd damped = normal;
            damped.diagonal().array() += mu;
            Eigen::VectorXd step = damped.ldlt().solve(rhs);
            for (size_t j = 0; j < n; j++) probe[j] = out.params[j] + step(static_cast<Eigen::Index>(j));
            Eigen::VectorXd r_new = residual_vector(probe, problem);
            double cost_new = r_new.norm();
            if (cost_new < cost) {
                out.params = probe;
                r = r_new;
                cost = cost_new;
                mu = std::max(mu / 5, 1e-15);
                accepted = true;
                break;
            }
            mu *= 4;
        }
        if (!accepted) break;
    }
    out.residual_norm = cost;
    return out;
}

SearchResult optimize(const SearchProblem &problem) {
    problem.validate();
    std::vector<RestartOutcome> outcomes(static_cast<size_t>(problem.restarts));
    int workers = problem.threads > 0 ? problem.threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, problem.restarts);
    if (workers == 1) {
        for (int r = 0; r < problem.restarts; r++) outcomes[static_cast<size_t>(r)] = run_restart(problem, r);
    } else {
        // Restart r is always handled by worker r % workers; each outcome has a
        // fixed slot, so the merge below does not depend on completion order.
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++) {
            pool.emplace_back([&, w] {
                for (int r = w; r < problem.restarts; r += workers) {
                    outcomes[static_cast<size_t>(r)] = run_restart(problem, r);
                }
            });
        }
        for (auto &t : pool) t.join();
    }

    size_t best = 0;
    for (size_t r = 1; r < outcomes.size(); r++) {
        const auto &cand = outcomes[r];
        const auto &cur = outcomes[best];
        if (cand.feasible != cur.feasible) {
            if (cand.feasible) best = r;
        } else if (cand.magnitude > cur.magnitude) {
            best = r;
        }
    }

    SearchResult result;
    result.problem = problem;
    const RestartOutcome &win = outcomes[best];
    result.best_pair = win.pair;
    result.best_params = win.params;
    result.best_restart = static_cast<int>(best);
    result.objective = win.magnitude;
    result.feasible = win.feasible;
    for (size_t i = 0; i < problem.constraints.size(); i++) {
        result.residuals.emplace_back(problem.constraints[i], win.residuals[i]);
    }
    for (const auto &o : outcomes) result.trace.insert(result.trace.end(), o.trace.begin(), o.trace.end());
    return result;
}

FeasibilityReport feasibility_report(const SearchResult &result, const Tolerances &tol) {
    FeasibilityReport out;
    out.criteria = evaluate_criteria(result.best_pair, tol);
    out.agreement = true;
    for (const auto &[c, search_residual] : result.residuals) {
        double criteria_residual = 0;
        switch (c) {
            case Constraint::kAdjacentA:
                criteria_residual = out.criteria.aa_a.residual;
                break;
            case Constraint::kAdjacentB:
                criteria_residual = out.criteria.aa_b.residual;
                break;
            case Constraint::kSeparatedABA:
                criteria_residual = out.criteria.aba.residual;
                break;
            case Constraint::kSeparatedBAB:
                criteria_residual = out.criteria.bab.residual;
                break;
        }
        bool agree = std::abs(search_residual - criteria_residual) <= 1e-9 * (1.0 + criteria_residual);
        out.agreement = out.agreement && agree;
        out.constraints.push_back({c, search_residual, criteria_residual, agree});
    }
    out.objective_discrepancy = std::abs(result.objective - out.criteria.order_effect_magnitude);
    out.agreement = out.agreement && out.objective_discrepancy <= 1e-9;

    bool all_four = std::all_of(std::begin(kAllConstraints), std::end(kAllConstraints),
                                [&](Constraint c) { return result.problem.has(c); });
    if (!all_four) {
        out.certificate_note = "skipped: not all four repeatability constraints were selected";
    } else if (!result.feasible) {
        out.certificate_note = "skipped: best result is infeasible";
    } else {
        try {
            out.certificate = no_go_certificate(result.best_pair, tol);
            out.certificate_note = out.certificate->passes ? "passed" : "failed";
        } catch (const SeqMeasError &e) {
            out.certificate_note = e.what();
        }
    }
    return out;
}

}  // namespace seqmeas
