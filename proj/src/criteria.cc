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

#include "seqmeas/criteria.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seqmeas/errors.h"

namespace seqmeas {

namespace {

// Projector onto range(m), rank decided by singular values above rank_tol.
Matrix range_projector(const Matrix &m, const Tolerances &tol) {
    Svd svd = svd_decompose(m);
    Eigen::Index r = 0;
    while (r < svd.singular_values.size() && svd.singular_values(r) > tol.rank_tol) r++;
    Matrix w = svd.left.leftCols(r);
    return w * w.adjoint();
}

double invariance_residual(const Matrix &u, const Matrix &p) { return (p * u * p - u * p).norm(); }

}  // namespace

bool theorem1_certificate(const Matrix &e, const Vector &phi, const Tolerances &tol) {
    require_square_finite(e, "E");
    if (!is_effect(e, tol)) throw SeqMeasError(ErrorKind::kPreconditionUnmet, "E is not an effect");
    if (phi.size() != e.rows() || std::abs(phi.squaredNorm() - 1.0) > tol.prob_tol) {
        throw SeqMeasError(ErrorKind::kPreconditionUnmet, "phi is not a unit vector of matching dimension");
    }
    double expectation = phi.dot(e * phi).real();
    if (expectation < 1.0 - tol.prob_tol) {
        std::ostringstream os;
        os << "<E phi, phi> = " << expectation << " is below 1";
        throw SeqMeasError(ErrorKind::kPreconditionUnmet, os.str());
    }
    return (e * phi - phi).norm() <= tol.eq_tol;
}

Check adjacent_repeatability(const Measurement &m, const Tolerances &tol) {
    return Check::from_residual(invariance_residual(m.unitary, m.projector), tol.eq_tol);
}

Theorem2Result theorem2_check(const Matrix &m, const Tolerances &tol) {
    require_square_finite(m, "M");
    Matrix gram = m.adjoint() * m;
    return {(gram * m - m).norm() <= tol.eq_tol, is_projector(gram, tol)};
}

Matrix order_effect_operator(const InstancePair &pair) {
    const Matrix &p1 = pair.a.projector;
    const Matrix &u1 = pair.a.unitary;
    const Matrix &p2 = pair.b.projector;
    const Matrix &u2 = pair.b.unitary;
    Matrix m = u1 * p1;
    Matrix n = u2 * p2;
    return m.adjoint() * p2 * m - n.adjoint() * p1 * n;
}

double order_effect_magnitude(const InstancePair &pair) {
    return hermitian_spectral_norm(order_effect_operator(pair));
}

Check aba_repeatability(const InstancePair &pair, const Tolerances &tol) {
    Matrix chain = pair.b.transformer() * pair.a.transformer();
    return Check::from_residual((pair.a.projector * chain - chain).norm(), tol.eq_tol);
}

Check bab_repeatability(const InstancePair &pair, const Tolerances &tol) {
    Matrix chain = pair.a.transformer() * pair.b.transformer();
    return Check::from_residual((pair.b.projector * chain - chain).norm(), tol.eq_tol);
}

StructuralReport structural_consequences(const InstancePair &pair, const Tolerances &tol) {
    const Matrix &p1 = pair.a.projector;
    const Matrix &p2 = pair.b.projector;
    Subspace h12 = subspace_intersection(p1, p2, tol);
    const Matrix &p12 = h12.projector();

    StructuralReport out;
    out.intersection_dim = h12.dim();
    out.projectors_commute = Check::from_residual((p1 * p2 - p2 * p1).norm(), tol.eq_tol);
    out.p2_h1_is_h12 = Check::from_residual((range_projector(p2 * p1, tol) - p12).norm(), tol.eq_tol);
    out.p1_h2_is_h12 = Check::from_residual((range_projector(p1 * p2, tol) - p12).norm(), tol.eq_tol);
    out.u1_preserves_h12 = Check::from_residual(invariance_residual(pair.a.unitary, p12), tol.eq_tol);
    out.u2_preserves_h12 = Check::from_residual(invariance_residual(pair.b.unitary, p12), tol.eq_tol);
    Subspace l1 = relative_complement(p1, h12, tol);
    Subspace l2 = relative_complement(p2, h12, tol);
    out.perpendicular = Check::from_residual((l1.projector() * l2.projector()).norm(), tol.eq_tol);
    return out;
}

CriteriaReport evaluate_criteria(const InstancePair &pair, const Tolerances &tol) {
    CriteriaReport out;
    out.aa_a = adjacent_repeatability(pair.a, tol);
    out.aa_b = adjacent_repeatability(pair.b, tol);
    out.aba = aba_repeatability(pair, tol);
    out.bab = bab_repeatability(pair, tol);
    out.order_effect_magnitude = order_effect_magnitude(pair);
    StructuralReport s = structural_consequences(pair, tol);
    out.projectors_commute = s.projectors_commute;
    out.perpendicular = s.perpendicular;
    out.intersection_dim = s.intersection_dim;
    return out;
}

NoGoCertificate no_go_certificate(const InstancePair &pair, const Tolerances &tol) {
    struct Named {
        const char *name;
        Check check;
    };
    const Named conditions[] = {
        {"aa-a", adjacent_repeatability(pair.a, tol)},
        {"aa-b", adjacent_repeatability(pair.b, tol)},
        {"aba", aba_repeatability(pair, tol)},
        {"bab", bab_repeatability(pair, tol)},
    };
    std::ostringstream unmet;
    for (const auto &c : conditions) {
        if (!c.check.holds) unmet << " " << c.name << "=" << c.check.residual;
    }
    if (!unmet.str().empty()) {
        throw SeqMeasError(ErrorKind::kPreconditionUnmet, "repeatability residuals above eq_tol:" + unmet.str());
    }

    const double threshold = 10 * tol.eq_tol;
    const Matrix &p1 = pair.a.projector;
    const Matrix &p2 = pair.b.projector;
    SubspaceDecomposition parts = four_way_decomposition(p1, p2, tol);
    const Matrix &p12 = parts.h12.projector();

    NoGoCertificate out;
    out.dims[0] = parts.h12.dim();
    out.dims[1] = parts.l1.dim();
    out.dims[2] = parts.l2.dim();
    out.dims[3] = parts.rest.dim();
    out.order_effect_magnitude = order_effect_magnitude(pair);
    Matrix m = pair.a.transformer();
    Matrix n = pair.b.transformer();
    out.compression_a_residual = (m.adjoint() * p2 * m - p12).norm();
    out.compression_b_residual = (n.adjoint() * p1 * n - p12).norm();

    Eigen::Index dim = pair.dim();
    Matrix id = Matrix::Identity(dim, dim);
    const Subspace split_a[] = {parts.h12, parts.l1, range_of_projector(id - p1, tol)};
    const Subspace split_b[] = {parts.h12, parts.l2, range_of_projector(id - p2, tol)};
    Tolerances loose = tol;
    loose.eq_tol = threshold;
    out.blocks_a = block_decompose(pair.a.unitary, split_a, loose);
    out.blocks_b = block_decompose(pair.b.unitary, split_b, loose);

    out.passes = out.order_effect_magnitude <= threshold && out.compression_a_residual <= threshold &&
                 out.compression_b_residual <= threshold && out.blocks_a.invariant() && out.blocks_b.invariant();
    return out;
}

}  // namespace seqmeas
