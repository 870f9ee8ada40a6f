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

#include "seqmeas/measurement.h"

#include <cmath>
#include <sstream>

#include "seqmeas/errors.h"

namespace seqmeas {

namespace {

void require_state(const Vector &psi, Eigen::Index dim, const Tolerances &tol) {
    if (psi.size() != dim) {
        throw SeqMeasError(ErrorKind::kDimensionMismatch, "state dimension does not match the measurement");
    }
    if (!psi.allFinite() || std::abs(psi.squaredNorm() - 1.0) > tol.prob_tol) {
        std::ostringstream os;
        os << "state is not normalized (|psi|^2 = " << psi.squaredNorm() << ")";
        throw SeqMeasError(ErrorKind::kInvalidInput, os.str());
    }
}

}  // namespace

Measurement Measurement::make(Matrix projector, Matrix unitary, std::string label, const Tolerances &tol) {
    require_square_finite(projector, label + ".P");
    require_square_finite(unitary, label + ".U");
    if (projector.rows() != unitary.rows()) {
        throw SeqMeasError(ErrorKind::kDimensionMismatch, label + ": P and U have different dimensions");
    }
    if (!is_projector(projector, tol)) {
        throw SeqMeasError(ErrorKind::kNotProjector, label + ".P is not an orthogonal projector");
    }
    if (!is_unitary(unitary, tol)) {
        throw SeqMeasError(ErrorKind::kNotUnitary, label + ".U is not unitary");
    }
    return {std::move(projector), std::move(unitary), std::move(label)};
}

InstancePair InstancePair::make(Measurement a, Measurement b) {
    if (a.dim() != b.dim()) {
        throw SeqMeasError(ErrorKind::kDimensionMismatch, "A and B act on different dimensions");
    }
    return {std::move(a), std::move(b)};
}

BranchResult apply_transformer(const Measurement &m, const Vector &psi, const Tolerances &tol) {
    require_state(psi, m.dim(), tol);
    Vector out = m.unitary * (m.projector * psi);
    double weight = out.squaredNorm();
    if (weight <= tol.rank_tol) {
        std::ostringstream os;
        os << "outcome of " << m.label << " has probability " << weight;
        throw SeqMeasError(ErrorKind::kZeroBranch, os.str());
    }
    return {out / std::sqrt(weight), weight};
}

double sequence_joint_prob(std::span<const Measurement> seq, const Vector &psi, const Tolerances &tol) {
    if (seq.empty()) return 1.0;
    require_state(psi, seq.front().dim(), tol);
    Vector v = psi;
    for (const auto &m : seq) {
        if (m.dim() != v.size()) throw SeqMeasError(ErrorKind::kDimensionMismatch, "sequence mixes dimensions");
        v = m.unitary * (m.projector * v);
    }
    return v.squaredNorm();
}

double conditional_final_prob(std::span<const Measurement> prefix, const Measurement &final_measurement,
                              const Vector &psi, const Tolerances &tol) {
    Vector phi = psi;
    for (const auto &m : prefix) phi = apply_transformer(m, phi, tol).state;
    require_state(phi, final_measurement.dim(), tol);
    return phi.dot(final_measurement.projector * phi).real();
}

UnitaryFactor extract_unitary_factor(const Matrix &m, const Tolerances &tol) {
    require_square_finite(m, "M");
    Matrix gram = m.adjoint() * m;
    if (!is_projector(gram, tol)) {
        throw SeqMeasError(ErrorKind::kNotProjectorGram, "M^* M is not an orthogonal projector");
    }
    // M = W S V^* with S = diag(1..1, 0..0); P = V S V^*, so (W V^*) P = W S V^* = M.
    Svd svd = svd_decompose(m);
    Matrix u = svd.left * svd.right.adjoint();
    return {u, gram};
}

}  // namespace seqmeas
