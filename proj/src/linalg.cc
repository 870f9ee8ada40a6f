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

#include "seqmeas/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "seqmeas/errors.h"

namespace seqmeas {

namespace {

std::string fmt_residual(std::string_view what, double value) {
    std::ostringstream os;
    os << what << " (residual " << value << ")";
    return os.str();
}

// Largest-magnitude component real positive; first index wins on ties.
// Returns the phase applied to each column.
Vector fix_column_phases(Matrix &vectors) {
    Vector phases = Vector::Ones(vectors.cols());
    for (Eigen::Index c = 0; c < vectors.cols(); c++) {
        Eigen::Index best = 0;
        double best_abs = -1;
        for (Eigen::Index r = 0; r < vectors.rows(); r++) {
            double a = std::abs(vectors(r, c));
            if (a > best_abs + 1e-12) {
                best_abs = a;
                best = r;
            }
        }
        if (best_abs > 0) {
            phases(c) = std::conj(vectors(best, c)) / best_abs;
            vectors.col(c) *= phases(c);
        }
    }
    return phases;
}

Matrix hermitian_part(const Matrix &h) { return (h + h.adjoint()) * 0.5; }

Subspace eigenspace_above(const Matrix &h, double cutoff, const Tolerances &tol) {
    HermitianEig eig = hermitian_eig(hermitian_part(h), tol);
    Eigen::Index k = 0;
    while (k < eig.values.size() && eig.values(k) >= cutoff) k++;
    if (k == 0) return Subspace::zero(h.rows());
    return Subspace::from_frame(eig.vectors.leftCols(k), tol);
}

}  // namespace

void Tolerances::validate() const {
    if (!(eq_tol > 0) || !(rank_tol > 0) || !(prob_tol > 0)) {
        throw SeqMeasError(ErrorKind::kInvalidInput, "tolerances must be strictly positive");
    }
}

void require_square_finite(const Matrix &m, std::string_view what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << " must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw SeqMeasError(ErrorKind::kInvalidInput, os.str());
    }
    if (!m.allFinite()) {
        throw SeqMeasError(ErrorKind::kInvalidInput, std::string(what) + " has a non-finite entry");
    }
}

bool is_hermitian(const Matrix &m, const Tolerances &tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm() <= tol.eq_tol;
}

bool is_unitary(const Matrix &u, const Tolerances &tol) {
    if (u.rows() != u.cols()) return false;
    Matrix id = Matrix::Identity(u.rows(), u.cols());
    return (u.adjoint() * u - id).norm() <= tol.eq_tol && (u * u.adjoint() - id).norm() <= tol.eq_tol;
}

bool is_projector(const Matrix &p, const Tolerances &tol) {
    if (!is_hermitian(p, tol)) return false;
    return (p * p - p).norm() <= tol.eq_tol;
}

bool is_effect(const Matrix &e, const Tolerances &tol) {
    if (!is_hermitian(e, tol)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(e), Eigen::EigenvaluesOnly);
    const RealVector &values = solver.eigenvalues();
    return values.minCoeff() >= -tol.eq_tol && values.maxCoeff() <= 1 + tol.eq_tol;
}

Matrix Svd::sigma() const {
    return singular_values.cast<Complex>().asDiagonal();
}

Svd svd_decompose(const Matrix &m) {
    require_square_finite(m, "svd input");
    Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Svd out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
    // The same phase on matching left/right columns leaves left * sigma * right^* unchanged.
    Vector phases = fix_column_phases(out.right);
    for (Eigen::Index c = 0; c < phases.size(); c++) out.left.col(c) *= phases(c);
    return out;
}

HermitianEig hermitian_eig(const Matrix &h, const Tolerances &tol) {
    require_square_finite(h, "eigen-decomposition input");
    double asym = (h - h.adjoint()).norm();
    if (asym > tol.eq_tol) {
        throw SeqMeasError(ErrorKind::kNotHermitian, fmt_residual("matrix is not Hermitian", asym));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
    const RealVector &ascending = solver.eigenvalues();
    std::vector<Eigen::Index> order(ascending.size());
    // Eigen returns ascending order; reading it backwards and then stable
    // sorting keeps ties in the solver's order.
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return ascending(a) > ascending(b); });
    HermitianEig out{RealVector(h.rows()), Matrix(h.rows(), h.cols())};
    for (size_t i = 0; i < order.size(); i++) {
        out.values(i) = ascending(order[i]);
        out.vectors.col(i) = solver.eigenvectors().col(order[i]);
    }
    fix_column_phases(out.vectors);
    return out;
}

Matrix unitary_from_skew(const Matrix &k, const Tolerances &tol) {
    require_square_finite(k, "generator");
    double residual = (k + k.adjoint()).norm();
    if (residual > tol.eq_tol) {
        throw SeqMeasError(ErrorKind::kNotSkewHermitian, fmt_residual("generator is not skew-Hermitian", residual));
    }
    // K = iH with H Hermitian; exp(K) = V diag(e^{i lambda}) V^*.
    Matrix h = Complex(0, -1) * k;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
    Vector phases(k.rows());
    for (Eigen::Index i = 0; i < k.rows(); i++) phases(i) = std::polar(1.0, solver.eigenvalues()(i));
    const Matrix &v = solver.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

double hermitian_spectral_norm(const Matrix &h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Subspace Subspace::from_frame(const Matrix &frame, const Tolerances &tol) {
    if (frame.cols() > frame.rows()) {
        throw SeqMeasError(ErrorKind::kDimensionMismatch, "frame has more columns than rows");
    }
    if (frame.cols() == 0) return zero(frame.rows());
    double residual = (frame.adjoint() * frame - Matrix::Identity(frame.cols(), frame.cols())).norm();
    if (residual > tol.eq_tol) {
        throw SeqMeasError(ErrorKind::kInvalidInput, fmt_residual("frame columns are not orthonormal", residual));
    }
    return Subspace(frame, frame * frame.adjoint());
}

Subspace Subspace::zero(Eigen::Index ambient_dim) {
    return Subspace(Matrix(ambient_dim, 0), Matrix::Zero(ambient_dim, ambient_dim));
}

Subspace Subspace::coordinate(Eigen::Index ambient_dim, std::span<const int> indices) {
    Matrix frame = Matrix::Zero(ambient_dim, static_cast<Eigen::Index>(indices.size()));
    for (size_t c = 0; c < indices.size(); c++) {
        if (indices[c] < 0 || indices[c] >= ambient_dim) {
            throw SeqMeasError(ErrorKind::kDimensionMismatch, "coordinate index out of range");
        }
        frame(indices[c], static_cast<Eigen::Index>(c)) = 1.0;
    }
    return from_frame(frame);
}

Subspace range_of_projector(const Matrix &p, const Tolerances &tol) {
    return eigenspace_above(p, 0.5, tol);
}

Subspace orthogonal_complement(const Subspace &s, const Tolerances &tol) {
    Matrix id = Matrix::Identity(s.ambient_dim(), s.ambient_dim());
    return range_of_projector(id - s.projector(), tol);
}

Subspace subspace_intersection(const Matrix &p1, const Matrix &p2, const Tolerances &tol) {
    require_square_finite(p1, "P1");
    require_square_finite(p2, "P2");
    if (p1.rows() != p2.rows()) {
        throw SeqMeasError(ErrorKind::kDimensionMismatch, "projectors act on different dimensions");
    }
    if (!is_projector(p1, tol)) throw SeqMeasError(ErrorKind::kNotProjector, "P1 is not an orthogonal projector");
    if (!is_projector(p2, tol)) throw SeqMeasError(ErrorKind::kNotProjector, "P2 is not an orthogonal projector");
    return eigenspace_above(p1 + p2, 2.0 - tol.rank_tol, tol);
}

Subspace relative_complement(const Matrix &pj, const Subspace &h12, const Tolerances &tol) {
    require_square_finite(pj, "Pj");
    if (pj.rows() != h12.ambient_dim()) {
        throw SeqMeasError(ErrorKind::kDimensionMismatch, "subspace and projector dimensions differ");
    }
    const Matrix &p12 = h12.projector();
    double residual = (pj * p12 - p12).norm();
    if (residual > tol.eq_tol) {
        throw SeqMeasError(ErrorKind::kNotNested, fmt_residual("H12 is not contained in range(Pj)", residual));
    }
    return range_of_projector(pj - p12, tol);
}

SubspaceDecomposition four_way_decomposition(const Matrix &p1, const Matrix &p2, const Tolerances &tol) {
    Subspace h12 = subspace_intersection(p1, p2, tol);
    Subspace l1 = relative_complement(p1, h12, tol);
    Subspace l2 = relative_complement(p2, h12, tol);
    double overlap = (l1.projector() * l2.projector()).norm();
    if (overlap > tol.eq_tol) {
        throw SeqMeasError(ErrorKind::kNotPerpendicular, fmt_residual("L1 and L2 are not orthogonal", overlap));
    }
    Eigen::Index n = p1.rows();
    Matrix rest = Matrix::Identity(n, n) - h12.projector() - l1.projector() - l2.projector();
    return {h12, l1, l2, range_of_projector(rest, tol)};
}

BlockDecomposition block_decompose(const Matrix &u, std::span<const Subspace> parts, const Tolerances &tol) {
    require_square_finite(u, "U");
    if (!is_unitary(u, tol)) throw SeqMeasError(ErrorKind::kNotUnitary, "block_decompose needs a unitary");
    Eigen::Index total = 0;
    for (const auto &s : parts) {
        if (s.ambient_dim() != u.rows()) {
            throw SeqMeasError(ErrorKind::kDimensionMismatch, "partition subspace has wrong ambient dimension");
        }
        total += s.dim();
    }
    if (total != u.rows()) {
        throw SeqMeasError(ErrorKind::kDimensionMismatch, "partition dimensions do not sum to the ambient dimension");
    }
    for (size_t i = 0; i < parts.size(); i++) {
        for (size_t j = i + 1; j < parts.size(); j++) {
            double overlap = (parts[i].projector() * parts[j].projector()).norm();
            if (overlap > tol.eq_tol) {
                throw SeqMeasError(ErrorKind::kDimensionMismatch,
                                   fmt_residual("partition subspaces are not orthogonal", overlap));
            }
        }
    }

    BlockDecomposition out;
    for (size_t from = 0; from < parts.size(); from++) {
        const Matrix &f = parts[from].frame();
        out.blocks.push_back(f.adjoint() * u * f);
        for (size_t to = 0; to < parts.size(); to++) {
            if (to == from || parts[to].dim() == 0 || f.cols() == 0) continue;
            double mass = (parts[to].frame().adjoint() * u * f).norm();
            out.max_coupling = std::max(out.max_coupling, mass);
            if (mass > tol.eq_tol) out.violations.push_back({from, to, mass});
        }
    }
    return out;
}

}  // namespace seqmeas
