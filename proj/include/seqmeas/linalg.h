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

#ifndef SEQMEAS_LINALG_H_
#define SEQMEAS_LINALG_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace seqmeas {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by every predicate in the library.
///
/// eq_tol   Frobenius threshold for operator equalities.
/// rank_tol eigenvalue / singular-value cutoff when extracting subspaces, and
///          the branch weight below which an outcome counts as impossible.
/// prob_tol slack for probability comparisons.
struct Tolerances {
    double eq_tol = 1e-9;
    double rank_tol = 1e-8;
    double prob_tol = 1e-9;

    /// Throws SeqMeasError(kInvalidInput) unless all three are positive.
    void validate() const;
};

/// Throws kInvalidInput if `m` is not square or has a NaN/Inf entry.
void require_square_finite(const Matrix &m, std::string_view what);

bool is_hermitian(const Matrix &m, const Tolerances &tol = {});
bool is_unitary(const Matrix &u, const Tolerances &tol = {});
bool is_projector(const Matrix &p, const Tolerances &tol = {});
bool is_effect(const Matrix &e, const Tolerances &tol = {});

/// M = left * diag(singular_values) * right^*, singular values descending.
struct Svd {
    Matrix left;
    RealVector singular_values;
    Matrix right;

    Matrix sigma() const;
};

Svd svd_decompose(const Matrix &m);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
/// Each eigenvector has its largest-magnitude component made real positive.
struct HermitianEig {
    RealVector values;
    Matrix vectors;
};

HermitianEig hermitian_eig(const Matrix &h, const Tolerances &tol = {});

/// exp(K) for skew-Hermitian K.
Matrix unitary_from_skew(const Matrix &k, const Tolerances &tol = {});

/// Largest |eigenvalue| of a Hermitian matrix.
double hermitian_spectral_norm(const Matrix &h);

/// A linear subspace of C^n carried as an orthonormal frame (n x k) together
/// with its orthogonal projector. k = 0 is allowed.
class Subspace {
   public:
    /// `frame` columns must be orthonormal (checked against tol.eq_tol).
    static Subspace from_frame(const Matrix &frame, const Tolerances &tol = {});
    static Subspace zero(Eigen::Index ambient_dim);
    /// span(e_i : i in indices), zero-based.
    static Subspace coordinate(Eigen::Index ambient_dim, std::span<const int> indices);

    Eigen::Index ambient_dim() const { return frame_.rows(); }
    Eigen::Index dim() const { return frame_.cols(); }
    const Matrix &frame() const { return frame_; }
    const Matrix &projector() const { return projector_; }

   private:
    Subspace(Matrix frame, Matrix projector) : frame_(std::move(frame)), projector_(std::move(projector)) {}

    Matrix frame_;
    Matrix projector_;
};

/// Range of an (approximate) orthogonal projector: eigenvectors with eigenvalue > 1/2.
Subspace range_of_projector(const Matrix &p, const Tolerances &tol = {});

/// Orthogonal complement within the ambient space.
Subspace orthogonal_complement(const Subspace &s, const Tolerances &tol = {});

/// {x : P1 x = x and P2 x = x}, as the eigenvalue-2 eigenspace of P1 + P2.
Subspace subspace_intersection(const Matrix &p1, const Matrix &p2, const Tolerances &tol = {});

/// Orthogonal complement of `h12` inside range(pj). Requires range(h12) in range(pj).
Subspace relative_complement(const Matrix &pj, const Subspace &h12, const Tolerances &tol = {});

/// H = H12 (+) L1 (+) L2 (+) rest, for projectors whose relative complements
/// L1, L2 are orthogonal.
struct SubspaceDecomposition {
    Subspace h12;
    Subspace l1;
    Subspace l2;
    Subspace rest;
};

SubspaceDecomposition four_way_decomposition(const Matrix &p1, const Matrix &p2, const Tolerances &tol = {});

/// Off-diagonal block frame(to)^* U frame(from), reported when its Frobenius
/// norm exceeds eq_tol.
struct Coupling {
    size_t from;
    size_t to;
    double magnitude;
};

struct BlockDecomposition {
    std::vector<Matrix> blocks;
    std::vector<Coupling> violations;
    double max_coupling = 0;

    bool invariant() const { return violations.empty(); }
};

/// Splits U along a partition of the space into mutually orthogonal subspaces.
/// Non-invariance is reported in `violations`, never thrown.
BlockDecomposition block_decompose(const Matrix &u, std::span<const Subspace> parts, const Tolerances &tol = {});

}  // namespace seqmeas

#endif  // SEQMEAS_LINALG_H_
