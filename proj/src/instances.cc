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

#include "seqmeas/instances.h"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "seqmeas/errors.h"

namespace seqmeas {

double SeededRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0;
    do {
        u1 = uniform();
    } while (u1 <= 0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

Complex SeededRng::complex_normal() {
    double re = normal();
    double im = normal();
    return Complex(re, im) * std::numbers::sqrt2 * 0.5;
}

int SeededRng::uniform_int(int lo, int hi) {
    auto span = static_cast<uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
}

uint64_t SeededRng::derive_seed(uint64_t seed, uint64_t index) {
    // splitmix64 finalizer.
    uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

InstancePair canonical_example(const Matrix &u, const Tolerances &tol) {
    if (u.rows() != 3 || u.cols() != 3 || !u.allFinite() || !is_unitary(u, tol)) {
        throw SeqMeasError(ErrorKind::kNotUnitary, "canonical example needs a 3x3 unitary");
    }
    Matrix p1 = Matrix::Zero(4, 4);
    Matrix p2 = Matrix::Zero(4, 4);
    p1.diagonal() << 1, 1, 1, 0;
    p2.diagonal() << 1, 1, 0, 1;
    Matrix u1 = Matrix::Identity(4, 4);
    u1.topLeftCorner(3, 3) = u;
    return InstancePair::make(Measurement::make(p1, u1, "A", tol),
                              Measurement::make(p2, Matrix::Identity(4, 4), "B", tol));
}

InstancePair canonical_example_theta(double theta) {
    Matrix u = Matrix::Identity(3, 3);
    u(1, 1) = std::cos(theta);
    u(2, 1) = std::sin(theta);
    u(1, 2) = -std::sin(theta);
    u(2, 2) = std::cos(theta);
    return canonical_example(u);
}

Matrix random_unitary(Eigen::Index dim, SeededRng &rng) {
    if (dim < 1) throw SeqMeasError(ErrorKind::kDimensionMismatch, "random_unitary needs dim >= 1");
    Matrix g(dim, dim);
    for (Eigen::Index c = 0; c < dim; c++)
        for (Eigen::Index r = 0; r < dim; r++) g(r, c) = rng.complex_normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix &r = qr.matrixQR();
    for (Eigen::Index i = 0; i < dim; i++) {
        double mag = std::abs(r(i, i));
        if (mag > 0) q.col(i) *= r(i, i) / mag;
    }
    return q;
}

Matrix random_projector(Eigen::Index dim, Eigen::Index rank, SeededRng &rng) {
    if (dim < 1 || rank < 0 || rank > dim) {
        throw SeqMeasError(ErrorKind::kRankOutOfRange, "projector rank must lie in [0, dim]");
    }
    if (rank == 0) return Matrix::Zero(dim, dim);
    if (rank == dim) return Matrix::Identity(dim, dim);
    Matrix q = random_unitary(dim, rng).leftCols(rank);
    return q * q.adjoint();
}

Matrix random_unitary_preserving(const Subspace &sub, SeededRng &rng) {
    Eigen::Index n = sub.ambient_dim();
    Eigen::Index k = sub.dim();
    if (k == 0 || k == n) return random_unitary(n, rng);
    Matrix basis(n, n);
    basis << sub.frame(), orthogonal_complement(sub).frame();
    Matrix block = Matrix::Zero(n, n);
    block.topLeftCorner(k, k) = random_unitary(k, rng);
    block.bottomRightCorner(n - k, n - k) = random_unitary(n - k, rng);
    return basis * block * basis.adjoint();
}

namespace {

void check_dims(const DecompositionDims &dims) {
    if (dims.h12 < 1 || dims.l1 < 0 || dims.l2 < 0 || dims.rest < 0) {
        throw SeqMeasError(ErrorKind::kDimensionMismatch, "need h12 >= 1 and l1, l2, rest >= 0");
    }
}

// Random unitary acting on the listed column ranges of `basis` (as one block
// per range) and as the identity nowhere: ranges must cover [0, n).
Matrix block_unitary(const Matrix &basis, std::initializer_list<std::pair<int, int>> ranges, SeededRng &rng) {
    Eigen::Index n = basis.cols();
    Matrix block = Matrix::Zero(n, n);
    for (auto [start, size] : ranges) {
        if (size > 0) block.block(start, start, size, size) = random_unitary(size, rng);
    }
    return basis * block * basis.adjoint();
}

struct Frames {
    Matrix basis;
    Matrix p1;
    Matrix p2;
};

// Columns of a random unitary ordered as H12 | L1 | L2 | rest.
Frames random_frames(const DecompositionDims &dims, SeededRng &rng) {
    int n = dims.total();
    Matrix basis = random_unitary(n, rng);
    Matrix d1 = Matrix::Zero(n, n);
    Matrix d2 = Matrix::Zero(n, n);
    for (int i = 0; i < dims.h12; i++) d1(i, i) = d2(i, i) = 1.0;
    for (int i = 0; i < dims.l1; i++) d1(dims.h12 + i, dims.h12 + i) = 1.0;
    for (int i = 0; i < dims.l2; i++) d2(dims.h12 + dims.l1 + i, dims.h12 + dims.l1 + i) = 1.0;
    return {basis, basis * d1 * basis.adjoint(), basis * d2 * basis.adjoint()};
}

// Same basis reordered as H12 | L2 | L1 | rest, so B's blocks are contiguous.
Matrix swap_l1_l2(const Matrix &basis, const DecompositionDims &dims) {
    Matrix out(basis.rows(), basis.cols());
    out << basis.leftCols(dims.h12), basis.middleCols(dims.h12 + dims.l1, dims.l2),
        basis.middleCols(dims.h12, dims.l1), basis.rightCols(dims.rest);
    return out;
}

}  // namespace

InstancePair no_go_generator(const DecompositionDims &dims, SeededRng &rng) {
    check_dims(dims);
    Frames f = random_frames(dims, rng);
    Matrix u1 = block_unitary(f.basis, {{0, dims.h12}, {dims.h12, dims.l1}, {dims.h12 + dims.l1, dims.l2 + dims.rest}},
                              rng);
    Matrix u2 = block_unitary(swap_l1_l2(f.basis, dims),
                              {{0, dims.h12}, {dims.h12, dims.l2}, {dims.h12 + dims.l2, dims.l1 + dims.rest}}, rng);
    return InstancePair::make(Measurement::make(f.p1, u1, "A"), Measurement::make(f.p2, u2, "B"));
}

InstancePair aba_generator(const DecompositionDims &dims, SeededRng &rng) {
    check_dims(dims);
    Frames f = random_frames(dims, rng);
    Matrix u1 = block_unitary(f.basis, {{0, dims.h12 + dims.l1}, {dims.h12 + dims.l1, dims.l2 + dims.rest}}, rng);
    Matrix u2 = block_unitary(swap_l1_l2(f.basis, dims),
                              {{0, dims.h12}, {dims.h12, dims.l2}, {dims.h12 + dims.l2, dims.l1 + dims.rest}}, rng);
    return InstancePair::make(Measurement::make(f.p1, u1, "A"), Measurement::make(f.p2, u2, "B"));
}

EffectSample random_effect_with_unit_eigenspace(Eigen::Index dim, Eigen::Index multiplicity, SeededRng &rng) {
    if (multiplicity < 1 || multiplicity > dim) {
        throw SeqMeasError(ErrorKind::kRankOutOfRange, "eigenvalue-1 multiplicity must lie in [1, dim]");
    }
    Matrix q = random_unitary(dim, rng);
    RealVector spectrum(dim);
    for (Eigen::Index i = 0; i < dim; i++) spectrum(i) = i < multiplicity ? 1.0 : 0.999 * rng.uniform();
    Matrix e = q * spectrum.cast<Complex>().asDiagonal() * q.adjoint();
    e = (e + e.adjoint()) * 0.5;
    Vector coeffs(multiplicity);
    for (Eigen::Index i = 0; i < multiplicity; i++) coeffs(i) = rng.complex_normal();
    Vector phi = q.leftCols(multiplicity) * coeffs;
    return {e, phi / phi.norm(), multiplicity};
}

Matrix random_contraction(Eigen::Index dim, SeededRng &rng) {
    Matrix left = random_unitary(dim, rng);
    Matrix right = random_unitary(dim, rng);
    RealVector s(dim);
    for (Eigen::Index i = 0; i < dim; i++) s(i) = rng.uniform();
    return left * s.cast<Complex>().asDiagonal() * right.adjoint();
}

Vector random_state(Eigen::Index dim, SeededRng &rng) {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; i++) v(i) = rng.complex_normal();
    return v / v.norm();
}

double ShiftInstance::em_residual() const { return (e * m - m).norm(); }

double ShiftInstance::em_residual_untruncated_columns() const {
    Matrix diff = e * m - m;
    diff.col(n - 2).setZero();
    return diff.norm();
}

ShiftInstance truncated_shift(Complex a, int n) {
    if (n < 3) throw SeqMeasError(ErrorKind::kInvalidInput, "truncation dimension must be at least 3");
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw SeqMeasError(ErrorKind::kInvalidInput, "shift amplitude must be finite");
    }
    ShiftInstance out{a, n, Matrix::Zero(n, n), Matrix()};
    out.m(1, 0) = a;
    for (int k = 1; k < n - 1; k++) out.m(k + 1, k) = 1.0;
    out.e = out.m.adjoint() * out.m;
    return out;
}

}  // namespace seqmeas
