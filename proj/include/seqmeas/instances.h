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

#ifndef SEQMEAS_INSTANCES_H_
#define SEQMEAS_INSTANCES_H_

#include <cstdint>
#include <random>

#include "seqmeas/linalg.h"
#include "seqmeas/measurement.h"

namespace seqmeas {

/// Deterministic random stream: std::mt19937_64 for bits, uniforms from the
/// top 53 bits, normals by Box-Muller. The transforms are written here rather
/// than taken from <random> distributions so that a seed reproduces the same
/// numbers on every standard library. Bump kAlgorithmVersion on any change.
class SeededRng {
   public:
    static constexpr int kAlgorithmVersion = 1;

    explicit SeededRng(uint64_t seed) : engine_(seed), seed_(seed) {}

    uint64_t seed() const { return seed_; }
    double uniform();
    double normal();
    Complex complex_normal();
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi);

    /// Independent stream for sub-task `index` (restart, sample, ...).
    static uint64_t derive_seed(uint64_t seed, uint64_t index);

   private:
    std::mt19937_64 engine_;
    uint64_t seed_;
    bool has_spare_ = false;
    double spare_ = 0;
};

/// The four-dimensional example: P1 onto span(e1,e2,e3), P2 onto
/// span(e1,e2,e4), U1 = diag(u, 1), U2 = I. `u` must be a 3x3 unitary.
InstancePair canonical_example(const Matrix &u, const Tolerances &tol = {});

/// canonical_example with u rotating the (e2, e3) plane:
/// u e2 = cos(t) e2 + sin(t) e3, u e3 = -sin(t) e2 + cos(t) e3, u e1 = e1.
InstancePair canonical_example_theta(double theta);

/// Projector of exact rank `rank`: Q diag(1^rank, 0) Q^* with Q Haar-random.
Matrix random_projector(Eigen::Index dim, Eigen::Index rank, SeededRng &rng);

/// Haar unitary: QR of a complex Gaussian matrix with R's diagonal phases
/// moved into Q.
Matrix random_unitary(Eigen::Index dim, SeededRng &rng);

/// diag(V, W) in a frame adapted to (sub, sub^perp), V and W independent.
Matrix random_unitary_preserving(const Subspace &sub, SeededRng &rng);

struct DecompositionDims {
    int h12 = 1;
    int l1 = 0;
    int l2 = 0;
    int rest = 0;

    int total() const { return h12 + l1 + l2 + rest; }
};

/// Pair satisfying A-A, B-B, A-B-A and B-A-B: a random orthonormal basis is
/// cut into H12, L1, L2, rest of the requested sizes; P1 projects onto
/// H12 + L1, P2 onto H12 + L2; U_j is block diagonal over (H12, L_j, H_j^perp).
InstancePair no_go_generator(const DecompositionDims &dims, SeededRng &rng);

/// Pair satisfying A-A, B-B and A-B-A but generally not B-A-B: as above,
/// except U1 only preserves H1 (it may mix H12 with L1).
InstancePair aba_generator(const DecompositionDims &dims, SeededRng &rng);

/// Effect with a prescribed eigenvalue-1 eigenspace and a unit vector in it.
struct EffectSample {
    Matrix effect;
    Vector unit_vector;
    Eigen::Index unit_multiplicity;
};

/// Remaining eigenvalues are uniform in [0, 0.999].
EffectSample random_effect_with_unit_eigenspace(Eigen::Index dim, Eigen::Index multiplicity, SeededRng &rng);

/// U diag(s) V^* with s uniform in [0, 1].
Matrix random_contraction(Eigen::Index dim, SeededRng &rng);

/// Uniformly random unit vector.
Vector random_state(Eigen::Index dim, SeededRng &rng);

/// Finite truncation of the weighted shift: M e1 = a e2, M e_k = e_{k+1}
/// for 2 <= k <= n-1, M e_n = 0; E = M^* M = diag(|a|^2, 1, ..., 1, 0).
struct ShiftInstance {
    Complex a;
    int n = 0;
    Matrix m;
    Matrix e;

    /// |EM - M|_F over the whole space. The truncation makes column e_{n-1}
    /// fail (E e_n = 0 but M e_{n-1} = e_n), so this is 1 for every a.
    double em_residual() const;
    /// |(EM - M) e_k| summed over every k except n-1: the columns on which
    /// the infinite-dimensional identity survives truncation. Exactly 0.
    double em_residual_untruncated_columns() const;
};

/// Throws kInvalidInput for n < 3.
ShiftInstance truncated_shift(Complex a, int n);

}  // namespace seqmeas

#endif  // SEQMEAS_INSTANCES_H_
