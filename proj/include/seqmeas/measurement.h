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

#ifndef SEQMEAS_MEASUREMENT_H_
#define SEQMEAS_MEASUREMENT_H_

#include <span>
#include <string>

#include "seqmeas/linalg.h"

namespace seqmeas {

/// A two-outcome observable whose "yes" effect is the projector P and whose
/// post-measurement state for that outcome is U P psi / |U P psi|.
struct Measurement {
    Matrix projector;
    Matrix unitary;
    std::string label;

    /// Validates isProjector(P), isUnitary(U) and matching shapes.
    static Measurement make(Matrix projector, Matrix unitary, std::string label, const Tolerances &tol = {});

    Eigen::Index dim() const { return projector.rows(); }
    /// M = U P.
    Matrix transformer() const { return unitary * projector; }
};

/// Two measurements A = (P1, U1), B = (P2, U2) on the same space.
struct InstancePair {
    Measurement a;
    Measurement b;

    static InstancePair make(Measurement a, Measurement b);

    Eigen::Index dim() const { return a.dim(); }
};

struct BranchResult {
    Vector state;
    double weight;
};

/// psi -> M psi / |M psi| with weight |M psi|^2.
/// Throws kZeroBranch if the weight is at or below tol.rank_tol and
/// kInvalidInput if psi is not normalized within tol.prob_tol.
BranchResult apply_transformer(const Measurement &m, const Vector &psi, const Tolerances &tol = {});

/// |M_k ... M_1 psi|^2: probability that every measurement in `seq` answers yes.
double sequence_joint_prob(std::span<const Measurement> seq, const Vector &psi, const Tolerances &tol = {});

/// Runs the renormalized chain through `prefix`, then returns <P_final phi, phi>.
double conditional_final_prob(std::span<const Measurement> prefix, const Measurement &final_measurement,
                              const Vector &psi, const Tolerances &tol = {});

struct UnitaryFactor {
    Matrix unitary;
    Matrix projector;
};

/// Factor M = U P with P = M^* M. U comes from the full SVD M = W S V^* as
/// W V^*, which also fixes U on ker(P). Throws kNotProjectorGram when M^* M
/// is not an orthogonal projector.
UnitaryFactor extract_unitary_factor(const Matrix &m, const Tolerances &tol = {});

}  // namespace seqmeas

#endif  // SEQMEAS_MEASUREMENT_H_
