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

#ifndef SEQMEAS_ERRORS_H_
#define SEQMEAS_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace seqmeas {

enum class ErrorKind {
    kNotHermitian,
    kNotSkewHermitian,
    kNotProjector,
    kNotUnitary,
    kNotNested,
    kNotPerpendicular,
    kZeroBranch,
    kNotProjectorGram,
    kPreconditionUnmet,
    kRankOutOfRange,
    kDimensionMismatch,
    kBadParameterLength,
    kInvalidInput,
};

std::string_view error_kind_name(ErrorKind kind);

/// Raised when an operation's precondition is violated. `kind()` identifies
/// which contract failed; the message carries the offending magnitude.
class SeqMeasError : public std::runtime_error {
   public:
    SeqMeasError(ErrorKind kind, const std::string &message);
    ErrorKind kind() const { return kind_; }

   private:
    ErrorKind kind_;
};

}  // namespace seqmeas

#endif  // SEQMEAS_ERRORS_H_
