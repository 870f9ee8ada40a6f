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

#include "seqmeas/errors.h"

namespace seqmeas {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kNotHermitian:
            return "NotHermitian";
        case ErrorKind::kNotSkewHermitian:
            return "NotSkewHermitian";
        case ErrorKind::kNotProjector:
            return "NotProjector";
        case ErrorKind::kNotUnitary:
            return "NotUnitary";
        case ErrorKind::kNotNested:
            return "NotNested";
        case ErrorKind::kNotPerpendicular:
            return "NotPerpendicular";
        case ErrorKind::kZeroBranch:
            return "ZeroBranch";
        case ErrorKind::kNotProjectorGram:
            return "NotProjectorGram";
        case ErrorKind::kPreconditionUnmet:
            return "PreconditionUnmet";
        case ErrorKind::kRankOutOfRange:
            return "RankOutOfRange";
        case ErrorKind::kDimensionMismatch:
            return "DimensionMismatch";
        case ErrorKind::kBadParameterLength:
            return "BadParameterLength";
        case ErrorKind::kInvalidInput:
            return "InvalidInput";
    }
    return "Unknown";
}

SeqMeasError::SeqMeasError(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

}  // namespace seqmeas
