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

#ifndef SEQMEAS_JSON_IO_H_
#define SEQMEAS_JSON_IO_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "seqmeas/criteria.h"
#include "seqmeas/instances.h"
#include "seqmeas/linalg.h"
#include "seqmeas/measurement.h"
#include "seqmeas/search.h"

namespace seqmeas {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Matrices are written as rows of [re, im] pairs: [[[re, im], ...], ...].
// The reader also accepts a flat row-major list of n^2 pairs.
Json complex_to_json(Complex c);
Complex complex_from_json(const Json &j);
Json matrix_to_json(const Matrix &m);
Matrix matrix_from_json(const Json &j);
Json vector_to_json(const Vector &v);
Vector vector_from_json(const Json &j);

/// {"dim": n, "A": {"P": matrix, "U": matrix}, "B": {...}}
Json instance_to_json(const InstancePair &pair);
/// Validates every invariant; throws SeqMeasError naming the first failure.
InstancePair instance_from_json(const Json &j, const Tolerances &tol = {});

Json tolerances_to_json(const Tolerances &tol);
Json check_to_json(const Check &c);
Json criteria_report_to_json(const CriteriaReport &r);
Json structural_report_to_json(const StructuralReport &r);
Json block_decomposition_to_json(const BlockDecomposition &b);
Json no_go_certificate_to_json(const NoGoCertificate &c);
/// {"a": [re, im], "n": n, "M": matrix, "E": matrix}
Json shift_to_json(const ShiftInstance &s);

Json search_problem_to_json(const SearchProblem &p);
SearchProblem search_problem_from_json(const Json &j);
Json search_result_to_json(const SearchResult &r);
Json feasibility_report_to_json(const FeasibilityReport &r);

/// iter,restart,phase,objective,total_penalty
std::string trace_to_csv(const std::vector<TraceRow> &trace);

}  // namespace seqmeas

#endif  // SEQMEAS_JSON_IO_H_
