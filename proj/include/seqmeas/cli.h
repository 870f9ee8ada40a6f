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

#ifndef SEQMEAS_CLI_H_
#define SEQMEAS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqmeas/linalg.h"
#include "seqmeas/search.h"

namespace seqmeas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInvalidInput = 2;

enum class Command { kVerify, kExample, kCheck, kSearch, kShiftDemo };
enum class Format { kJson, kCsv };

struct RunConfig {
    Command command = Command::kVerify;
    uint64_t seed = 0;
    Tolerances tol;
    Format format = Format::kJson;
    std::string out_path;
    std::string in_path;
    std::string trace_path;

    // example
    std::string theta = "pi/4";
    // shift-demo
    std::string a = "0.5";
    int n = 6;
    // search
    SearchProblem search;
    // verify: multiplies every suite's default sample count
    double sample_scale = 1.0;
};

/// Radians, or a multiple of pi written as "pi", "-pi/2", "3pi/4", "3*pi/4".
double parse_angle(std::string_view text);
/// "re" or "re,im".
Complex parse_complex(std::string_view text);

// Each command writes its report to `out` (or config.out_path) and
// diagnostics to `err`, and returns the process exit code.
int cmd_verify(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_example(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_check(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_search(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_shift_demo(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Parses flags (and SEQMEAS_* environment overrides) and dispatches.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace seqmeas::cli

#endif  // SEQMEAS_CLI_H_
