//
// Copyright 2026 The ldpfl Authors
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
//

#ifndef LDPFL_CLI_H_
#define LDPFL_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"

// Command-line front end: calibrate, sweep, simulate, validate and plot.
namespace ldpfl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitInternalError = 2;

// Domain and validation failures map to kExitDomainError; everything else
// (I/O, numeric solver breakdown) to kExitInternalError.
int ExitCodeFor(const absl::Status& status);

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace ldpfl

#endif  // LDPFL_CLI_H_
