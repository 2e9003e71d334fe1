// Copyright 2026 The Assembly Robustness Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBUSTNESS_CLI_H_
#define ROBUSTNESS_CLI_H_

#include <iosfwd>

namespace robustness {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 2,
  kExitUnstable = 3,
  kExitIndeterminate = 4,
};

class Error;

int exit_code_for(const Error& e);

// Runs one command. A JSON summary goes to `out`; diagnostics and JSON-lines
// stage timings go to `err`. Returns one of the ExitCode values.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace robustness

#endif  // ROBUSTNESS_CLI_H_
