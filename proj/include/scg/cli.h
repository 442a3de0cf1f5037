//
// Copyright 2026 The SCG Authors
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
#ifndef SCG_CLI_H_
#define SCG_CLI_H_

#include <string>
#include <vector>

namespace scg {

// Process exit statuses of the scg tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,         // bad flags, files or configuration
  kExitInfeasible = 3,    // calibration found no feasible threshold
  kExitCertification = 4, // a simulation check failed
  kExitExecution = 5,     // harness failure or labeling could not finish
};

// Runs one scg command line; args excludes the program name. Never throws.
int RunCli(const std::vector<std::string>& args);

}  // namespace scg

#endif  // SCG_CLI_H_
