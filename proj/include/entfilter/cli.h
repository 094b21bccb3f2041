// Copyright 2026 The entfilter Authors
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

#ifndef ENTFILTER_CLI_H
#define ENTFILTER_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace entfilter {

enum ExitCode {
    kExitOk = 0,
    kExitValidation = 1,
    kExitParse = 2,
    kExitPhysics = 3,
};

/// Runs the command line. Output is written to `out` only when the command succeeds.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace entfilter

#endif
