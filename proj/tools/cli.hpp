// Copyright 2026 The linbandit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINBANDIT_TOOLS_CLI_HPP_
#define LINBANDIT_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace linbandit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

// Runs the simulation front end. args excludes the program name. The CSV goes
// to --out (or the config's out path); without either it is written to out.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace linbandit::cli

#endif  // LINBANDIT_TOOLS_CLI_HPP_
