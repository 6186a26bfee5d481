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

#ifndef LINBANDIT_CONFIG_HPP_
#define LINBANDIT_CONFIG_HPP_

// Run configuration files: UTF-8 lines of "key = value" grouped under
// [environment], [policy] and [run]. '#' starts a comment line. Unknown or
// repeated keys are errors.

#include <cstdint>
#include <string>
#include <string_view>

#include "linbandit/harness.hpp"

namespace linbandit::config {

using harness::RunConfig;

// Throws ConfigError carrying the 1-based line number.
RunConfig ParseConfig(std::string_view text);
RunConfig ReadConfig(const std::string& path);

// Thetas are always written explicitly, so the output parses back to an
// equal RunConfig.
std::string FormatConfig(const RunConfig& config);
void WriteConfig(const RunConfig& config, const std::string& path);

// Built-in scenarios: "fig1a", "fig1b:I", "scaling:d,K", "twocontext:I".
RunConfig Scenario(std::string_view name, std::uint64_t seed);

}  // namespace linbandit::config

#endif  // LINBANDIT_CONFIG_HPP_
