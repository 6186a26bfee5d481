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

#ifndef LINBANDIT_ERROR_HPP_
#define LINBANDIT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linbandit {

// Base class for every error raised by the library. Argument validation
// failures that are plain caller mistakes use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Raised when a factorization hits a pivot at or below the pivot tolerance.
class DegenerateSystemError : public Error {
 public:
  using Error::Error;
};

// An operation needs at least one recorded sample (or eigenvalue, or exploit
// step) and none is available.
class NoDataError : public Error {
 public:
  using Error::Error;
};

class UninitializedArmError : public Error {
 public:
  using Error::Error;
};

class StaleActionError : public Error {
 public:
  using Error::Error;
};

// Instance has no suboptimal (context, arm) pair, so the minimum gap is
// undefined.
class DegenerateInstanceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based line number of the offending input, 0 when not line-specific.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace linbandit

#endif  // LINBANDIT_ERROR_HPP_
