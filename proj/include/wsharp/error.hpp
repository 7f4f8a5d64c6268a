// Copyright 2026 The wsharp Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace wsharp {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  Parse,
  Schema,
  Precondition,
  Convergence,
  NotQuasidifferentiable,
  Io,
};

// Single exception type for the library; the C API maps `code()` onto its
// status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_dimension_mismatch(const char* where, long a,
                                                  long b) {
  throw Error(ErrorCode::DimensionMismatch,
              std::string(where) + ": dimension mismatch (" +
                  std::to_string(a) + " vs " + std::to_string(b) + ")");
}

inline void check_same_dim(const char* where, long a, long b) {
  if (a != b) throw_dimension_mismatch(where, a, b);
}

}  // namespace wsharp
