// Copyright 2026 The kerrmet Authors.
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

namespace kerrmet {

// Base class for recoverable numeric failures (degenerate working points,
// missing half-max crossings, ...). Sweeps record these as NA cells;
// contract violations use std::invalid_argument instead and abort the run.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Fisher information is an indeterminate 0/0 at the queried phase.
class DegeneratePointError : public NumericError {
 public:
  explicit DegeneratePointError(const std::string& what) : NumericError(what) {}
};

// Fisher information is numerically zero; the phase is not identifiable.
class NonIdentifiableError : public NumericError {
 public:
  explicit NonIdentifiableError(const std::string& what)
      : NumericError(what) {}
};

// A solver scanned its whole window without finding the feature it needed.
class SearchFailureError : public NumericError {
 public:
  explicit SearchFailureError(const std::string& what) : NumericError(what) {}
};

}  // namespace kerrmet
