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

#ifndef ROBUSTNESS_ERRORS_H_
#define ROBUSTNESS_ERRORS_H_

#include <stdexcept>
#include <string>

namespace robustness {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document. The message carries the offending field path.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The assembly cannot be in static equilibrium.
class UnstableError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed to reach a verdict.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

}  // namespace robustness

#endif  // ROBUSTNESS_ERRORS_H_
