/*
 Copyright 2026 The lqgsi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace lqgsi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A problem instance violates a structural requirement (dimensions,
/// definiteness, missing fields).
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not defined for this kind of instance
/// (e.g. spectral analysis of a time-varying system).
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// A rank or detectability hypothesis needed by the algorithm fails.
class InfeasibleStructure : public Error {
 public:
  using Error::Error;
};

/// The cost budget lies at or below the cost attainable with perfect
/// state knowledge.
class InfeasibleBudget : public Error {
 public:
  InfeasibleBudget(const std::string& what, double gamma_min)
      : Error(what), gamma_min_(gamma_min) {}
  double gamma_min() const noexcept { return gamma_min_; }

 private:
  double gamma_min_;
};

/// Iterative method failed to converge or produced an inconsistent result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A simulated closed loop left the region where states stay bounded.
class Divergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Closed form requested outside the range where it applies.
class OutOfScope : public Error {
 public:
  using Error::Error;
};

}  // namespace lqgsi
