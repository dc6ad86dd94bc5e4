// Copyright 2026 The lzsm Authors
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

namespace lzsm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class DispersiveRegimeViolation : public Error {
 public:
  using Error::Error;
};

/// Base for failures of the time integrator; grid sweeps catch these per point.
class SolverError : public Error {
 public:
  using Error::Error;
};

class StiffnessError : public SolverError {
 public:
  using SolverError::SolverError;
};

class InvariantDrift : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Malformed sweep description or configuration document.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Config document error carrying the offending line (0 when not tied to one).
class ConfigError : public SpecError {
 public:
  ConfigError(const std::string& what, int line = 0) : SpecError(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lzsm
