// Copyright 2026 The safearea Authors.
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

#ifndef SAFEAREA_ERROR_HPP_
#define SAFEAREA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace safearea {

// Base of every error thrown by the library. The CLI maps ValidationError to
// exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DegenerateKernel : public Error {
 public:
  using Error::Error;
};

class InconsistentTrace : public Error {
 public:
  using Error::Error;
};

class CovarianceError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

// Scenario or CLI input rejected before any computation starts.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NoFeasibleDelta : public Error {
 public:
  NoFeasibleDelta(const std::string& what, std::size_t min_n)
      : Error(what), min_n_(min_n) {}

  // Smallest sample size for which the threshold becomes positive.
  std::size_t min_n() const noexcept { return min_n_; }

 private:
  std::size_t min_n_;
};

}  // namespace safearea

#endif  // SAFEAREA_ERROR_HPP_
