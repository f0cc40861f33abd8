// Copyright 2026 The epstein-lab authors.
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

#ifndef EPSTEIN_LAB_ERROR_HPP
#define EPSTEIN_LAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace epstein_lab {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A lattice basis whose covolume is not 1.
class CovolumeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration node cap or a combinatorial cap was hit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested tolerance could not be met before the cutoff cap.
class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tail_bound() const { return achieved_; }

 private:
  double achieved_;
};

// Numerical inversion of a characteristic function did not converge.
class InversionError : public std::runtime_error {
 public:
  InversionError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double error_estimate() const { return estimate_; }

 private:
  double estimate_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace epstein_lab

#endif  // EPSTEIN_LAB_ERROR_HPP
