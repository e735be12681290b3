// Copyright 2026 The posgci Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POSGCI_COMMON_H_
#define POSGCI_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace posgci {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kProbTolerance = 1e-9;

// Error taxonomy. Everything derives from Error so callers can catch broadly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

// An observation with zero total likelihood under the prior.
class ZeroLikelihood : public Error {
 public:
  using Error::Error;
};

class AbsoluteContinuityError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::int64_t required)
      : Error(what + " (required " + std::to_string(required) + ")"),
        required_(required) {}
  std::int64_t required() const { return required_; }

 private:
  std::int64_t required_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved_gap)
      : Error(what + " (achieved gap " + std::to_string(achieved_gap) + ")"),
        solver_(what),
        achieved_gap_(achieved_gap) {}
  // The message without the gap suffix.
  const std::string& solver() const { return solver_; }
  double achieved_gap() const { return achieved_gap_; }

 private:
  std::string solver_;
  double achieved_gap_;
};

class ReachabilityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Mixed-radix joint indexing, most significant digit first:
// encode((v0, v1), (r0, r1)) = v0 * r1 + v1.
std::int64_t encode_joint(const std::vector<int>& indices,
                          const std::vector<int>& radices);
std::vector<int> decode_joint(std::int64_t index,
                              const std::vector<int>& radices);
std::int64_t radix_product(const std::vector<int>& radices);

}  // namespace posgci

#endif  // POSGCI_COMMON_H_
