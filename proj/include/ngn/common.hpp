// Copyright 2026 The ngnopt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NGN_COMMON_HPP
#define NGN_COMMON_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ngn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidArgument,
  Io,
  Numeric,
};

/// Base exception for the library. The code is what the C API reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string &what)
      : Error(ErrorCode::InvalidArgument, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error(ErrorCode::Io, what) {}
};

/// Raised when a non-finite value reaches a computation that cannot accept it.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string &what)
      : Error(ErrorCode::Numeric, what) {}
};

inline void require(bool condition, const std::string &message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace ngn

#endif  // NGN_COMMON_HPP
