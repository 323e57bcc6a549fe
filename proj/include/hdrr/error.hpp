// Copyright 2026 The HDRR Authors.
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

#ifndef HDRR_ERROR_HPP_
#define HDRR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hdrr {

// Base for every failure raised by the library. The CLI maps Error to exit
// status 1 and UsageError to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A RunConfig or architecture setting is inadmissible.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A binary or text file does not follow its declared layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A parsed record violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdrr

#endif  // HDRR_ERROR_HPP_
