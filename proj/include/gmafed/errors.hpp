// Copyright 2026 The gmafed Authors. All Rights Reserved.
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

namespace gmafed {

// Error categories map onto CLI exit codes (see cli/commands.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or infeasible parameter combination.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent data (bad labels, empty sets, shape mismatch).
class DataError : public Error {
 public:
  using Error::Error;
};

// Ingestion failure for an on-disk file; the message names the file.
class IngestionError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite values detected during training.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, long round = -1)
      : Error(what), round_(round) {}
  long round() const noexcept { return round_; }

 private:
  long round_;
};

// Broken internal contract (e.g. vectors of unequal length reaching a kernel).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gmafed
