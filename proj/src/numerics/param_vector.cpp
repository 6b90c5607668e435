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

#include "gmafed/numerics/param_vector.hpp"

#include <cstring>

#include "gmafed/errors.hpp"

namespace gmafed::numerics {

ParamVector::ParamVector(std::size_t size, double fill) : values_(size, fill) {
  if (size == 0) throw ParameterError("ParamVector length must be >= 1");
}

ParamVector::ParamVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ParameterError("ParamVector length must be >= 1");
}

ParamVector::ParamVector(std::initializer_list<double> values) : values_(values) {
  if (values_.empty()) throw ParameterError("ParamVector length must be >= 1");
}

bool ParamVector::bitwise_equal(const ParamVector& other) const noexcept {
  return size() == other.size() &&
         (size() == 0 || std::memcmp(data(), other.data(), size() * sizeof(double)) == 0);
}

}  // namespace gmafed::numerics
