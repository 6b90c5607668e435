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

#include <span>

#include "gmafed/numerics/param_vector.hpp"

namespace gmafed::numerics {

// Length-checked wrappers over the active kernel table. A length mismatch is
// an InternalError: callers are expected to have validated shapes already.

ParamVector elementwise_sign(const ParamVector& v);

void add_into(ParamVector& y, const ParamVector& x);
void axpy_into(ParamVector& y, double a, const ParamVector& x);
ParamVector scaled(double a, const ParamVector& x);
ParamVector difference(const ParamVector& a, const ParamVector& b);
double dot(std::span<const double> x, std::span<const double> y);
bool all_finite(const ParamVector& v);
double max_abs(const ParamVector& v);

}  // namespace gmafed::numerics
