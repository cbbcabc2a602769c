/* Copyright 2026 The SemDirect Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SEMDIRECT_BENCHFN_HPP_
#define SEMDIRECT_BENCHFN_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "semdirect/optimizer.hpp"

namespace semdirect::benchfn {

// Standard test functions, negated so that larger is better and mapped from
// the unit cube onto their native domain.
enum class Function { kAckley, kSchwefel, kSphere, kL1Cone };

Function parse_function(const std::string& name);
std::string to_string(Function f);

struct Domain {
  double lower;
  double upper;
};

Domain native_domain(Function f);

// Native coordinates of the known maximizer in `dimension` dimensions.
std::vector<double> optimum_native(Function f, std::size_t dimension);
std::vector<double> optimum_unit(Function f, std::size_t dimension);
double optimum_value(Function f, std::size_t dimension);

double eval(Function f, std::span<const double> unit_point);
double eval(const std::string& name, std::size_t dimension, std::span<const double> unit_point);

// -||theta - target||_1 on the unit cube; Lipschitz constant 1 in the l1 norm.
double l1cone(std::span<const double> unit_point, std::span<const double> target);

Objective make_objective(Function f);

}  // namespace semdirect::benchfn

#endif  // SEMDIRECT_BENCHFN_HPP_
