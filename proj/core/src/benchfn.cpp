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

#include "semdirect/benchfn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semdirect::benchfn {

namespace {

constexpr double kSchwefelArgmax = 420.968746;
constexpr double kSchwefelOffset = 418.9829;
constexpr double kL1ConeTarget = 1.0 / 6.0;

double to_native(double u, Domain d) { return d.lower + u * (d.upper - d.lower); }

double ackley(std::span<const double> x) {
  constexpr double a = 20.0, b = 0.2, c = 2.0 * std::numbers::pi;
  double sq = 0.0, cs = 0.0;
  for (double xi : x) {
    sq += xi * xi;
    cs += std::cos(c * xi);
  }
  const double n = static_cast<double>(x.size());
  return -a * std::exp(-b * std::sqrt(sq / n)) - std::exp(cs / n) + a + std::numbers::e;
}

double schwefel(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * std::sin(std::sqrt(std::abs(xi)));
  return kSchwefelOffset * static_cast<double>(x.size()) - s;
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return s;
}

}  // namespace

Function parse_function(const std::string& name) {
  if (name == "ackley") return Function::kAckley;
  if (name == "schwefel") return Function::kSchwefel;
  if (name == "sphere") return Function::kSphere;
  if (name == "l1cone") return Function::kL1Cone;
  throw std::invalid_argument("unknown benchmark function '" + name + "'");
}

std::string to_string(Function f) {
  switch (f) {
    case Function::kAckley: return "ackley";
    case Function::kSchwefel: return "schwefel";
    case Function::kSphere: return "sphere";
    case Function::kL1Cone: return "l1cone";
  }
  return "?";
}

Domain native_domain(Function f) {
  switch (f) {
    case Function::kAckley: return {-32.768, 32.768};
    case Function::kSchwefel: return {-500.0, 500.0};
    case Function::kSphere: return {-5.12, 5.12};
    case Function::kL1Cone: return {0.0, 1.0};
  }
  return {0.0, 1.0};
}

std::vector<double> optimum_native(Function f, std::size_t dimension) {
  switch (f) {
    case Function::kSchwefel: return std::vector<double>(dimension, kSchwefelArgmax);
    case Function::kL1Cone: return std::vector<double>(dimension, kL1ConeTarget);
    default: return std::vector<double>(dimension, 0.0);
  }
}

std::vector<double> optimum_unit(Function f, std::size_t dimension) {
  const Domain d = native_domain(f);
  std::vector<double> u = optimum_native(f, dimension);
  for (double& x : u) x = (x - d.lower) / (d.upper - d.lower);
  return u;
}

double optimum_value(Function f, std::size_t dimension) {
  if (f == Function::kSchwefel) {
    const std::vector<double> x = optimum_native(f, dimension);
    return -schwefel(x);
  }
  return 0.0;
}

double l1cone(std::span<const double> unit_point, std::span<const double> target) {
  if (unit_point.size() != target.size()) {
    throw std::invalid_argument("l1cone: target dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < unit_point.size(); ++i) s += std::abs(unit_point[i] - target[i]);
  return -s;
}

double eval(Function f, std::span<const double> unit_point) {
  if (unit_point.empty()) throw std::invalid_argument("benchfn: dimension must be >= 1");
  if (f == Function::kL1Cone) {
    const std::vector<double> target(unit_point.size(), kL1ConeTarget);
    return l1cone(unit_point, target);
  }
  const Domain d = native_domain(f);
  std::vector<double> x(unit_point.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = to_native(unit_point[i], d);
  switch (f) {
    case Function::kAckley: return -ackley(x);
    case Function::kSchwefel: return -schwefel(x);
    case Function::kSphere: return -sphere(x);
    case Function::kL1Cone: break;
  }
  return 0.0;
}

double eval(const std::string& name, std::size_t dimension, std::span<const double> unit_point) {
  if (dimension < 1) throw std::invalid_argument("benchfn: dimension must be >= 1");
  if (unit_point.size() != dimension) throw std::invalid_argument("benchfn: point dimension mismatch");
  return eval(parse_function(name), unit_point);
}

Objective make_objective(Function f) {
  return [f](std::span<const double> p) { return eval(f, p); };
}

}  // namespace semdirect::benchfn
