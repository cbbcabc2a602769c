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

#include "semdirect/partition_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace semdirect {

std::int64_t pow3(int e) {
  if (e < 0 || e > kMaxExponent) {
    throw std::out_of_range("pow3: exponent " + std::to_string(e) + " out of range");
  }
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= 3;
  return r;
}

double ExactPoint::coordinate(std::size_t i) const {
  return static_cast<double>(numerators[i]) / (2.0 * static_cast<double>(pow3(exponents[i])));
}

std::vector<double> ExactPoint::to_unit() const {
  std::vector<double> out(dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coordinate(i);
  return out;
}

int PartitionNode::depth() const {
  return *std::min_element(center.exponents.begin(), center.exponents.end());
}

double PartitionNode::diameter() const { return std::pow(3.0, -depth()); }

int PartitionNode::volume_exponent() const {
  int s = 0;
  for (int e : center.exponents) s += e;
  return s;
}

std::vector<std::size_t> PartitionNode::long_dimensions() const {
  const int h = depth();
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (center.exponents[i] == h) dims.push_back(i);
  }
  return dims;
}

PartitionNode init_root(std::size_t dimension) {
  if (dimension == 0) throw std::invalid_argument("init_root: dimension must be >= 1");
  PartitionNode root;
  root.center.numerators.assign(dimension, 1);
  root.center.exponents.assign(dimension, 0);
  return root;
}

std::vector<SamplePoint> sample_points(const PartitionNode& node) {
  std::vector<SamplePoint> out;
  for (std::size_t dim : node.long_dimensions()) {
    if (node.center.exponents[dim] + 1 > kMaxExponent) {
      throw std::out_of_range("sample_points: partition depth exceeds exact range");
    }
    for (int dir : {-1, +1}) {
      SamplePoint s{dim, dir, node.center};
      s.point.exponents[dim] += 1;
      s.point.numerators[dim] = 3 * s.point.numerators[dim] + 2 * dir;
      out.push_back(std::move(s));
    }
  }
  return out;
}

Trisection trisect(const PartitionNode& node, std::span<const SampledPair> pairs,
                   std::uint64_t& next_index) {
  const std::vector<std::size_t> dims = node.long_dimensions();
  if (pairs.size() != dims.size()) {
    throw std::invalid_argument("trisect: expected one sampled pair per long dimension");
  }
  std::vector<const SampledPair*> by_dim(node.dimension(), nullptr);
  for (const SampledPair& p : pairs) {
    if (p.dimension >= node.dimension() || !node.is_long(p.dimension) ||
        by_dim[p.dimension] != nullptr) {
      throw std::invalid_argument("trisect: sampled pair for dimension " +
                                  std::to_string(p.dimension) + " is not a unique long dimension");
    }
    by_dim[p.dimension] = &p;
  }

  const double step = std::pow(3.0, -(node.depth() + 1));
  Trisection result;
  for (std::size_t d : dims) {
    const SampledPair& p = *by_dim[d];
    result.slope = std::max({result.slope, std::abs(node.value - p.plus) / step,
                             std::abs(node.value - p.minus) / step});
  }

  result.division_order = dims;
  std::stable_sort(result.division_order.begin(), result.division_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::max(by_dim[a]->minus, by_dim[a]->plus) >
                            std::max(by_dim[b]->minus, by_dim[b]->plus);
                   });

  PartitionNode current = node;
  for (std::size_t d : result.division_order) {
    current.center.exponents[d] += 1;
    current.center.numerators[d] *= 3;
    for (int dir : {-1, +1}) {
      PartitionNode child;
      child.center = current.center;
      child.center.numerators[d] += 2 * dir;
      child.value = dir < 0 ? by_dim[d]->minus : by_dim[d]->plus;
      child.slope = result.slope;
      child.creation_index = next_index++;
      result.children.push_back(std::move(child));
    }
  }
  current.slope = result.slope;
  result.center = std::move(current);
  return result;
}

void LeafLedger::insert(PartitionNode node) {
  Group& g = groups_[node.depth()];
  auto it = std::lower_bound(g.begin(), g.end(), node.creation_index,
                             [](const PartitionNode& n, std::uint64_t idx) {
                               return n.creation_index < idx;
                             });
  g.insert(it, std::move(node));
}

PartitionNode LeafLedger::extract(int depth, std::uint64_t creation_index) {
  auto git = groups_.find(depth);
  if (git != groups_.end()) {
    Group& g = git->second;
    auto it = std::find_if(g.begin(), g.end(), [&](const PartitionNode& n) {
      return n.creation_index == creation_index;
    });
    if (it != g.end()) {
      PartitionNode out = std::move(*it);
      g.erase(it);
      if (g.empty()) groups_.erase(git);
      return out;
    }
  }
  throw std::out_of_range("LeafLedger::extract: no leaf " + std::to_string(creation_index) +
                          " at depth " + std::to_string(depth));
}

void LeafLedger::observe(const ExactPoint& point, double value) {
  if (!has_best_ || value > best_value_) {
    has_best_ = true;
    best_value_ = value;
    best_point_ = point;
  }
}

void LeafLedger::set_best_value(double value) {
  has_best_ = true;
  best_value_ = value;
}

std::size_t LeafLedger::size() const {
  std::size_t n = 0;
  for (const auto& [depth, g] : groups_) n += g.size();
  return n;
}

std::vector<const PartitionNode*> LeafLedger::leaves() const {
  std::vector<const PartitionNode*> out;
  for (const auto& [depth, g] : groups_) {
    for (const PartitionNode& n : g) out.push_back(&n);
  }
  return out;
}

}  // namespace semdirect
