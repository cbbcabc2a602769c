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

#ifndef SEMDIRECT_PARTITION_TREE_HPP_
#define SEMDIRECT_PARTITION_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace semdirect {

// Largest per-dimension exponent for which 2 * 3^e still fits in int64.
inline constexpr int kMaxExponent = 38;

// Returns 3^e for 0 <= e <= kMaxExponent.
std::int64_t pow3(int e);

// A point of the unit cube with exact base-3 coordinates. Coordinate i equals
// numerators[i] / (2 * 3^exponents[i]); numerators are always odd.
struct ExactPoint {
  std::vector<std::int64_t> numerators;
  std::vector<int> exponents;

  std::size_t dimension() const { return numerators.size(); }
  double coordinate(std::size_t i) const;
  std::vector<double> to_unit() const;

  friend bool operator==(const ExactPoint&, const ExactPoint&) = default;
};

// One hyperrectangle of the ternary partition. The box is centered at
// `center` and has side 3^-e_i along dimension i, where e_i is
// center.exponents[i]. Every e_i is either depth() or depth() + 1.
struct PartitionNode {
  ExactPoint center;
  double value = 0.0;
  double slope = 0.0;
  std::uint64_t creation_index = 0;

  std::size_t dimension() const { return center.dimension(); }
  const std::vector<int>& exponents() const { return center.exponents; }
  int depth() const;
  // Longest side, 3^-depth.
  double diameter() const;
  // Sum of the exponents; the box volume is 3^-volume_exponent().
  int volume_exponent() const;
  bool is_long(std::size_t dim) const { return center.exponents[dim] == depth(); }
  std::vector<std::size_t> long_dimensions() const;
  // A node is divisible while its diameter exceeds 3^-max_depth.
  bool divisible(int max_depth) const { return depth() < max_depth; }
};

// Root box covering [0,1]^dimension, centered at 1/2 everywhere.
PartitionNode init_root(std::size_t dimension);

struct SamplePoint {
  std::size_t dimension;
  int direction;  // -1 or +1
  ExactPoint point;
};

// Points center -/+ 3^(-h-1) e_i along every long dimension i, ascending
// dimension order, minus before plus.
std::vector<SamplePoint> sample_points(const PartitionNode& node);

// Objective values observed at the two samples of one long dimension.
struct SampledPair {
  std::size_t dimension;
  double minus;
  double plus;
};

struct Trisection {
  std::vector<PartitionNode> children;
  PartitionNode center;
  // Largest finite-difference slope observed in this trisection.
  double slope = 0.0;
  // Dimensions in the order they were divided.
  std::vector<std::size_t> division_order;
};

// Divides every long dimension of `node`, best sampled pair first so that the
// most promising samples receive the largest child boxes. Children receive
// creation indices starting at `next_index`, which is advanced.
// Throws std::invalid_argument if `pairs` does not cover the long dimensions
// exactly once each.
Trisection trisect(const PartitionNode& node, std::span<const SampledPair> pairs,
                   std::uint64_t& next_index);

// All undivided nodes, grouped by depth (equivalently by diameter). Within a
// group nodes are kept in creation order.
class LeafLedger {
 public:
  using Group = std::vector<PartitionNode>;

  void insert(PartitionNode node);
  // Removes and returns the leaf with the given creation index at `depth`.
  PartitionNode extract(int depth, std::uint64_t creation_index);

  // Records an evaluated point; keeps the first point attaining the maximum.
  void observe(const ExactPoint& point, double value);

  const std::map<int, Group>& groups() const { return groups_; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<const PartitionNode*> leaves() const;

  bool has_best() const { return has_best_; }
  double best_value() const { return best_value_; }
  const ExactPoint& best_point() const { return best_point_; }
  // Overrides L_max directly; used when a ledger is assembled by hand.
  void set_best_value(double value);

 private:
  std::map<int, Group> groups_;
  bool has_best_ = false;
  double best_value_ = 0.0;
  ExactPoint best_point_;
};

}  // namespace semdirect

#endif  // SEMDIRECT_PARTITION_TREE_HPP_
