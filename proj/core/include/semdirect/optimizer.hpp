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

#ifndef SEMDIRECT_OPTIMIZER_HPP_
#define SEMDIRECT_OPTIMIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semdirect/partition_tree.hpp"

namespace semdirect {

// Maximization objective over the unit cube.
using Objective = std::function<double(std::span<const double>)>;

enum class SelectionMode { kDirect, kSimpleDirect };

std::string to_string(SelectionMode mode);
SelectionMode parse_selection_mode(const std::string& name);

struct OptimizerConfig {
  SelectionMode mode = SelectionMode::kSimpleDirect;
  int max_depth = 6;
  double epsilon = 0.01;
  std::size_t max_selected = 3;  // R, SimpleDIRECT only
  std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
  std::size_t max_queries = std::numeric_limits<std::size_t>::max();

  // Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

// Admissible range of the rate constant for which a leaf can dominate every
// other leaf: any K with lower <= K <= upper works. `upper` is +inf when no
// larger leaf exists and may be negative.
struct RateBounds {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

RateBounds rate_bounds(const PartitionNode& node, const LeafLedger& ledger);

// L_max + eps * |L_max|, the level a leaf must be able to reach.
double improvement_target(const LeafLedger& ledger, double epsilon);

// Per-leaf outcome of the potential-optimality tests.
struct LeafVerdict {
  const PartitionNode* node = nullptr;
  bool divisible = false;
  bool best_in_class = false;  // highest value at its diameter, first by creation order
  bool rate_compatible = false;  // upper >= lower
  bool can_improve = false;  // value + diameter * upper >= target
  RateBounds bounds;
};

std::vector<LeafVerdict> classify_leaves(const LeafLedger& ledger, double epsilon, int max_depth);

// Selected nodes are returned largest diameter first.
std::vector<const PartitionNode*> select_po_direct(const LeafLedger& ledger, double epsilon,
                                                   int max_depth);

// Potential improvement score used to rank SimpleDIRECT candidates.
inline double improvement_score(const PartitionNode& n) {
  return n.value + 0.5 * n.diameter() * n.slope;
}

struct SimpleSelection {
  std::vector<const PartitionNode*> candidates;  // best-in-class and can_improve
  std::vector<const PartitionNode*> selected;
  bool trimmed = false;
};

SimpleSelection select_po_simple_detailed(const LeafLedger& ledger, double epsilon,
                                          std::size_t max_selected, int max_depth);

std::vector<const PartitionNode*> select_po_simple(const LeafLedger& ledger, double epsilon,
                                                   std::size_t max_selected, int max_depth);

struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t queries = 0;
  double best_value = 0.0;
  std::size_t n_eq4 = 0;  // best in class
  std::size_t n_eq5 = 0;  // best in class and rate compatible
  std::size_t n_eq6 = 0;  // best in class and able to improve
  std::size_t n_selected = 0;
};

struct OptResult {
  std::vector<double> best_point;
  double best_value = -std::numeric_limits<double>::infinity();
  std::size_t query_count = 0;
  std::size_t iterations = 0;
  std::vector<IterationRecord> trajectory;
  std::shared_ptr<const LeafLedger> leaves;  // final partition
};

// Snapshot handed to an observer after each selection step.
struct SelectionTrace {
  std::size_t iteration = 0;
  std::vector<PartitionNode> candidates;
  std::vector<PartitionNode> selected;
  bool trimmed = false;
};

using SelectionObserver = std::function<void(const SelectionTrace&)>;

// Raised when the objective returns NaN or infinity.
class NonFiniteObjective : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

OptResult run(const Objective& objective, std::size_t dimension, const OptimizerConfig& config,
              const SelectionObserver& observer = {});

OptResult random_search(const Objective& objective, std::size_t dimension, std::size_t queries,
                        std::uint64_t seed);

struct NaturalExtremes {
  double value_plus = 0.0;   // all-ones corner
  double value_minus = 0.0;  // all-zeros corner
};

NaturalExtremes natural_extremes(const Objective& objective, std::size_t dimension);

// K * (T + 1)^(-1/n): worst-case optimality gap after T iterations for a
// K-Lipschitz objective in n dimensions.
double convergence_bound(double lipschitz, std::size_t iterations, std::size_t dimension);

}  // namespace semdirect

#endif  // SEMDIRECT_OPTIMIZER_HPP_
