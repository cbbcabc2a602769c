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

#include "semdirect/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

namespace semdirect {

std::string to_string(SelectionMode mode) {
  return mode == SelectionMode::kDirect ? "direct" : "simple";
}

SelectionMode parse_selection_mode(const std::string& name) {
  if (name == "direct") return SelectionMode::kDirect;
  if (name == "simple" || name == "simpledirect") return SelectionMode::kSimpleDirect;
  throw std::invalid_argument("unknown optimizer mode '" + name + "' (expected direct|simple)");
}

void OptimizerConfig::validate() const {
  if (max_depth < 1 || max_depth >= kMaxExponent) {
    throw std::invalid_argument("max depth must be in [1, " + std::to_string(kMaxExponent - 1) + "]");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be a finite non-negative number");
  }
  if (max_selected < 1) throw std::invalid_argument("R must be >= 1");
  if (max_queries < 1) throw std::invalid_argument("query budget must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ClassSummary {
  int depth;
  double diameter;
  double best_value;
  std::uint64_t best_index;
};

std::vector<ClassSummary> summarize(const LeafLedger& ledger) {
  std::vector<ClassSummary> out;
  for (const auto& [depth, group] : ledger.groups()) {
    ClassSummary s{depth, std::pow(3.0, -depth), -kInf, 0};
    for (const PartitionNode& n : group) {
      if (n.value > s.best_value) {
        s.best_value = n.value;
        s.best_index = n.creation_index;
      }
    }
    out.push_back(s);
  }
  return out;
}

// Within one diameter class the binding constraint always comes from the
// class maximum, so the bounds only need one value per class.
RateBounds bounds_from_summary(const PartitionNode& node, std::span<const ClassSummary> classes) {
  const int h = node.depth();
  const double dp = node.diameter();
  RateBounds b;
  for (const ClassSummary& c : classes) {
    if (c.depth > h) {
      b.lower = std::max(b.lower, (c.best_value - node.value) / (dp - c.diameter));
    } else if (c.depth < h) {
      b.upper = std::min(b.upper, (node.value - c.best_value) / (c.diameter - dp));
    }
  }
  return b;
}

}  // namespace

RateBounds rate_bounds(const PartitionNode& node, const LeafLedger& ledger) {
  const auto classes = summarize(ledger);
  return bounds_from_summary(node, classes);
}

double improvement_target(const LeafLedger& ledger, double epsilon) {
  const double lmax = ledger.best_value();
  return lmax + epsilon * std::abs(lmax);
}

std::vector<LeafVerdict> classify_leaves(const LeafLedger& ledger, double epsilon, int max_depth) {
  const auto classes = summarize(ledger);
  const double target = improvement_target(ledger, epsilon);
  std::vector<LeafVerdict> out;
  std::size_t ci = 0;
  for (const auto& [depth, group] : ledger.groups()) {
    const ClassSummary& cls = classes[ci++];
    for (const PartitionNode& n : group) {
      LeafVerdict v;
      v.node = &n;
      v.divisible = n.divisible(max_depth);
      v.best_in_class = n.creation_index == cls.best_index;
      v.bounds = bounds_from_summary(n, classes);
      v.rate_compatible = v.bounds.upper >= v.bounds.lower;
      v.can_improve = v.bounds.upper == kInf || n.value + n.diameter() * v.bounds.upper >= target;
      out.push_back(v);
    }
  }
  return out;
}

std::vector<const PartitionNode*> select_po_direct(const LeafLedger& ledger, double epsilon,
                                                   int max_depth) {
  std::vector<const PartitionNode*> out;
  for (const LeafVerdict& v : classify_leaves(ledger, epsilon, max_depth)) {
    if (v.divisible && v.best_in_class && v.rate_compatible && v.can_improve) out.push_back(v.node);
  }
  return out;
}

SimpleSelection select_po_simple_detailed(const LeafLedger& ledger, double epsilon,
                                          std::size_t max_selected, int max_depth) {
  if (max_selected < 1) throw std::invalid_argument("select_po_simple: R must be >= 1");
  SimpleSelection sel;
  for (const LeafVerdict& v : classify_leaves(ledger, epsilon, max_depth)) {
    if (v.divisible && v.best_in_class && v.can_improve) sel.candidates.push_back(v.node);
  }
  if (sel.candidates.size() <= max_selected) {
    sel.selected = sel.candidates;
    return sel;
  }
  sel.trimmed = true;

  std::vector<const PartitionNode*> ranked = sel.candidates;
  std::sort(ranked.begin(), ranked.end(), [](const PartitionNode* a, const PartitionNode* b) {
    const double sa = improvement_score(*a);
    const double sb = improvement_score(*b);
    if (sa != sb) return sa > sb;
    if (a->depth() != b->depth()) return a->depth() < b->depth();
    return a->creation_index < b->creation_index;
  });
  ranked.resize(max_selected - 1);

  // Candidates are ordered by depth, so the first one has the largest diameter.
  const PartitionNode* widest = sel.candidates.front();
  if (std::find(ranked.begin(), ranked.end(), widest) == ranked.end()) ranked.push_back(widest);

  for (const PartitionNode* c : sel.candidates) {
    if (std::find(ranked.begin(), ranked.end(), c) != ranked.end()) sel.selected.push_back(c);
  }
  return sel;
}

std::vector<const PartitionNode*> select_po_simple(const LeafLedger& ledger, double epsilon,
                                                   std::size_t max_selected, int max_depth) {
  return select_po_simple_detailed(ledger, epsilon, max_selected, max_depth).selected;
}

namespace {

double checked_eval(const Objective& objective, std::span<const double> point) {
  const double v = objective(point);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "objective returned non-finite value " << v << " at (";
    for (std::size_t i = 0; i < point.size(); ++i) msg << (i ? ", " : "") << point[i];
    msg << ")";
    throw NonFiniteObjective(msg.str());
  }
  return v;
}

std::vector<PartitionNode> copy_nodes(const std::vector<const PartitionNode*>& nodes) {
  std::vector<PartitionNode> out;
  out.reserve(nodes.size());
  for (const PartitionNode* n : nodes) out.push_back(*n);
  return out;
}

}  // namespace

OptResult run(const Objective& objective, std::size_t dimension, const OptimizerConfig& config,
              const SelectionObserver& observer) {
  config.validate();
  OptResult result;
  LeafLedger ledger;

  PartitionNode root = init_root(dimension);
  root.value = checked_eval(objective, root.center.to_unit());
  result.query_count = 1;
  ledger.observe(root.center, root.value);
  ledger.insert(std::move(root));
  std::uint64_t next_index = 1;

  for (std::size_t t = 1; t <= config.max_iterations; ++t) {
    if (result.query_count >= config.max_queries) break;

    IterationRecord rec;
    rec.iteration = t;
    for (const LeafVerdict& v : classify_leaves(ledger, config.epsilon, config.max_depth)) {
      if (!v.divisible || !v.best_in_class) continue;
      ++rec.n_eq4;
      if (v.rate_compatible) ++rec.n_eq5;
      if (v.can_improve) ++rec.n_eq6;
    }

    std::vector<PartitionNode> selected;
    SelectionTrace trace;
    trace.iteration = t;
    if (config.mode == SelectionMode::kDirect) {
      selected = copy_nodes(select_po_direct(ledger, config.epsilon, config.max_depth));
      if (observer) trace.candidates = selected;
    } else {
      SimpleSelection s = select_po_simple_detailed(ledger, config.epsilon, config.max_selected,
                                                    config.max_depth);
      selected = copy_nodes(s.selected);
      trace.trimmed = s.trimmed;
      if (observer) trace.candidates = copy_nodes(s.candidates);
    }
    if (observer) {
      trace.selected = selected;
      observer(trace);
    }
    if (selected.empty()) break;
    rec.n_selected = selected.size();

    // One batch for the whole iteration, evaluated in selection order.
    std::vector<std::vector<SamplePoint>> samples;
    std::vector<std::vector<double>> values;
    bool truncated = false;
    for (const PartitionNode& node : selected) {
      samples.push_back(sample_points(node));
      values.emplace_back();
      for (const SamplePoint& s : samples.back()) {
        if (result.query_count >= config.max_queries) {
          truncated = true;
          break;
        }
        const double v = checked_eval(objective, s.point.to_unit());
        ++result.query_count;
        ledger.observe(s.point, v);
        values.back().push_back(v);
      }
      if (truncated) break;
    }

    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k].size() != samples[k].size()) continue;
      std::vector<SampledPair> pairs;
      for (std::size_t j = 0; j < samples[k].size(); j += 2) {
        pairs.push_back({samples[k][j].dimension, values[k][j], values[k][j + 1]});
      }
      const PartitionNode& node = selected[k];
      PartitionNode leaf = ledger.extract(node.depth(), node.creation_index);
      Trisection tri = trisect(leaf, pairs, next_index);
      ledger.insert(std::move(tri.center));
      for (PartitionNode& c : tri.children) ledger.insert(std::move(c));
    }

    rec.queries = result.query_count;
    rec.best_value = ledger.best_value();
    result.trajectory.push_back(rec);
    result.iterations = t;
    if (truncated) break;
  }

  result.best_value = ledger.best_value();
  result.best_point = ledger.best_point().to_unit();
  result.leaves = std::make_shared<const LeafLedger>(std::move(ledger));
  return result;
}

OptResult random_search(const Objective& objective, std::size_t dimension, std::size_t queries,
                        std::uint64_t seed) {
  if (queries < 1) throw std::invalid_argument("random_search: query budget must be >= 1");
  if (dimension < 1) throw std::invalid_argument("random_search: dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  OptResult result;
  std::vector<double> point(dimension);
  for (std::size_t q = 1; q <= queries; ++q) {
    for (double& x : point) x = unit(rng);
    const double v = checked_eval(objective, point);
    result.query_count = q;
    if (v > result.best_value) {
      result.best_value = v;
      result.best_point = point;
    }
    IterationRecord rec;
    rec.iteration = q;
    rec.queries = q;
    rec.best_value = result.best_value;
    rec.n_selected = 1;
    result.trajectory.push_back(rec);
  }
  result.iterations = queries;
  return result;
}

NaturalExtremes natural_extremes(const Objective& objective, std::size_t dimension) {
  const std::vector<double> ones(dimension, 1.0);
  const std::vector<double> zeros(dimension, 0.0);
  NaturalExtremes out;
  out.value_plus = checked_eval(objective, ones);
  out.value_minus = checked_eval(objective, zeros);
  return out;
}

double convergence_bound(double lipschitz, std::size_t iterations, std::size_t dimension) {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("convergence_bound: K must be > 0");
  if (dimension < 1) throw std::invalid_argument("convergence_bound: dimension must be >= 1");
  return lipschitz *
         std::pow(static_cast<double>(iterations) + 1.0, -1.0 / static_cast<double>(dimension));
}

}  // namespace semdirect
