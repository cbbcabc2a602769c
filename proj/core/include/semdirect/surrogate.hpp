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

#ifndef SEMDIRECT_SURROGATE_HPP_
#define SEMDIRECT_SURROGATE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace semdirect {

// Ground-plane position in meters.
struct GroundPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const GroundPoint&, const GroundPoint&) = default;
};

struct GtBox {
  std::string class_id;
  GroundPoint center;
  friend bool operator==(const GtBox&, const GtBox&) = default;
};

struct PredBox {
  std::string class_id;
  GroundPoint center;
  double score = 1.0;
  friend bool operator==(const PredBox&, const PredBox&) = default;
};

inline constexpr double kDefaultMatchThreshold = 2.0;

struct MatchReport {
  std::size_t match_count = 0;
  // Per ground-truth box: index into the prediction list, if matched.
  std::vector<std::optional<std::size_t>> assignment;
  double surrogate_loss = 0.0;
  // Per ground-truth box: min(nearest same-class distance, tau).
  std::vector<double> clamped_distance;
};

double center_distance(const GroundPoint& a, const GroundPoint& b);

std::vector<double> center_distances(std::span<const PredBox> preds, const GtBox& gt);

// Greedy matching in annotation order. Each ground truth takes its nearest
// unconsumed same-class prediction (lowest index on ties) and consumes it if
// the distance is within tau.
MatchReport greedy_match(std::span<const PredBox> preds, std::span<const GtBox> gts, double tau);

// Sum over ground truths of min(nearest same-class distance, tau). No
// prediction is consumed; a ground truth with no same-class prediction
// contributes tau.
double surrogate_loss(std::span<const PredBox> preds, std::span<const GtBox> gts, double tau);

// Like surrogate_loss, minus the score of each ground truth's nearest
// same-class prediction when it lies within tau.
double surrogate_loss_with_cls(std::span<const PredBox> preds, std::span<const GtBox> gts,
                               double tau);

// greedy_match plus the surrogate terms in one report.
MatchReport match_report(std::span<const PredBox> preds, std::span<const GtBox> gts, double tau);

}  // namespace semdirect

#endif  // SEMDIRECT_SURROGATE_HPP_
