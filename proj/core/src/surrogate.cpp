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

#include "semdirect/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semdirect {

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("matching threshold tau must be finite and > 0");
  }
}

struct Nearest {
  std::optional<std::size_t> index;
  double distance = std::numeric_limits<double>::infinity();
};

// Nearest same-class prediction, optionally skipping consumed ones.
Nearest nearest(std::span<const PredBox> preds, const GtBox& gt,
                const std::vector<bool>* consumed = nullptr) {
  Nearest best;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].class_id != gt.class_id) continue;
    if (consumed && (*consumed)[i]) continue;
    const double d = center_distance(preds[i].center, gt.center);
    if (d < best.distance) {
      best.distance = d;
      best.index = i;
    }
  }
  return best;
}

}  // namespace

double center_distance(const GroundPoint& a, const GroundPoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<double> center_distances(std::span<const PredBox> preds, const GtBox& gt) {
  std::vector<double> out;
  out.reserve(preds.size());
  for (const PredBox& p : preds) out.push_back(center_distance(p.center, gt.center));
  return out;
}

MatchReport greedy_match(std::span<const PredBox> preds, std::span<const GtBox> gts, double tau) {
  check_tau(tau);
  MatchReport r;
  std::vector<bool> consumed(preds.size(), false);
  r.assignment.resize(gts.size());
  for (std::size_t v = 0; v < gts.size(); ++v) {
    const Nearest n = nearest(preds, gts[v], &consumed);
    if (n.index && n.distance <= tau) {
      consumed[*n.index] = true;
      r.assignment[v] = n.index;
      ++r.match_count;
    }
  }
  return r;
}

double surrogate_loss(std::span<const PredBox> preds, std::span<const GtBox> gts, double tau) {
  check_tau(tau);
  double loss = 0.0;
  for (const GtBox& gt : gts) loss += std::min(nearest(preds, gt).distance, tau);
  return loss;
}

double surrogate_loss_with_cls(std::span<const PredBox> preds, std::span<const GtBox> gts,
                               double tau) {
  check_tau(tau);
  double loss = 0.0;
  for (const GtBox& gt : gts) {
    const Nearest n = nearest(preds, gt);
    loss += std::min(n.distance, tau);
    if (n.index && n.distance <= tau) loss -= preds[*n.index].score;
  }
  return loss;
}

MatchReport match_report(std::span<const PredBox> preds, std::span<const GtBox> gts, double tau) {
  MatchReport r = greedy_match(preds, gts, tau);
  r.clamped_distance.reserve(gts.size());
  for (const GtBox& gt : gts) {
    const double d = std::min(nearest(preds, gt).distance, tau);
    r.clamped_distance.push_back(d);
    r.surrogate_loss += d;
  }
  return r;
}

}  // namespace semdirect
