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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace sd = semdirect;

namespace {
sd::PredBox pred(const char* cls, double x, double y, double score = 1.0) { return {cls, {x, y}, score}; }
sd::GtBox gt(const char* cls, double x, double y) { return {cls, {x, y}}; }
}  // namespace

TEST(CenterDistance, Examples) {
  EXPECT_DOUBLE_EQ(sd::center_distance({0.5, 0}, {0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(sd::center_distance({1.25, -3}, {1.25, -3}), 0.0);
  const std::vector<sd::PredBox> preds = {pred("A", 3, 4)};
  EXPECT_EQ(sd::center_distances(preds, gt("A", 0, 0)), std::vector<double>{5.0});
}

TEST(GreedyMatch, SingleMatch) {
  const std::vector<sd::PredBox> preds = {pred("A", 0.5, 0)};
  const std::vector<sd::GtBox> gts = {gt("A", 0, 0)};
  const auto r = sd::greedy_match(preds, gts, 2.0);
  EXPECT_EQ(r.match_count, 1u);
  EXPECT_EQ(r.assignment[0], std::optional<std::size_t>(0));
}

TEST(GreedyMatch, ClassFilter) {
  const std::vector<sd::PredBox> preds = {pred("B", 0, 0), pred("B", 0.1, 0)};
  const std::vector<sd::GtBox> gts = {gt("A", 0, 0)};
  EXPECT_EQ(sd::greedy_match(preds, gts, 2.0).match_count, 0u);
}

TEST(GreedyMatch, ConsumptionFollowsAnnotationOrder) {
  const std::vector<sd::PredBox> preds = {pred("A", 0.4, 0)};
  const std::vector<sd::GtBox> gts = {gt("A", 0, 0), gt("A", 1, 0)};
  const auto r = sd::greedy_match(preds, gts, 2.0);
  EXPECT_EQ(r.match_count, 1u);
  EXPECT_EQ(r.assignment[0], std::optional<std::size_t>(0));
  EXPECT_FALSE(r.assignment[1].has_value());
}

TEST(GreedyMatch, ThresholdIsInclusive) {
  const std::vector<sd::PredBox> preds = {pred("A", 2.0, 0)};
  const std::vector<sd::GtBox> gts = {gt("A", 0, 0)};
  EXPECT_EQ(sd::greedy_match(preds, gts, 2.0).match_count, 1u);
  EXPECT_EQ(sd::greedy_match(preds, gts, 1.999).match_count, 0u);
}

TEST(GreedyMatch, RejectsBadTau) {
  const std::vector<sd::PredBox> preds;
  const std::vector<sd::GtBox> gts = {gt("A", 0, 0)};
  EXPECT_THROW(sd::greedy_match(preds, gts, 0.0), std::invalid_argument);
  EXPECT_THROW(sd::surrogate_loss(preds, gts, std::nan("")), std::invalid_argument);
}

TEST(SurrogateLoss, Examples) {
  const std::vector<sd::GtBox> one = {gt("A", 0, 0)};
  const std::vector<sd::PredBox> near = {pred("A", 0.5, 0)};
  EXPECT_DOUBLE_EQ(sd::surrogate_loss(near, one, 2.0), 0.5);

  const std::vector<sd::GtBox> two = {gt("A", 0, 0), gt("B", 5, 5)};
  EXPECT_DOUBLE_EQ(sd::surrogate_loss({}, two, 2.0), 4.0);

  // No consumption: both ground truths see the same prediction.
  const std::vector<sd::GtBox> pair = {gt("A", 0, 0), gt("A", 1, 0)};
  const std::vector<sd::PredBox> mid = {pred("A", 0.4, 0)};
  EXPECT_NEAR(sd::surrogate_loss(mid, pair, 2.0), 1.0, 1e-15);
  EXPECT_EQ(sd::greedy_match(mid, pair, 2.0).match_count, 1u);
}

TEST(SurrogateLossWithCls, Examples) {
  const std::vector<sd::GtBox> one = {gt("A", 0, 0)};
  const std::vector<sd::PredBox> near = {pred("A", 0.5, 0, 0.9)};
  EXPECT_NEAR(sd::surrogate_loss_with_cls(near, one, 2.0), -0.4, 1e-15);
  EXPECT_DOUBLE_EQ(sd::surrogate_loss_with_cls({}, one, 2.0), 2.0);
}

TEST(SurrogateLossWithCls, EqualsLossMinusNearestScores) {
  const std::vector<sd::GtBox> gts = {gt("A", 0, 0), gt("B", 3, 0), gt("A", 10, 10)};
  const std::vector<sd::PredBox> preds = {pred("A", 0.3, 0.4, 0.8), pred("A", 1.0, 0, 0.2),
                                          pred("B", 3, 1.5, 0.6), pred("B", 9, 9, 0.99)};
  const double base = sd::surrogate_loss(preds, gts, 2.0);
  EXPECT_NEAR(base, 0.5 + 1.5 + 2.0, 1e-12);
  EXPECT_NEAR(sd::surrogate_loss_with_cls(preds, gts, 2.0), base - 0.8 - 0.6, 1e-12);
}

TEST(MatchReport, CombinesBoth) {
  const std::vector<sd::GtBox> gts = {gt("A", 0, 0), gt("A", 1, 0)};
  const std::vector<sd::PredBox> preds = {pred("A", 0.4, 0)};
  const auto r = sd::match_report(preds, gts, 2.0);
  EXPECT_EQ(r.match_count, 1u);
  EXPECT_NEAR(r.surrogate_loss, 1.0, 1e-15);
  ASSERT_EQ(r.clamped_distance.size(), 2u);
  EXPECT_NEAR(r.clamped_distance[1], 0.6, 1e-15);
}

TEST(SurrogateLoss, BoundsOnRandomConfigurations) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    std::vector<sd::GtBox> gts(1 + rng() % 6);
    std::vector<sd::PredBox> preds(rng() % 7);
    for (auto& g : gts) g = gt(rng() % 2 ? "A" : "B", c(rng), c(rng));
    for (auto& p : preds) p = pred(rng() % 2 ? "A" : "B", c(rng), c(rng));
    const double loss = sd::surrogate_loss(preds, gts, 2.0);
    EXPECT_GE(loss, 0.0);
    EXPECT_LE(loss, 2.0 * static_cast<double>(gts.size()));
    // Adding a prediction never increases the loss.
    auto more = preds;
    more.push_back(pred("A", c(rng), c(rng)));
    EXPECT_LE(sd::surrogate_loss(more, gts, 2.0), loss);
    // Every matched ground truth is within tau of some prediction.
    const auto m = sd::greedy_match(preds, gts, 2.0);
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (m.assignment[g]) EXPECT_LE(sd::center_distance(preds[*m.assignment[g]].center, gts[g].center), 2.0);
    }
  }
}
