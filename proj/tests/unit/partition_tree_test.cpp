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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace sd = semdirect;

namespace {

std::vector<sd::SampledPair> pairs_for(const sd::PartitionNode& node,
                                       const std::vector<std::pair<double, double>>& values) {
  std::vector<sd::SampledPair> out;
  const auto dims = node.long_dimensions();
  for (std::size_t k = 0; k < dims.size(); ++k) out.push_back({dims[k], values[k].first, values[k].second});
  return out;
}

}  // namespace

TEST(Pow3, SmallPowers) {
  EXPECT_EQ(sd::pow3(0), 1);
  EXPECT_EQ(sd::pow3(1), 3);
  EXPECT_EQ(sd::pow3(5), 243);
  EXPECT_THROW(sd::pow3(-1), std::exception);
  EXPECT_THROW(sd::pow3(sd::kMaxExponent + 1), std::exception);
}

TEST(InitRoot, CenterAndDiameter) {
  const auto root = sd::init_root(2);
  EXPECT_EQ(root.center.to_unit(), (std::vector<double>{0.5, 0.5}));
  EXPECT_DOUBLE_EQ(root.diameter(), 1.0);
  EXPECT_EQ(root.depth(), 0);

  const auto one = sd::init_root(1);
  EXPECT_EQ(one.center.exponents, std::vector<int>{0});
  EXPECT_DOUBLE_EQ(one.center.coordinate(0), 0.5);

  const auto big = sd::init_root(24);
  ASSERT_EQ(big.dimension(), 24u);
  for (double c : big.center.to_unit()) EXPECT_DOUBLE_EQ(c, 0.5);

  EXPECT_THROW(sd::init_root(0), std::invalid_argument);
}

TEST(SamplePoints, RootIn2D) {
  const auto pts = sd::sample_points(sd::init_root(2));
  ASSERT_EQ(pts.size(), 4u);
  const std::vector<std::vector<double>> want = {{1.0 / 6, 0.5}, {5.0 / 6, 0.5}, {0.5, 1.0 / 6}, {0.5, 5.0 / 6}};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto got = pts[i].point.to_unit();
    EXPECT_NEAR(got[0], want[i][0], 1e-15);
    EXPECT_NEAR(got[1], want[i][1], 1e-15);
  }
  EXPECT_EQ(pts[0].direction, -1);
  EXPECT_EQ(pts[1].direction, +1);
}

TEST(SamplePoints, OnlyLongEdges) {
  sd::PartitionNode node;
  node.center.numerators = {3, 1};  // (1/2, 1/2) with exponents (1, 0)
  node.center.exponents = {1, 0};
  const auto pts = sd::sample_points(node);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].dimension, 1u);
  EXPECT_NEAR(pts[0].point.coordinate(0), 0.5, 1e-15);
  EXPECT_NEAR(pts[0].point.coordinate(1), 1.0 / 6, 1e-15);
  EXPECT_NEAR(pts[1].point.coordinate(1), 5.0 / 6, 1e-15);
}

TEST(SamplePoints, OneDimensionalRoot) {
  const auto pts = sd::sample_points(sd::init_root(1));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(pts[0].point.coordinate(0), 1.0 / 6, 1e-15);
  EXPECT_NEAR(pts[1].point.coordinate(0), 5.0 / 6, 1e-15);
}

TEST(Trisect, DivisionOrderFollowsBestPairValue) {
  sd::PartitionNode root = sd::init_root(2);
  root.value = 0.0;
  std::uint64_t next = 1;
  // dim 0: minus 1, plus 5; dim 1: minus 2, plus 3.
  const auto tri = sd::trisect(root, pairs_for(root, {{1.0, 5.0}, {2.0, 3.0}}), next);
  EXPECT_EQ(tri.division_order, (std::vector<std::size_t>{0, 1}));
  ASSERT_EQ(tri.children.size(), 4u);

  // First pair: split along dim 0, sides (1/3, 1).
  EXPECT_NEAR(tri.children[0].center.coordinate(0), 1.0 / 6, 1e-15);
  EXPECT_NEAR(tri.children[0].center.coordinate(1), 0.5, 1e-15);
  EXPECT_EQ(tri.children[0].center.exponents, (std::vector<int>{1, 0}));
  EXPECT_NEAR(tri.children[1].center.coordinate(0), 5.0 / 6, 1e-15);
  // Second pair: split along dim 1 inside the middle slab, sides (1/3, 1/3).
  EXPECT_NEAR(tri.children[2].center.coordinate(1), 1.0 / 6, 1e-15);
  EXPECT_EQ(tri.children[2].center.exponents, (std::vector<int>{1, 1}));
  EXPECT_EQ(tri.center.center.exponents, (std::vector<int>{1, 1}));
  EXPECT_EQ(tri.center.creation_index, root.creation_index);
  EXPECT_EQ(next, 5u);
}

TEST(Trisect, SlopeFormula) {
  sd::PartitionNode root = sd::init_root(1);
  root.value = 1.0;
  std::uint64_t next = 1;
  const auto tri = sd::trisect(root, pairs_for(root, {{1.0, 2.0}}), next);
  EXPECT_DOUBLE_EQ(tri.slope, 3.0);
  EXPECT_DOUBLE_EQ(tri.center.slope, 3.0);
  for (const auto& c : tri.children) EXPECT_DOUBLE_EQ(c.slope, 3.0);
  EXPECT_DOUBLE_EQ(tri.children[1].value, 2.0);
}

TEST(Trisect, TiesFollowDimensionIndex) {
  sd::PartitionNode root = sd::init_root(3);
  std::uint64_t next = 1;
  const auto tri = sd::trisect(root, pairs_for(root, {{4.0, 4.0}, {4.0, 4.0}, {4.0, 4.0}}), next);
  EXPECT_EQ(tri.division_order, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Trisect, RejectsMissingPairs) {
  sd::PartitionNode root = sd::init_root(2);
  std::uint64_t next = 1;
  const std::vector<sd::SampledPair> partial = {{0, 0.0, 0.0}};
  EXPECT_THROW(sd::trisect(root, partial, next), std::invalid_argument);
}

TEST(Trisect, ChildrenTileParentExactly) {
  sd::PartitionNode node = sd::init_root(3);
  std::uint64_t next = 1;
  const auto tri = sd::trisect(node, pairs_for(node, {{0.1, 0.3}, {0.9, 0.2}, {0.4, 0.5}}), next);
  // Volume in units of 3^-3: parent 27, pieces 27 / 3^(sum of exponents).
  std::int64_t total = sd::pow3(3 - tri.center.volume_exponent());
  for (const auto& c : tri.children) total += sd::pow3(3 - c.volume_exponent());
  EXPECT_EQ(total, 27);
}

TEST(LeafLedger, InsertExtractAndBest) {
  sd::LeafLedger ledger;
  sd::PartitionNode a = sd::init_root(1);
  a.value = 2.0;
  ledger.insert(a);
  ledger.observe(a.center, 2.0);
  EXPECT_EQ(ledger.size(), 1u);
  EXPECT_DOUBLE_EQ(ledger.best_value(), 2.0);

  // Equal value does not move the incumbent.
  sd::ExactPoint other{{1}, {1}};
  ledger.observe(other, 2.0);
  EXPECT_EQ(ledger.best_point(), a.center);
  ledger.observe(other, 3.0);
  EXPECT_EQ(ledger.best_point(), other);

  const auto out = ledger.extract(0, a.creation_index);
  EXPECT_EQ(out.center, a.center);
  EXPECT_TRUE(ledger.empty());
  EXPECT_THROW(ledger.extract(0, 0), std::exception);
}

TEST(ExactPoint, CoordinatesAreExactThirds) {
  const sd::ExactPoint p{{1, 13}, {2, 3}};
  EXPECT_DOUBLE_EQ(p.coordinate(0), 1.0 / 18.0);
  EXPECT_DOUBLE_EQ(p.coordinate(1), 13.0 / 54.0);
}
