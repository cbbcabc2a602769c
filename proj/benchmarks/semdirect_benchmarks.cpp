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

#include <benchmark/benchmark.h>

#include <random>

#include "semdirect/benchfn.hpp"
#include "semdirect/optimizer.hpp"
#include "semdirect/perturb.hpp"
#include "semdirect/surrogate.hpp"
#include "semdirect/synthetic_scene.hpp"

namespace sd = semdirect;

namespace {

void BM_Trisect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const sd::PartitionNode root = sd::init_root(n);
  std::vector<sd::SampledPair> pairs;
  for (std::size_t d = 0; d < n; ++d) pairs.push_back({d, 0.1 * static_cast<double>(d), 0.2});
  for (auto _ : state) {
    std::uint64_t next = 1;
    benchmark::DoNotOptimize(sd::trisect(root, pairs, next));
  }
}
BENCHMARK(BM_Trisect)->Arg(2)->Arg(6)->Arg(24);

sd::LeafLedger ledger_after(std::size_t queries) {
  sd::OptimizerConfig cfg;
  cfg.mode = sd::SelectionMode::kDirect;
  cfg.max_queries = queries;
  return *sd::run(sd::benchfn::make_objective(sd::benchfn::Function::kSchwefel), 6, cfg).leaves;
}

void BM_SelectDirect(benchmark::State& state) {
  const auto ledger = ledger_after(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sd::select_po_direct(ledger, 0.01, 6));
  state.counters["leaves"] = static_cast<double>(ledger.size());
}
BENCHMARK(BM_SelectDirect)->Arg(500)->Arg(5000);

void BM_SelectSimple(benchmark::State& state) {
  const auto ledger = ledger_after(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sd::select_po_simple(ledger, 0.01, 3, 6));
}
BENCHMARK(BM_SelectSimple)->Arg(500)->Arg(5000);

void BM_RunSimpleAckley(benchmark::State& state) {
  sd::OptimizerConfig cfg;
  cfg.max_queries = static_cast<std::size_t>(state.range(0));
  const auto f = sd::benchfn::make_objective(sd::benchfn::Function::kAckley);
  for (auto _ : state) benchmark::DoNotOptimize(sd::run(f, 2, cfg));
}
BENCHMARK(BM_RunSimpleAckley)->Arg(500)->Arg(2500);

const sd::ImageBuffer& test_image() {
  static const sd::ImageBuffer img = sd::procedural_image(224, 400, 1);
  return img;
}

void BM_Geometric(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sd::geometric_transform(test_image(), 1.05, 0.97, 0.02, -0.01));
}
BENCHMARK(BM_Geometric);

void BM_ColourShift(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sd::colour_shift(test_image(), 0.4, 1.2, -0.1));
}
BENCHMARK(BM_ColourShift);

void BM_MotionBlur(benchmark::State& state) {
  const auto kernel = sd::motion_blur_kernel(static_cast<std::size_t>(state.range(0)), 0.6, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(sd::convolve(test_image(), kernel));
}
BENCHMARK(BM_MotionBlur)->Arg(9)->Arg(21);

void BM_Matching(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> c(-50.0, 50.0);
  std::vector<sd::PredBox> preds(n);
  std::vector<sd::GtBox> gts(n);
  for (auto& p : preds) p = {rng() % 2 ? "car" : "pedestrian", {c(rng), c(rng)}, 1.0};
  for (auto& g : gts) g = {rng() % 2 ? "car" : "pedestrian", {c(rng), c(rng)}};
  for (auto _ : state) benchmark::DoNotOptimize(sd::match_report(preds, gts, 2.0));
}
BENCHMARK(BM_Matching)->Arg(8)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
