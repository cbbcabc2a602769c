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

#include "semdirect/report.hpp"

#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "semdirect/benchfn.hpp"

namespace sd = semdirect;
using json = nlohmann::json;

namespace {

sd::MethodResult method(const std::string& name, double loss, double seconds) {
  sd::MethodResult m;
  m.method = name;
  m.loss = loss;
  m.objective = loss;
  m.match_count = 2;
  m.queries = 5;
  m.seconds = seconds;
  m.unit = {0.25, 0.75};
  m.params = {{0.1, 0.2}};
  return m;
}

sd::EvalReport sample_report(bool timings) {
  sd::EvalReport r{"replay:gt", sd::PerturbationSpec::motion_blur(9, 1), {}, {1}, {}};
  r.options.record_time = timings;
  sd::FrameReport ok;
  ok.frame_id = "a";
  ok.scene_id = "s";
  ok.clean = method("clean", 0.0, 0.5);
  ok.optimized = method("simple", 1.25, 2.5);
  sd::FrameReport bad;
  bad.frame_id = "b";
  bad.scene_id = "s";
  bad.error = "detector exploded";
  r.frames = {ok, bad};
  return r;
}

}  // namespace

TEST(TrajectoryCsv, HeaderAndRows) {
  sd::OptimizerConfig cfg;
  cfg.mode = sd::SelectionMode::kDirect;
  cfg.max_iterations = 50;
  const auto res = sd::run(sd::benchfn::make_objective(sd::benchfn::Function::kSchwefel), 6, cfg);
  std::istringstream csv(sd::trajectory_csv(res));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, sd::kTrajectoryHeader);
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 50u);
}

TEST(OptResultJson, Fields) {
  sd::OptimizerConfig cfg;
  cfg.max_queries = 50;
  const auto res = sd::run(sd::benchfn::make_objective(sd::benchfn::Function::kSphere), 2, cfg);
  const json j = json::parse(sd::opt_result_json(res, cfg, "sphere-2d"));
  EXPECT_EQ(j.at("label"), "sphere-2d");
  EXPECT_EQ(j.at("query_count"), res.query_count);
  EXPECT_EQ(j.at("best_value").get<double>(), res.best_value);
  EXPECT_EQ(j.at("config").at("mode"), "simple");
  EXPECT_EQ(j.at("trajectory").size(), res.trajectory.size());
}

TEST(EvalReportJson, TimingsOnlyWhenRequested) {
  const json plain = json::parse(sd::eval_report_json(sample_report(false)));
  EXPECT_FALSE(plain.at("frames")[0].at("optimized").contains("seconds"));
  const json timed = json::parse(sd::eval_report_json(sample_report(true)));
  EXPECT_EQ(timed.at("frames")[0].at("optimized").at("seconds"), 2.5);
}

TEST(EvalReportJson, Structure) {
  const json j = json::parse(sd::eval_report_json(sample_report(false)));
  EXPECT_EQ(j.at("perturbation").at("kernel_size"), 9);
  EXPECT_EQ(j.at("perturbation").at("dimension"), 2);
  EXPECT_EQ(j.at("frames")[1].at("error"), "detector exploded");
  EXPECT_FALSE(j.at("frames")[1].contains("optimized"));
  EXPECT_EQ(j.at("frames")[0].at("query_count"), 10);
  EXPECT_EQ(j.at("frames")[0].at("optimized").at("theta_unit")[1], 0.75);
}

TEST(EvalReportJson, StableBytes) {
  EXPECT_EQ(sd::eval_report_json(sample_report(false)), sd::eval_report_json(sample_report(false)));
}

TEST(SummaryCsv, RowsPerMethodSkippingFailures) {
  std::istringstream csv(sd::summary_csv(sample_report(false)));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, sd::kSummaryHeader);
  std::getline(csv, line);
  EXPECT_EQ(line, "a,clean,2,0,5,0.5");
  std::getline(csv, line);
  EXPECT_EQ(line, "a,simple,2,1.25,5,2.5");
  EXPECT_FALSE(std::getline(csv, line));
}
