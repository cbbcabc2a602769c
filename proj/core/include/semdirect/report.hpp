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

#ifndef SEMDIRECT_REPORT_HPP_
#define SEMDIRECT_REPORT_HPP_

#include <string>
#include <vector>

#include "semdirect/optimizer.hpp"
#include "semdirect/problem.hpp"

namespace semdirect {

// Column order of the trajectory CSV.
inline constexpr const char* kTrajectoryHeader = "iteration,queries,best_value,n_eq4,n_eq5,n_eq6";
// Column order of the evaluation summary CSV.
inline constexpr const char* kSummaryHeader = "frame_id,method,match_count,loss,queries,seconds";

std::string opt_result_json(const OptResult& result, const OptimizerConfig& config,
                            const std::string& label);
std::string trajectory_csv(const OptResult& result);

struct EvalReport {
  std::string detector;
  PerturbationSpec spec;
  EvalOptions options;
  std::vector<std::size_t> refresh_points;
  std::vector<FrameReport> frames;
};

// Stable key order and full double precision; identical reports serialize to
// identical bytes.
std::string eval_report_json(const EvalReport& report);
std::string summary_csv(const EvalReport& report);

}  // namespace semdirect

#endif  // SEMDIRECT_REPORT_HPP_
