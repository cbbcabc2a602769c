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

#include <json.hpp>
#include <sstream>

namespace semdirect {

using ojson = nlohmann::ordered_json;

namespace {

std::string number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

ojson config_json(const OptimizerConfig& c) {
  ojson j;
  j["mode"] = to_string(c.mode);
  j["max_depth"] = c.max_depth;
  j["epsilon"] = c.epsilon;
  j["R"] = c.max_selected;
  j["max_iterations"] = c.max_iterations;
  j["max_queries"] = c.max_queries;
  return j;
}

ojson method_json(const MethodResult& m, bool with_time) {
  ojson j;
  j["method"] = m.method;
  j["match_count"] = m.match_count;
  j["loss"] = m.loss;
  j["objective"] = m.objective;
  j["queries"] = m.queries;
  if (with_time) j["seconds"] = m.seconds;
  j["theta_unit"] = m.unit;
  j["params"] = m.params;
  return j;
}

void csv_row(std::ostringstream& out, const std::string& frame_id, const MethodResult& m) {
  out << frame_id << ',' << m.method << ',' << m.match_count << ',' << number(m.loss) << ','
      << m.queries << ',' << number(m.seconds) << '\n';
}

}  // namespace

std::string opt_result_json(const OptResult& result, const OptimizerConfig& config,
                            const std::string& label) {
  ojson j;
  j["label"] = label;
  j["config"] = config_json(config);
  j["best_point"] = result.best_point;
  j["best_value"] = result.best_value;
  j["query_count"] = result.query_count;
  j["iterations"] = result.iterations;
  ojson traj = ojson::array();
  for (const IterationRecord& r : result.trajectory) {
    traj.push_back({{"iteration", r.iteration},
                    {"queries", r.queries},
                    {"best_value", r.best_value},
                    {"n_eq4", r.n_eq4},
                    {"n_eq5", r.n_eq5},
                    {"n_eq6", r.n_eq6},
                    {"n_selected", r.n_selected}});
  }
  j["trajectory"] = std::move(traj);
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const OptResult& result) {
  std::ostringstream out;
  out << kTrajectoryHeader << '\n';
  for (const IterationRecord& r : result.trajectory) {
    out << r.iteration << ',' << r.queries << ',' << number(r.best_value) << ',' << r.n_eq4 << ','
        << r.n_eq5 << ',' << r.n_eq6 << '\n';
  }
  return out.str();
}

std::string eval_report_json(const EvalReport& report) {
  const bool t = report.options.record_time;
  ojson j;
  j["detector"] = report.detector;
  ojson pert;
  pert["family"] = to_string(report.spec.family);
  if (report.spec.family == Family::kMotionBlur) {
    pert["kernel_size"] = report.spec.kernel_size;
  } else {
    pert["gamma"] = report.spec.gamma;
  }
  pert["images"] = report.spec.images;
  pert["dimension"] = report.spec.dimension();
  pert["parameters"] = report.spec.parameter_names();
  pert["lower"] = report.spec.lower();
  pert["upper"] = report.spec.upper();
  j["perturbation"] = std::move(pert);
  j["optimizer"] = config_json(report.options.optimizer);
  j["tau"] = report.options.tau;
  j["objective"] = to_string(report.options.variant);
  j["seed"] = report.options.seed;
  ojson baselines = ojson::array();
  if (report.options.random_baseline) baselines.push_back("random");
  if (report.options.natural_baseline) baselines.push_back("natural");
  j["baselines"] = std::move(baselines);
  if (report.options.random_baseline) j["random_queries"] = report.options.random_queries;
  j["refresh_points"] = report.refresh_points;

  ojson frames = ojson::array();
  for (const FrameReport& f : report.frames) {
    ojson fj;
    fj["frame_id"] = f.frame_id;
    fj["scene_id"] = f.scene_id;
    if (f.error) {
      fj["error"] = *f.error;
      frames.push_back(std::move(fj));
      continue;
    }
    if (f.carried_from) fj["carried_from"] = *f.carried_from;
    if (f.clean) fj["clean"] = method_json(*f.clean, t);
    if (f.optimized) fj["optimized"] = method_json(*f.optimized, t);
    if (f.carried) fj["carried"] = method_json(*f.carried, t);
    if (f.random) fj["random"] = method_json(*f.random, t);
    if (f.natural_plus) fj["natural_plus"] = method_json(*f.natural_plus, t);
    if (f.natural_minus) fj["natural_minus"] = method_json(*f.natural_minus, t);
    fj["query_count"] = f.total_queries();
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);
  return j.dump(2) + "\n";
}

std::string summary_csv(const EvalReport& report) {
  std::ostringstream out;
  out << kSummaryHeader << '\n';
  for (const FrameReport& f : report.frames) {
    if (f.error) continue;
    for (const auto* m : {&f.clean, &f.optimized, &f.carried, &f.random, &f.natural_plus, &f.natural_minus}) {
      if (*m) csv_row(out, f.frame_id, **m);
    }
  }
  return out.str();
}

}  // namespace semdirect
