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

#include "semdirect/problem.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "semdirect/image_io.hpp"

namespace semdirect {

using nlohmann::json;

std::string to_string(ObjectiveVariant v) {
  return v == ObjectiveVariant::kDistance ? "distance" : "distance_cls";
}

ObjectiveVariant parse_objective_variant(const std::string& name) {
  if (name == "distance") return ObjectiveVariant::kDistance;
  if (name == "distance_cls") return ObjectiveVariant::kDistanceWithScore;
  throw std::invalid_argument("unknown objective '" + name + "' (expected distance|distance_cls)");
}

FrameProblem::FrameProblem(Frame frame, Annotation annotation, PerturbationSpec spec,
                           Detector& detector, double tau, ObjectiveVariant variant)
    : frame_(std::move(frame)),
      annotation_(std::move(annotation)),
      spec_(std::move(spec)),
      detector_(&detector),
      tau_(tau),
      variant_(variant) {
  frame_.validate();
  if (annotation_.frame_id != frame_.frame_id) {
    throw std::invalid_argument("annotation for '" + annotation_.frame_id +
                                "' does not match frame '" + frame_.frame_id + "'");
  }
  if (frame_.images.size() != spec_.images) {
    throw std::invalid_argument("frame '" + frame_.frame_id + "' has " +
                                std::to_string(frame_.images.size()) +
                                " images but the perturbation expects " +
                                std::to_string(spec_.images));
  }
  if (!(tau_ > 0.0)) throw std::invalid_argument("tau must be > 0");
}

QueryOutcome FrameProblem::score(const Frame& perturbed, std::span<const double> unit) {
  std::vector<PredBox> preds;
  try {
    preds = detector_->detect(perturbed);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "frame '" << frame_.frame_id << "'";
    if (!unit.empty()) {
      msg << " at theta=(";
      for (std::size_t i = 0; i < unit.size(); ++i) msg << (i ? ", " : "") << unit[i];
      msg << ")";
    }
    msg << ": " << e.what();
    throw DetectorError(msg.str());
  }
  ++queries_;
  const MatchReport m = match_report(preds, annotation_.gt, tau_);
  QueryOutcome out;
  out.unit.assign(unit.begin(), unit.end());
  out.loss = m.surrogate_loss;
  out.match_count = m.match_count;
  out.objective = variant_ == ObjectiveVariant::kDistance
                      ? m.surrogate_loss
                      : surrogate_loss_with_cls(preds, annotation_.gt, tau_);
  if (!best_ || out.objective > best_->objective) best_ = out;
  return out;
}

QueryOutcome FrameProblem::evaluate_detailed(std::span<const double> unit) {
  return score(frame_.with_buffers(decode_and_apply(frame_.buffers(), spec_, unit)), unit);
}

double FrameProblem::evaluate(std::span<const double> unit) { return evaluate_detailed(unit).objective; }

QueryOutcome FrameProblem::evaluate_unperturbed() { return score(frame_, {}); }

Objective FrameProblem::objective() {
  return [this](std::span<const double> unit) { return evaluate(unit); };
}

void FrameProblem::reset_log() { best_.reset(); }

BuiltObjective build_objective(const Frame& frame, const Annotation& annotation,
                               const PerturbationSpec& spec, Detector& detector, double tau,
                               ObjectiveVariant variant) {
  BuiltObjective out;
  out.problem = std::make_shared<FrameProblem>(frame, annotation, spec, detector, tau, variant);
  out.dimension = out.problem->dimension();
  out.objective = [p = out.problem](std::span<const double> unit) { return p->evaluate(unit); };
  return out;
}

std::size_t FrameReport::total_queries() const {
  std::size_t n = 0;
  for (const auto* m : {&clean, &optimized, &random, &natural_plus, &natural_minus, &carried}) {
    if (*m) n += (*m)->queries;
  }
  return n;
}

const MethodResult* FrameReport::adversarial() const {
  if (optimized) return &*optimized;
  if (carried) return &*carried;
  return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

MethodResult from_outcome(const std::string& method, const QueryOutcome& q, std::size_t queries,
                          const PerturbationSpec& spec) {
  MethodResult r;
  r.method = method;
  r.match_count = q.match_count;
  r.loss = q.loss;
  r.objective = q.objective;
  r.queries = queries;
  r.unit = q.unit;
  if (!q.unit.empty()) r.params = spec.decode(q.unit);
  return r;
}

}  // namespace

FrameReport evaluate_frame(const Frame& frame, const Annotation& annotation,
                           const PerturbationSpec& spec, Detector& detector,
                           const EvalOptions& options) {
  FrameReport report;
  report.frame_id = frame.frame_id;
  FrameProblem problem(frame, annotation, spec, detector, options.tau, options.variant);
  const std::string opt_name = to_string(options.optimizer.mode);

  // Colour and geometric families contain the identity at the cube midpoint;
  // motion blur has no identity member, so its clean reference is the raw frame.
  {
    const auto t0 = Clock::now();
    QueryOutcome q;
    if (spec.family == Family::kMotionBlur) {
      q = problem.evaluate_unperturbed();
    } else {
      const std::vector<double> mid(spec.dimension(), 0.5);
      q = problem.evaluate_detailed(mid);
    }
    report.clean = from_outcome("clean", q, 1, spec);
    report.clean->seconds = seconds_since(t0);
  }

  {
    problem.reset_log();
    const std::size_t before = problem.queries();
    const auto t0 = Clock::now();
    const OptResult res = run(problem.objective(), spec.dimension(), options.optimizer);
    report.optimized = from_outcome(opt_name, *problem.best(), problem.queries() - before, spec);
    report.optimized->seconds = seconds_since(t0);
    report.trajectory = res.trajectory;
  }

  if (options.random_baseline) {
    problem.reset_log();
    const std::size_t before = problem.queries();
    const auto t0 = Clock::now();
    random_search(problem.objective(), spec.dimension(), options.random_queries, options.seed);
    report.random = from_outcome("random", *problem.best(), problem.queries() - before, spec);
    report.random->seconds = seconds_since(t0);
  }

  if (options.natural_baseline) {
    const std::vector<double> ones(spec.dimension(), 1.0);
    const std::vector<double> zeros(spec.dimension(), 0.0);
    auto t0 = Clock::now();
    report.natural_plus = from_outcome("natural_plus", problem.evaluate_detailed(ones), 1, spec);
    report.natural_plus->seconds = seconds_since(t0);
    t0 = Clock::now();
    report.natural_minus = from_outcome("natural_minus", problem.evaluate_detailed(zeros), 1, spec);
    report.natural_minus->seconds = seconds_since(t0);
  }
  return report;
}

FrameReport evaluate_carried(const Frame& frame, const Annotation& annotation,
                             const PerturbationSpec& spec, Detector& detector,
                             const EvalOptions& options, std::span<const double> unit,
                             const std::string& source_frame_id) {
  FrameReport report;
  report.frame_id = frame.frame_id;
  report.carried_from = source_frame_id;
  FrameProblem problem(frame, annotation, spec, detector, options.tau, options.variant);
  const auto t0 = Clock::now();
  report.carried = from_outcome("carryover", problem.evaluate_detailed(unit), 1, spec);
  report.carried->seconds = seconds_since(t0);
  return report;
}

std::vector<std::size_t> carryover_schedule(std::size_t frame_count,
                                            std::span<const std::size_t> refresh_points) {
  if (frame_count == 0) throw std::invalid_argument("carryover: scene has no frames");
  if (refresh_points.empty() || refresh_points.front() != 1) {
    throw std::invalid_argument("carryover: refresh points must start at frame 1");
  }
  for (std::size_t i = 1; i < refresh_points.size(); ++i) {
    if (refresh_points[i] <= refresh_points[i - 1]) {
      throw std::invalid_argument("carryover: refresh points must be strictly increasing");
    }
  }
  std::vector<std::size_t> source(frame_count);
  std::size_t next = 0;
  std::size_t current = 0;
  for (std::size_t f = 0; f < frame_count; ++f) {
    if (next < refresh_points.size() && refresh_points[next] == f + 1) {
      current = f;
      ++next;
    }
    source[f] = current;
  }
  return source;
}

// --- manifests ---------------------------------------------------------------

Frame ManifestFrame::load() const {
  Frame f{frame_id, {}};
  for (const ManifestImage& img : images) f.images.push_back({img.camera, read_image(img.path)});
  f.validate();
  return f;
}

std::size_t Manifest::frame_count() const {
  std::size_t n = 0;
  for (const Scene& s : scenes) n += s.frames.size();
  return n;
}

namespace {

std::string label_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw std::invalid_argument("class must be a string or an integer");
}

}  // namespace

Manifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  Manifest m;
  try {
    const json doc = json::parse(text);
    std::set<std::string> ids;
    for (const json& s : doc.at("scenes")) {
      Scene scene;
      scene.scene_id = s.at("scene_id").get<std::string>();
      for (const json& f : s.at("frames")) {
        ManifestFrame frame;
        frame.frame_id = f.at("frame_id").get<std::string>();
        if (!ids.insert(frame.frame_id).second) {
          throw std::invalid_argument("duplicate frame id '" + frame.frame_id + "'");
        }
        for (const json& im : f.at("images")) {
          frame.images.push_back(
              {im.at("camera").get<std::string>(), base_dir / im.at("path").get<std::string>()});
        }
        for (const json& g : f.value("gt", json::array())) {
          frame.gt.push_back({label_of(g.at("class")), {g.at("cx").get<double>(), g.at("cy").get<double>()}});
        }
        scene.frames.push_back(std::move(frame));
      }
      m.scenes.push_back(std::move(scene));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.parent_path());
}

std::string manifest_to_json(const Manifest& manifest, const std::filesystem::path& base_dir) {
  json scenes = json::array();
  for (const Scene& s : manifest.scenes) {
    json frames = json::array();
    for (const ManifestFrame& f : s.frames) {
      json images = json::array();
      for (const ManifestImage& im : f.images) {
        images.push_back({{"camera", im.camera},
                          {"path", std::filesystem::relative(im.path, base_dir).generic_string()}});
      }
      json gt = json::array();
      for (const GtBox& g : f.gt) gt.push_back({{"class", g.class_id}, {"cx", g.center.x}, {"cy", g.center.y}});
      frames.push_back({{"frame_id", f.frame_id}, {"images", images}, {"gt", gt}});
    }
    scenes.push_back({{"scene_id", s.scene_id}, {"frames", frames}});
  }
  return json{{"scenes", scenes}}.dump(2);
}

}  // namespace semdirect
