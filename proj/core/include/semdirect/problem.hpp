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

#ifndef SEMDIRECT_PROBLEM_HPP_
#define SEMDIRECT_PROBLEM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semdirect/detector.hpp"
#include "semdirect/optimizer.hpp"
#include "semdirect/perturb.hpp"
#include "semdirect/surrogate.hpp"

namespace semdirect {

enum class ObjectiveVariant {
  kDistance,           // clamped centre distance
  kDistanceWithScore,  // clamped centre distance minus matched score
};

std::string to_string(ObjectiveVariant v);
ObjectiveVariant parse_objective_variant(const std::string& name);

// Loss, matches and decoded parameters for one detector query.
struct QueryOutcome {
  std::vector<double> unit;
  double objective = 0.0;
  double loss = 0.0;
  std::size_t match_count = 0;
};

// The black-box objective for one frame: perturb, detect, score. Every call to
// evaluate() issues exactly one detector query.
class FrameProblem {
 public:
  FrameProblem(Frame frame, Annotation annotation, PerturbationSpec spec, Detector& detector,
               double tau, ObjectiveVariant variant);

  std::size_t dimension() const { return spec_.dimension(); }
  const PerturbationSpec& spec() const { return spec_; }
  const Frame& frame() const { return frame_; }
  const Annotation& annotation() const { return annotation_; }
  double tau() const { return tau_; }

  // Objective value at a point of the unit cube. Detector failures are
  // rethrown as DetectorError naming the frame and the point.
  double evaluate(std::span<const double> unit);
  QueryOutcome evaluate_detailed(std::span<const double> unit);
  // Queries the unperturbed frame.
  QueryOutcome evaluate_unperturbed();

  // Binds evaluate(); the problem must outlive the returned objective.
  Objective objective();

  std::size_t queries() const { return queries_; }
  // First query attaining the highest objective since the last reset.
  const std::optional<QueryOutcome>& best() const { return best_; }
  void reset_log();

 private:
  QueryOutcome score(const Frame& perturbed, std::span<const double> unit);

  Frame frame_;
  Annotation annotation_;
  PerturbationSpec spec_;
  Detector* detector_;
  double tau_;
  ObjectiveVariant variant_;
  std::size_t queries_ = 0;
  std::optional<QueryOutcome> best_;
};

struct BuiltObjective {
  std::shared_ptr<FrameProblem> problem;
  Objective objective;
  std::size_t dimension = 0;
};

BuiltObjective build_objective(const Frame& frame, const Annotation& annotation,
                               const PerturbationSpec& spec, Detector& detector, double tau,
                               ObjectiveVariant variant);

struct EvalOptions {
  OptimizerConfig optimizer;
  double tau = kDefaultMatchThreshold;
  ObjectiveVariant variant = ObjectiveVariant::kDistance;
  bool random_baseline = false;
  std::size_t random_queries = 2000;
  std::uint64_t seed = 0;
  bool natural_baseline = false;
  // Include wall-clock seconds in the JSON report (the CSV always has them).
  bool record_time = false;
};

struct MethodResult {
  std::string method;
  std::size_t match_count = 0;
  double loss = 0.0;
  double objective = 0.0;
  std::size_t queries = 0;
  double seconds = 0.0;
  std::vector<double> unit;  // empty for the unperturbed frame
  std::vector<std::vector<double>> params;  // decoded, per image
};

struct FrameReport {
  std::string frame_id;
  std::string scene_id;
  std::optional<std::string> error;
  std::optional<MethodResult> clean;
  std::optional<MethodResult> optimized;
  std::optional<MethodResult> random;
  std::optional<MethodResult> natural_plus;
  std::optional<MethodResult> natural_minus;
  // Set on frames that reuse a perturbation optimized on an earlier frame.
  std::optional<MethodResult> carried;
  std::optional<std::string> carried_from;
  std::vector<IterationRecord> trajectory;

  std::size_t total_queries() const;
  // The result that represents the adversarial outcome for this frame.
  const MethodResult* adversarial() const;
};

// Clean query, optimizer run, then requested baselines, each with separate
// query accounting.
FrameReport evaluate_frame(const Frame& frame, const Annotation& annotation,
                           const PerturbationSpec& spec, Detector& detector,
                           const EvalOptions& options);

// Evaluates a fixed perturbation with a single query.
FrameReport evaluate_carried(const Frame& frame, const Annotation& annotation,
                             const PerturbationSpec& spec, Detector& detector,
                             const EvalOptions& options, std::span<const double> unit,
                             const std::string& source_frame_id);

// For each frame of a scene, the 0-based index of the frame whose optimized
// perturbation it uses. `refresh_points` are 1-based, strictly increasing and
// must start at 1.
std::vector<std::size_t> carryover_schedule(std::size_t frame_count,
                                            std::span<const std::size_t> refresh_points);

// --- manifests ---------------------------------------------------------------

struct ManifestImage {
  std::string camera;
  std::filesystem::path path;  // resolved against the manifest directory
};

struct ManifestFrame {
  std::string frame_id;
  std::vector<ManifestImage> images;
  std::vector<GtBox> gt;

  Frame load() const;
  Annotation annotation() const { return {frame_id, gt}; }
};

struct Scene {
  std::string scene_id;
  std::vector<ManifestFrame> frames;
};

struct Manifest {
  std::vector<Scene> scenes;
  std::size_t frame_count() const;
};

Manifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const Manifest& manifest, const std::filesystem::path& base_dir);

}  // namespace semdirect

#endif  // SEMDIRECT_PROBLEM_HPP_
