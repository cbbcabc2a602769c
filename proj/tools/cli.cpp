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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "semdirect/benchfn.hpp"
#include "semdirect/image_io.hpp"
#include "semdirect/optimizer.hpp"
#include "semdirect/perturb.hpp"
#include "semdirect/report.hpp"
#include "semdirect/synthetic_scene.hpp"

namespace semdirect::cli {

namespace {

constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

std::vector<std::size_t> parse_refresh(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const unsigned long v = std::stoul(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad refresh point '" + item + "'");
    out.push_back(v);
  }
  return out;
}

SyntheticProfile parse_synthetic(const std::string& args, std::uint64_t default_seed) {
  SyntheticProfile p;
  p.seed = default_seed;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad synthetic option '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "seed") {
      p.seed = std::stoull(value);
    } else if (key == "gain") {
      const auto dash = value.find('-');
      if (dash == std::string::npos) throw std::invalid_argument("gain expects LO-HI");
      p.min_gain = std::stod(value.substr(0, dash));
      p.max_gain = std::stod(value.substr(dash + 1));
    } else {
      throw std::invalid_argument("unknown synthetic option '" + key + "'");
    }
  }
  return p;
}

}  // namespace

DetectorFactory::DetectorFactory(std::string spec, const Manifest& manifest, double tau,
                                 std::uint64_t seed)
    : spec_(std::move(spec)), manifest_(&manifest), tau_(tau), seed_(seed) {
  if (spec_.empty()) throw std::invalid_argument("no detector given (--detector or SEMDIRECT_DETECTOR)");
  if (!(spec_ == "synthetic" || starts_with(spec_, "synthetic:") || starts_with(spec_, "replay:") ||
        starts_with(spec_, "exec:") || starts_with(spec_, "http://") ||
        starts_with(spec_, "https://"))) {
    throw std::invalid_argument("unrecognized detector spec '" + spec_ + "'");
  }
  if (spec_ != "synthetic" && starts_with(spec_, "synthetic")) parse_synthetic(spec_.substr(10), seed_);
}

std::unique_ptr<Detector> DetectorFactory::make() const {
  if (spec_ == "synthetic" || starts_with(spec_, "synthetic:")) {
    const SyntheticProfile profile =
        parse_synthetic(spec_ == "synthetic" ? "" : spec_.substr(10), seed_);
    auto det = std::make_unique<SyntheticDetector>(profile, tau_);
    for (const Scene& s : manifest_->scenes) {
      for (const ManifestFrame& f : s.frames) det->add_frame(f.load(), f.annotation());
    }
    return det;
  }
  if (spec_ == "replay:gt") {
    std::vector<Annotation> anns;
    for (const Scene& s : manifest_->scenes) {
      for (const ManifestFrame& f : s.frames) anns.push_back(f.annotation());
    }
    return std::make_unique<ReplayDetector>(ReplayDetector::echo(anns));
  }
  if (starts_with(spec_, "replay:")) {
    return std::make_unique<ReplayDetector>(ReplayDetector::from_json_file(spec_.substr(7)));
  }
  if (starts_with(spec_, "exec:")) return std::make_unique<SubprocessDetector>(spec_.substr(5));
  return std::make_unique<HttpDetector>(spec_);
}

namespace {

struct BenchArgs {
  std::string function;
  std::size_t dim = 2;
  std::string mode = "simple";
  double epsilon = 0.01;
  int depth = 6;
  std::size_t r = 3;
  std::size_t iters = 0;
  std::size_t queries = 0;
  std::string json_out = "bench.json";
  std::string csv_out = "bench.csv";
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const benchfn::Function fn = benchfn::parse_function(a.function);
  if (a.dim < 1) throw std::invalid_argument("--dim must be >= 1");
  OptimizerConfig cfg;
  cfg.mode = parse_selection_mode(a.mode);
  cfg.epsilon = a.epsilon;
  cfg.max_depth = a.depth;
  cfg.max_selected = a.r;
  if (a.iters == 0 && a.queries == 0) {
    cfg.max_queries = 2500;
  } else {
    cfg.max_iterations = a.iters ? a.iters : kUnlimited;
    cfg.max_queries = a.queries ? a.queries : kUnlimited;
  }
  cfg.validate();

  const OptResult res = run(benchfn::make_objective(fn), a.dim, cfg);
  const std::string label = benchfn::to_string(fn) + "-" + std::to_string(a.dim) + "d";
  write_file(a.json_out, opt_result_json(res, cfg, label));
  write_file(a.csv_out, trajectory_csv(res));
  out << label << " " << to_string(cfg.mode) << ": best " << res.best_value << " after "
      << res.query_count << " queries, " << res.iterations << " iterations\n";
  return 0;
}

struct EvaluateArgs {
  std::string manifest;
  std::string detector;
  std::string perturbation = "colour";
  double gamma = 0.3;
  std::size_t kernel = 9;
  double tau = kDefaultMatchThreshold;
  std::string mode = "simple";
  double epsilon = 0.01;
  int depth = 6;
  std::size_t r = 3;
  std::size_t iters = 0;
  std::size_t queries = 2500;
  std::vector<std::string> baselines;
  std::size_t random_queries = 2000;
  std::string refresh;
  std::string objective = "distance";
  std::string out = "report.json";
  std::string summary = "summary.csv";
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool timings = false;
};

PerturbationSpec make_spec(const std::string& family, double gamma, std::size_t kernel,
                           std::size_t images) {
  switch (parse_family(family)) {
    case Family::kGeometric: return PerturbationSpec::geometric(gamma, images);
    case Family::kColour: return PerturbationSpec::colour(gamma, images);
    case Family::kMotionBlur: return PerturbationSpec::motion_blur(kernel, images);
  }
  throw std::logic_error("unreachable");
}

// One scheduling unit: a scene with carryover, otherwise a single frame.
struct WorkUnit {
  std::size_t scene;
  std::vector<std::size_t> frames;  // indices into the scene
};

void evaluate_unit(const WorkUnit& unit, const Manifest& manifest, const PerturbationSpec& base_spec,
                   const EvalOptions& options, const std::vector<std::size_t>& refresh,
                   Detector& detector, std::vector<FrameReport>& slots,
                   const std::vector<std::size_t>& slot_offset) {
  const Scene& scene = manifest.scenes[unit.scene];
  std::vector<std::size_t> source;
  if (!refresh.empty()) {
    std::vector<std::size_t> points;
    for (std::size_t p : refresh) {
      if (p <= scene.frames.size()) points.push_back(p);
    }
    source = carryover_schedule(scene.frames.size(), points);
  }
  std::vector<std::optional<std::vector<double>>> optimized(scene.frames.size());

  for (std::size_t fi : unit.frames) {
    const ManifestFrame& mf = scene.frames[fi];
    FrameReport& slot = slots[slot_offset[unit.scene] + fi];
    try {
      const Frame frame = mf.load();
      PerturbationSpec spec = base_spec;
      spec.images = frame.images.size();
      if (!refresh.empty() && source[fi] != fi) {
        const auto& theta = optimized[source[fi]];
        if (!theta) {
          throw std::runtime_error("source frame '" + scene.frames[source[fi]].frame_id +
                                   "' produced no perturbation to carry over");
        }
        slot = evaluate_carried(frame, mf.annotation(), spec, detector, options, *theta,
                                scene.frames[source[fi]].frame_id);
      } else {
        slot = evaluate_frame(frame, mf.annotation(), spec, detector, options);
        optimized[fi] = slot.optimized->unit;
      }
    } catch (const std::exception& e) {
      slot = FrameReport{};
      slot.frame_id = mf.frame_id;
      slot.error = e.what();
    }
    slot.scene_id = scene.scene_id;
  }
}

int cmd_evaluate(EvaluateArgs a, std::ostream& out, std::ostream& err) {
  if (a.detector.empty()) {
    if (const char* env = std::getenv("SEMDIRECT_DETECTOR")) a.detector = env;
  }
  const Manifest manifest = load_manifest(a.manifest);
  if (manifest.frame_count() == 0) throw std::invalid_argument("manifest has no frames");

  EvalOptions options;
  options.optimizer.mode = parse_selection_mode(a.mode);
  options.optimizer.epsilon = a.epsilon;
  options.optimizer.max_depth = a.depth;
  options.optimizer.max_selected = a.r;
  options.optimizer.max_iterations = a.iters ? a.iters : kUnlimited;
  options.optimizer.max_queries = a.queries;
  options.optimizer.validate();
  options.tau = a.tau;
  if (!(a.tau > 0.0)) throw std::invalid_argument("--tau must be > 0");
  options.variant = parse_objective_variant(a.objective);
  options.seed = a.seed;
  options.random_queries = a.random_queries;
  options.record_time = a.timings;
  for (const std::string& b : a.baselines) {
    if (b == "random") {
      options.random_baseline = true;
    } else if (b == "natural") {
      options.natural_baseline = true;
    } else {
      throw std::invalid_argument("unknown baseline '" + b + "' (expected random|natural)");
    }
  }
  const std::vector<std::size_t> refresh = parse_refresh(a.refresh);
  if (!refresh.empty() && refresh.front() != 1) {
    throw std::invalid_argument("--refresh must start at frame 1");
  }

  const std::size_t first_images = manifest.scenes.front().frames.empty()
                                       ? 1
                                       : std::max<std::size_t>(1, manifest.scenes.front().frames.front().images.size());
  const PerturbationSpec spec = make_spec(a.perturbation, a.gamma, a.kernel, first_images);
  const DetectorFactory factory(a.detector, manifest, a.tau, a.seed);

  std::vector<WorkUnit> units;
  std::vector<std::size_t> slot_offset;
  std::size_t total = 0;
  for (std::size_t s = 0; s < manifest.scenes.size(); ++s) {
    slot_offset.push_back(total);
    const std::size_t n = manifest.scenes[s].frames.size();
    total += n;
    if (n == 0) continue;
    if (!refresh.empty()) {
      WorkUnit u{s, {}};
      for (std::size_t f = 0; f < n; ++f) u.frames.push_back(f);
      units.push_back(std::move(u));
    } else {
      for (std::size_t f = 0; f < n; ++f) units.push_back({s, {f}});
    }
  }

  std::vector<FrameReport> slots(total);
  const std::size_t jobs = std::clamp<std::size_t>(a.jobs, 1, units.size());
  std::mutex mu;
  std::size_t next = 0;
  std::vector<std::string> worker_errors;
  auto worker = [&]() {
    std::unique_ptr<Detector> detector;
    std::string setup_error;
    try {
      detector = factory.make();
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    for (;;) {
      std::size_t idx;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= units.size()) return;
        idx = next++;
      }
      const WorkUnit& u = units[idx];
      if (!detector) {
        for (std::size_t fi : u.frames) {
          FrameReport& slot = slots[slot_offset[u.scene] + fi];
          slot.frame_id = manifest.scenes[u.scene].frames[fi].frame_id;
          slot.scene_id = manifest.scenes[u.scene].scene_id;
          slot.error = "detector setup failed: " + setup_error;
        }
        continue;
      }
      evaluate_unit(u, manifest, spec, options, refresh, *detector, slots, slot_offset);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  EvalReport report{factory.spec(), spec, options, refresh, std::move(slots)};
  write_file(a.out, eval_report_json(report));
  write_file(a.summary, summary_csv(report));

  std::size_t failed = 0;
  for (const FrameReport& f : report.frames) {
    if (f.error) {
      ++failed;
      err << "frame " << f.frame_id << ": " << *f.error << '\n';
      continue;
    }
    const MethodResult* adv = f.adversarial();
    out << f.frame_id << ": ";
    if (f.clean) out << "clean loss " << f.clean->loss << " (" << f.clean->match_count << " matches), ";
    out << adv->method << " loss " << adv->loss << " (" << adv->match_count << " matches), "
        << f.total_queries() << " queries\n";
  }
  out << report.frames.size() - failed << "/" << report.frames.size() << " frames evaluated\n";
  return failed == 0 ? 0 : 1;
}

struct PerturbArgs {
  std::string in;
  std::string out;
  std::string family;
  double hue = 0.0, sat = 1.0, brt = 0.0;
  double scale_h = 1.0, scale_v = 1.0, trans_h = 0.0, trans_v = 0.0;
  std::size_t kernel = 9;
  double angle = 0.0, direction = 0.0;
};

int cmd_perturb(const PerturbArgs& a, std::ostream& out) {
  const Family family = parse_family(a.family);
  const ImageBuffer img = read_image(a.in);
  ImageBuffer result;
  switch (family) {
    case Family::kGeometric:
      result = geometric_transform(img, a.scale_h, a.scale_v, a.trans_h, a.trans_v);
      break;
    case Family::kColour:
      result = colour_shift(img, a.hue, a.sat, a.brt);
      break;
    case Family::kMotionBlur:
      result = convolve(img, motion_blur_kernel(a.kernel, a.angle, a.direction));
      break;
  }
  std::filesystem::path p(a.out);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  write_image(p, result);
  out << "wrote " << a.out << " (" << result.width() << "x" << result.height() << ")\n";
  return 0;
}

struct SceneArgs {
  std::string out_dir;
  std::string scene_id = "scene-0";
  SceneLayout layout;
};

int cmd_synth_scene(const SceneArgs& a, std::ostream& out) {
  const SyntheticScene scene = make_synthetic_scene(a.layout, a.scene_id);
  const auto manifest = write_synthetic_scene(scene, a.scene_id, a.out_dir);
  out << "wrote " << manifest.string() << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic robustness evaluation with DIRECT / SimpleDIRECT", "semdirect"};
  app.require_subcommand(1);

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run the optimizer on a standard test function");
  b->add_option("--function", bench.function, "ackley | schwefel | sphere | l1cone")->required();
  b->add_option("--dim", bench.dim, "Dimension")->capture_default_str();
  b->add_option("--mode", bench.mode, "direct | simple")->capture_default_str();
  b->add_option("--epsilon", bench.epsilon, "Improvement tolerance")->capture_default_str();
  b->add_option("--depth", bench.depth, "Maximum partition depth H")->capture_default_str();
  b->add_option("--R", bench.r, "SimpleDIRECT node budget per iteration")->capture_default_str();
  b->add_option("--iters", bench.iters, "Iteration budget (0 = unlimited)");
  b->add_option("--queries", bench.queries, "Query budget (0 = unlimited)");
  b->add_option("--json", bench.json_out, "OptResult JSON path")->capture_default_str();
  b->add_option("--csv", bench.csv_out, "Trajectory CSV path")->capture_default_str();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Optimize perturbations against a detector");
  e->add_option("--manifest", ev.manifest, "Scene manifest JSON")->required();
  e->add_option("--detector", ev.detector, "Detector spec (default: $SEMDIRECT_DETECTOR)");
  e->add_option("--perturbation", ev.perturbation, "geometric | colour | motion_blur")->capture_default_str();
  e->add_option("--gamma", ev.gamma, "Severity for geometric/colour")->capture_default_str();
  e->add_option("--kernel", ev.kernel, "Motion blur kernel size")->capture_default_str();
  e->add_option("--tau", ev.tau, "Matching threshold in meters")->capture_default_str();
  e->add_option("--mode", ev.mode, "direct | simple")->capture_default_str();
  e->add_option("--epsilon", ev.epsilon)->capture_default_str();
  e->add_option("--depth", ev.depth)->capture_default_str();
  e->add_option("--R", ev.r)->capture_default_str();
  e->add_option("--iters", ev.iters, "Iteration budget (0 = unlimited)");
  e->add_option("--queries", ev.queries, "Optimizer query budget per frame")->capture_default_str();
  e->add_option("--baseline", ev.baselines, "random and/or natural (repeatable)");
  e->add_option("--random-queries", ev.random_queries)->capture_default_str();
  e->add_option("--refresh", ev.refresh, "Carryover refresh frames, e.g. 1,21");
  e->add_option("--objective", ev.objective, "distance | distance_cls")->capture_default_str();
  e->add_option("--out", ev.out, "EvalReport JSON path")->capture_default_str();
  e->add_option("--summary", ev.summary, "Summary CSV path")->capture_default_str();
  e->add_option("--seed", ev.seed)->capture_default_str();
  e->add_option("--jobs", ev.jobs, "Frames evaluated in parallel")->capture_default_str();
  e->add_flag("--timings", ev.timings, "Include wall-clock seconds in the JSON report");

  PerturbArgs pa;
  auto* p = app.add_subcommand("perturb", "Apply one perturbation to an image");
  p->add_option("--in", pa.in)->required();
  p->add_option("--out", pa.out)->required();
  p->add_option("--family", pa.family, "geometric | colour | motion_blur")->required();
  p->add_option("--hue", pa.hue, "Hue shift in radians");
  p->add_option("--sat", pa.sat, "Saturation factor");
  p->add_option("--brt", pa.brt, "Brightness shift");
  p->add_option("--scale-h", pa.scale_h);
  p->add_option("--scale-v", pa.scale_v);
  p->add_option("--trans-h", pa.trans_h, "Horizontal translation, normalized units");
  p->add_option("--trans-v", pa.trans_v, "Vertical translation, normalized units");
  p->add_option("--kernel", pa.kernel)->capture_default_str();
  p->add_option("--angle", pa.angle, "Blur angle in radians");
  p->add_option("--direction", pa.direction, "Blur direction in [-1, 1]");

  SceneArgs sa;
  auto* s = app.add_subcommand("synth-scene", "Write a procedural scene and its manifest");
  s->add_option("--out", sa.out_dir)->required();
  s->add_option("--scene-id", sa.scene_id)->capture_default_str();
  s->add_option("--frames", sa.layout.frames)->capture_default_str();
  s->add_option("--cameras", sa.layout.cameras)->capture_default_str();
  s->add_option("--boxes", sa.layout.boxes)->capture_default_str();
  s->add_option("--height", sa.layout.height)->capture_default_str();
  s->add_option("--width", sa.layout.width)->capture_default_str();
  s->add_option("--seed", sa.layout.seed)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err);
  }

  try {
    if (*b) return cmd_bench(bench, out);
    if (*e) return cmd_evaluate(ev, out, err);
    if (*p) return cmd_perturb(pa, out);
    if (*s) return cmd_synth_scene(sa, out);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace semdirect::cli
