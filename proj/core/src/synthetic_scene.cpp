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

#include "semdirect/synthetic_scene.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "semdirect/image_io.hpp"

namespace semdirect {

namespace {

double draw(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

ImageBuffer procedural_image(std::size_t height, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 1);
  ImageBuffer img(height, width);
  const double stripe_angle = draw(rng, 0.0, std::numbers::pi);
  const double stripe_freq = draw(rng, 0.15, 0.45);
  const double base[3] = {draw(rng, 0.2, 0.8), draw(rng, 0.2, 0.8), draw(rng, 0.2, 0.8)};
  const double slope[3] = {draw(rng, -0.3, 0.3), draw(rng, -0.3, 0.3), draw(rng, -0.3, 0.3)};

  struct Disc {
    double cx, cy, r;
    double rgb[3];
  };
  std::vector<Disc> discs(4);
  for (Disc& d : discs) {
    d.cx = draw(rng, 0.0, static_cast<double>(width));
    d.cy = draw(rng, 0.0, static_cast<double>(height));
    d.r = draw(rng, 0.08, 0.2) * static_cast<double>(std::min(height, width));
    for (double& c : d.rgb) c = draw(rng, 0.0, 1.0);
  }

  const double ca = std::cos(stripe_angle), sa = std::sin(stripe_angle);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double x = static_cast<double>(c), y = static_cast<double>(r);
      const double u = x / static_cast<double>(width) - 0.5;
      const double stripe = 0.25 * std::sin(stripe_freq * (ca * x + sa * y));
      for (std::size_t ch = 0; ch < 3; ++ch) {
        double v = base[ch] + slope[ch] * u + stripe * (ch == 1 ? -1.0 : 1.0);
        for (const Disc& d : discs) {
          const double dist = std::hypot(x - d.cx, y - d.cy);
          const double w = std::clamp(d.r - dist, 0.0, 1.0);
          v = (1.0 - w) * v + w * d.rgb[ch];
        }
        img.at(r, c, ch) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return img;
}

SyntheticScene make_synthetic_scene(const SceneLayout& layout, const std::string& scene_id) {
  SyntheticScene scene;
  std::mt19937_64 rng(layout.seed ^ 0xA5A5A5A5ull);
  for (std::size_t f = 0; f < layout.frames; ++f) {
    Frame frame;
    frame.frame_id = scene_id + "-f" + std::to_string(f);
    for (std::size_t cam = 0; cam < layout.cameras; ++cam) {
      frame.images.push_back({"CAM_" + std::to_string(cam),
                              procedural_image(layout.height, layout.width,
                                               layout.seed * 1000 + f * 10 + cam)});
    }
    Annotation ann{frame.frame_id, {}};
    for (std::size_t v = 0; v < layout.boxes; ++v) {
      // Grid with 3.5 m spacing plus jitter; same-class neighbours stay close
      // enough that displaced predictions can drift towards each other.
      const double gx = 3.5 * static_cast<double>(v % 3) + draw(rng, -0.5, 0.5);
      const double gy = 3.5 * static_cast<double>(v / 3) + draw(rng, -0.5, 0.5);
      ann.gt.push_back({v % 2 == 0 ? "car" : "pedestrian", {gx, gy}});
    }
    scene.frames.push_back(std::move(frame));
    scene.annotations.push_back(std::move(ann));
  }
  return scene;
}

std::filesystem::path write_synthetic_scene(const SyntheticScene& scene, const std::string& scene_id,
                                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "images");
  Manifest m;
  Scene s{scene_id, {}};
  for (std::size_t f = 0; f < scene.frames.size(); ++f) {
    const Frame& frame = scene.frames[f];
    ManifestFrame mf{frame.frame_id, {}, scene.annotations[f].gt};
    for (const CameraImage& ci : frame.images) {
      const std::filesystem::path p = dir / "images" / (frame.frame_id + "_" + ci.camera + ".png");
      write_image(p, ci.image);
      mf.images.push_back({ci.camera, p});
    }
    s.frames.push_back(std::move(mf));
  }
  m.scenes.push_back(std::move(s));
  const std::filesystem::path manifest = dir / "manifest.json";
  std::ofstream out(manifest);
  out << manifest_to_json(m, dir) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest '" + manifest.string() + "'");
  return manifest;
}

}  // namespace semdirect
