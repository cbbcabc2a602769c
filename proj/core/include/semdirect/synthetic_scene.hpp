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

#ifndef SEMDIRECT_SYNTHETIC_SCENE_HPP_
#define SEMDIRECT_SYNTHETIC_SCENE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "semdirect/detector.hpp"
#include "semdirect/problem.hpp"

namespace semdirect {

// Deterministic procedural test image: colour gradients, oriented stripes and
// a few saturated discs, so every perturbation family changes it visibly.
ImageBuffer procedural_image(std::size_t height, std::size_t width, std::uint64_t seed);

struct SceneLayout {
  std::size_t frames = 1;
  std::size_t cameras = 1;
  std::size_t boxes = 6;
  std::size_t height = 48;
  std::size_t width = 64;
  std::uint64_t seed = 0;
};

struct SyntheticScene {
  std::vector<Frame> frames;
  std::vector<Annotation> annotations;
};

// Boxes of two classes laid out a few meters apart on the ground plane.
SyntheticScene make_synthetic_scene(const SceneLayout& layout, const std::string& scene_id = "scene-0");

// Writes PNGs plus manifest.json under `dir` and returns the manifest path.
std::filesystem::path write_synthetic_scene(const SyntheticScene& scene, const std::string& scene_id,
                                            const std::filesystem::path& dir);

}  // namespace semdirect

#endif  // SEMDIRECT_SYNTHETIC_SCENE_HPP_
