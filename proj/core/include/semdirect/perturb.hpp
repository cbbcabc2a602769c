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

#ifndef SEMDIRECT_PERTURB_HPP_
#define SEMDIRECT_PERTURB_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace semdirect {

// Interleaved RGB image with intensities in [0,1].
class ImageBuffer {
 public:
  static constexpr std::size_t kChannels = 3;

  ImageBuffer() = default;
  ImageBuffer(std::size_t height, std::size_t width, float fill = 0.0f);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  bool empty() const { return data_.empty(); }

  float& at(std::size_t row, std::size_t col, std::size_t ch) {
    return data_[(row * width_ + col) * kChannels + ch];
  }
  float at(std::size_t row, std::size_t col, std::size_t ch) const {
    return data_[(row * width_ + col) * kChannels + ch];
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> data_;
};

// Largest absolute per-channel difference; images must share dimensions.
double max_abs_difference(const ImageBuffer& a, const ImageBuffer& b);

// --- geometric -------------------------------------------------------------

// Scales and translates about the image center. Coordinates are normalized
// to [-1, 1] across each axis (pixel centers at (2c+1)/W - 1) and every output
// location samples the source at scale * target + translation, bilinearly,
// with zero outside the image.
ImageBuffer geometric_transform(const ImageBuffer& img, double scale_h, double scale_v,
                                double trans_h, double trans_v);

// --- colour ----------------------------------------------------------------

struct Rgb {
  double r, g, b;
};

// Hue in radians [0, 2*pi); saturation and brightness in [0, 1].
struct Hsb {
  double hue, sat, brt;
};

Hsb rgb_to_hsb(Rgb c);
Rgb hsb_to_rgb(Hsb c);

struct HsbPlanes {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Hsb> pixels;
};

HsbPlanes rgb_to_hsb(const ImageBuffer& img);
ImageBuffer hsb_to_rgb(const HsbPlanes& planes);

// hue + dh mod 2*pi, clamp(sat * ks), clamp(brt + db).
Hsb shift_hsb(Hsb c, double hue_shift, double sat_factor, double brt_shift);

ImageBuffer colour_shift(const ImageBuffer& img, double hue_shift, double sat_factor,
                         double brt_shift);

// --- motion blur -----------------------------------------------------------

// Square correlation kernel, row-major.
struct Kernel {
  std::size_t size = 1;
  std::vector<double> weights{1.0};

  double at(std::size_t row, std::size_t col) const { return weights[row * size + col]; }
  double sum() const;
};

// A horizontal line with weights ramping linearly from 1-d to d, where
// d = (direction + 1) / 2, rotated by `angle` radians (x right, y down) with
// bilinear resampling and normalized to unit sum. Throws on even or < 3 size.
Kernel motion_blur_kernel(std::size_t size, double angle, double direction);

// Per-channel 2-D correlation with replicate padding.
ImageBuffer convolve(const ImageBuffer& img, const Kernel& kernel);

// --- parameterized families -------------------------------------------------

enum class Family { kGeometric, kColour, kMotionBlur };

std::string to_string(Family f);
Family parse_family(const std::string& name);

// A perturbation family with its per-image parameter box. Each parameter is
// centre +/- half_range; the cube midpoint decodes to the centre.
struct PerturbationSpec {
  Family family = Family::kColour;
  double gamma = 0.0;
  std::size_t kernel_size = 0;  // motion blur only
  std::size_t images = 1;
  std::vector<double> centre;  // per image, length params_per_image()
  std::vector<double> half_range;

  static PerturbationSpec geometric(double gamma, std::size_t images);
  static PerturbationSpec colour(double gamma, std::size_t images);
  static PerturbationSpec motion_blur(std::size_t kernel_size, std::size_t images);

  std::size_t params_per_image() const { return centre.size(); }
  std::size_t dimension() const { return params_per_image() * images; }
  std::vector<double> lower() const;
  std::vector<double> upper() const;
  std::vector<std::string> parameter_names() const;

  // Per image, the decoded parameters for a point of [0,1]^dimension().
  std::vector<std::vector<double>> decode(std::span<const double> unit) const;
};

// Applies one image's decoded parameters.
ImageBuffer apply_family(const ImageBuffer& img, const PerturbationSpec& spec,
                         std::span<const double> params);

std::vector<ImageBuffer> decode_and_apply(std::span<const ImageBuffer> images,
                                          const PerturbationSpec& spec,
                                          std::span<const double> unit);

}  // namespace semdirect

#endif  // SEMDIRECT_PERTURB_HPP_
