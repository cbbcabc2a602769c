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

#include "semdirect/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semdirect {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

}  // namespace

ImageBuffer::ImageBuffer(std::size_t height, std::size_t width, float fill)
    : height_(height), width_(width), data_(height * width * kChannels, fill) {
  if (height == 0 || width == 0) throw std::invalid_argument("ImageBuffer: empty dimensions");
}

double max_abs_difference(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw std::invalid_argument("max_abs_difference: dimension mismatch");
  }
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    m = std::max(m, std::abs(static_cast<double>(da[i]) - db[i]));
  }
  return m;
}

ImageBuffer geometric_transform(const ImageBuffer& img, double scale_h, double scale_v,
                                double trans_h, double trans_v) {
  if (!(scale_h > 0.0) || !(scale_v > 0.0)) {
    throw std::invalid_argument("geometric_transform: scales must be positive");
  }
  const auto h = static_cast<double>(img.height());
  const auto w = static_cast<double>(img.width());
  const auto rows = static_cast<std::ptrdiff_t>(img.height());
  const auto cols = static_cast<std::ptrdiff_t>(img.width());
  ImageBuffer out(img.height(), img.width());

  // Normalized target x_t = (2c+1)/W - 1 maps to source pixel
  // ((s*x_t + t + 1) * W - 1) / 2, rewritten so the identity is exact.
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const double sy = scale_v * (static_cast<double>(r) + 0.5 - h / 2.0) + trans_v * h / 2.0 +
                      (h - 1.0) / 2.0;
    const double y0 = std::floor(sy);
    const double fy = sy - y0;
    const auto iy = static_cast<std::ptrdiff_t>(y0);
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      const double sx = scale_h * (static_cast<double>(c) + 0.5 - w / 2.0) + trans_h * w / 2.0 +
                        (w - 1.0) / 2.0;
      const double x0 = std::floor(sx);
      const double fx = sx - x0;
      const auto ix = static_cast<std::ptrdiff_t>(x0);
      for (std::size_t ch = 0; ch < ImageBuffer::kChannels; ++ch) {
        auto sample = [&](std::ptrdiff_t yy, std::ptrdiff_t xx) -> double {
          if (yy < 0 || yy >= rows || xx < 0 || xx >= cols) return 0.0;
          return img.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx), ch);
        };
        const double v = (1.0 - fy) * ((1.0 - fx) * sample(iy, ix) + fx * sample(iy, ix + 1)) +
                         fy * ((1.0 - fx) * sample(iy + 1, ix) + fx * sample(iy + 1, ix + 1));
        out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c), ch) = clamp01(v);
      }
    }
  }
  return out;
}

Hsb rgb_to_hsb(Rgb c) {
  const double mx = std::max({c.r, c.g, c.b});
  const double mn = std::min({c.r, c.g, c.b});
  const double chroma = mx - mn;
  Hsb out{0.0, mx > 0.0 ? chroma / mx : 0.0, mx};
  if (chroma > 0.0) {
    double sector;
    if (mx == c.r) {
      sector = std::fmod((c.g - c.b) / chroma, 6.0);
      if (sector < 0.0) sector += 6.0;
    } else if (mx == c.g) {
      sector = (c.b - c.r) / chroma + 2.0;
    } else {
      sector = (c.r - c.g) / chroma + 4.0;
    }
    out.hue = sector * std::numbers::pi / 3.0;
    if (out.hue >= kTwoPi) out.hue = 0.0;
  }
  return out;
}

Rgb hsb_to_rgb(Hsb c) {
  const double v = c.brt;
  const double s = c.sat;
  double sector = c.hue / (std::numbers::pi / 3.0);
  sector = std::fmod(sector, 6.0);
  if (sector < 0.0) sector += 6.0;
  const double i = std::floor(sector);
  const double f = sector - i;
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  switch (static_cast<int>(i)) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

HsbPlanes rgb_to_hsb(const ImageBuffer& img) {
  HsbPlanes planes{img.height(), img.width(), {}};
  planes.pixels.reserve(img.height() * img.width());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      planes.pixels.push_back(rgb_to_hsb(Rgb{img.at(r, c, 0), img.at(r, c, 1), img.at(r, c, 2)}));
    }
  }
  return planes;
}

ImageBuffer hsb_to_rgb(const HsbPlanes& planes) {
  ImageBuffer out(planes.height, planes.width);
  for (std::size_t r = 0; r < planes.height; ++r) {
    for (std::size_t c = 0; c < planes.width; ++c) {
      const Rgb rgb = hsb_to_rgb(planes.pixels[r * planes.width + c]);
      out.at(r, c, 0) = clamp01(rgb.r);
      out.at(r, c, 1) = clamp01(rgb.g);
      out.at(r, c, 2) = clamp01(rgb.b);
    }
  }
  return out;
}

Hsb shift_hsb(Hsb c, double hue_shift, double sat_factor, double brt_shift) {
  double hue = std::fmod(c.hue + hue_shift, kTwoPi);
  if (hue < 0.0) hue += kTwoPi;
  if (hue >= kTwoPi) hue = 0.0;
  return {hue, std::clamp(sat_factor * c.sat, 0.0, 1.0), std::clamp(c.brt + brt_shift, 0.0, 1.0)};
}

ImageBuffer colour_shift(const ImageBuffer& img, double hue_shift, double sat_factor,
                         double brt_shift) {
  HsbPlanes planes = rgb_to_hsb(img);
  for (Hsb& p : planes.pixels) p = shift_hsb(p, hue_shift, sat_factor, brt_shift);
  return hsb_to_rgb(planes);
}

double Kernel::sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

Kernel motion_blur_kernel(std::size_t size, double angle, double direction) {
  if (size < 3 || size % 2 == 0) {
    throw std::invalid_argument("motion_blur_kernel: size must be odd and >= 3");
  }
  const double d = (std::clamp(direction, -1.0, 1.0) + 1.0) / 2.0;
  const auto k = static_cast<std::ptrdiff_t>(size);
  const std::ptrdiff_t mid = k / 2;

  // The unrotated kernel is non-zero only on its middle row.
  std::vector<double> line(size);
  for (std::size_t j = 0; j < size; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(size - 1);
    line[j] = (1.0 - d) + t * (d - (1.0 - d));
  }
  auto line_at = [&](std::ptrdiff_t row, std::ptrdiff_t col) -> double {
    if (row != mid || col < 0 || col >= k) return 0.0;
    return line[static_cast<std::size_t>(col)];
  };

  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  Kernel out;
  out.size = size;
  out.weights.assign(size * size, 0.0);
  for (std::ptrdiff_t r = 0; r < k; ++r) {
    for (std::ptrdiff_t c = 0; c < k; ++c) {
      const double dx = static_cast<double>(c - mid);
      const double dy = static_cast<double>(r - mid);
      const double sx = cs * dx + sn * dy + static_cast<double>(mid);
      const double sy = -sn * dx + cs * dy + static_cast<double>(mid);
      const double x0 = std::floor(sx);
      const double y0 = std::floor(sy);
      const double fx = sx - x0;
      const double fy = sy - y0;
      const auto ix = static_cast<std::ptrdiff_t>(x0);
      const auto iy = static_cast<std::ptrdiff_t>(y0);
      const double v = (1.0 - fy) * ((1.0 - fx) * line_at(iy, ix) + fx * line_at(iy, ix + 1)) +
                       fy * ((1.0 - fx) * line_at(iy + 1, ix) + fx * line_at(iy + 1, ix + 1));
      out.weights[static_cast<std::size_t>(r * k + c)] = std::max(v, 0.0);
    }
  }
  const double total = out.sum();
  for (double& w : out.weights) w /= total;
  return out;
}

ImageBuffer convolve(const ImageBuffer& img, const Kernel& kernel) {
  if (kernel.size == 0 || kernel.weights.size() != kernel.size * kernel.size) {
    throw std::invalid_argument("convolve: malformed kernel");
  }
  const auto rows = static_cast<std::ptrdiff_t>(img.height());
  const auto cols = static_cast<std::ptrdiff_t>(img.width());
  const auto k = static_cast<std::ptrdiff_t>(kernel.size);
  const std::ptrdiff_t mid = k / 2;
  ImageBuffer out(img.height(), img.width());
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      double acc[ImageBuffer::kChannels] = {0.0, 0.0, 0.0};
      for (std::ptrdiff_t i = 0; i < k; ++i) {
        const auto rr = static_cast<std::size_t>(std::clamp(r + i - mid, std::ptrdiff_t{0}, rows - 1));
        for (std::ptrdiff_t j = 0; j < k; ++j) {
          const double wgt = kernel.weights[static_cast<std::size_t>(i * k + j)];
          if (wgt == 0.0) continue;
          const auto cc =
              static_cast<std::size_t>(std::clamp(c + j - mid, std::ptrdiff_t{0}, cols - 1));
          for (std::size_t ch = 0; ch < ImageBuffer::kChannels; ++ch) {
            acc[ch] += wgt * img.at(rr, cc, ch);
          }
        }
      }
      for (std::size_t ch = 0; ch < ImageBuffer::kChannels; ++ch) {
        out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c), ch) = clamp01(acc[ch]);
      }
    }
  }
  return out;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::kGeometric: return "geometric";
    case Family::kColour: return "colour";
    case Family::kMotionBlur: return "motion_blur";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "geometric") return Family::kGeometric;
  if (name == "colour" || name == "color") return Family::kColour;
  if (name == "motion_blur" || name == "blur") return Family::kMotionBlur;
  throw std::invalid_argument("unknown perturbation family '" + name +
                              "' (expected geometric|colour|motion_blur)");
}

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("perturbation severity gamma must be finite and > 0");
  }
}

void check_images(std::size_t images) {
  if (images == 0) throw std::invalid_argument("perturbation needs at least one image");
}

}  // namespace

PerturbationSpec PerturbationSpec::geometric(double gamma, std::size_t images) {
  check_gamma(gamma);
  check_images(images);
  if (gamma >= 1.0) throw std::invalid_argument("geometric gamma must be < 1 to keep scales positive");
  return {Family::kGeometric, gamma, 0, images, {1.0, 1.0, 0.0, 0.0}, {gamma, gamma, gamma, gamma}};
}

PerturbationSpec PerturbationSpec::colour(double gamma, std::size_t images) {
  check_gamma(gamma);
  check_images(images);
  return {Family::kColour, gamma, 0, images, {0.0, 1.0, 0.0},
          {std::numbers::pi * gamma, gamma, gamma}};
}

PerturbationSpec PerturbationSpec::motion_blur(std::size_t kernel_size, std::size_t images) {
  check_images(images);
  if (kernel_size < 3 || kernel_size % 2 == 0) {
    throw std::invalid_argument("motion blur kernel size must be odd and >= 3");
  }
  return {Family::kMotionBlur, 0.0, kernel_size, images, {0.0, 0.0}, {std::numbers::pi, 1.0}};
}

std::vector<double> PerturbationSpec::lower() const {
  std::vector<double> out(centre.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = centre[i] - half_range[i];
  return out;
}

std::vector<double> PerturbationSpec::upper() const {
  std::vector<double> out(centre.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = centre[i] + half_range[i];
  return out;
}

std::vector<std::string> PerturbationSpec::parameter_names() const {
  switch (family) {
    case Family::kGeometric: return {"scale_h", "scale_v", "trans_h", "trans_v"};
    case Family::kColour: return {"hue", "sat", "brt"};
    case Family::kMotionBlur: return {"angle", "direction"};
  }
  return {};
}

std::vector<std::vector<double>> PerturbationSpec::decode(std::span<const double> unit) const {
  if (unit.size() != dimension()) {
    throw std::invalid_argument("decode: expected " + std::to_string(dimension()) +
                                " parameters, got " + std::to_string(unit.size()));
  }
  const std::size_t s = params_per_image();
  std::vector<std::vector<double>> out(images, std::vector<double>(s));
  for (std::size_t n = 0; n < images; ++n) {
    for (std::size_t i = 0; i < s; ++i) {
      const double u = std::clamp(unit[n * s + i], 0.0, 1.0);
      out[n][i] = centre[i] + (2.0 * u - 1.0) * half_range[i];
    }
  }
  return out;
}

ImageBuffer apply_family(const ImageBuffer& img, const PerturbationSpec& spec,
                         std::span<const double> p) {
  if (p.size() != spec.params_per_image()) {
    throw std::invalid_argument("apply_family: wrong parameter count");
  }
  switch (spec.family) {
    case Family::kGeometric: return geometric_transform(img, p[0], p[1], p[2], p[3]);
    case Family::kColour: return colour_shift(img, p[0], p[1], p[2]);
    case Family::kMotionBlur: return convolve(img, motion_blur_kernel(spec.kernel_size, p[0], p[1]));
  }
  return img;
}

std::vector<ImageBuffer> decode_and_apply(std::span<const ImageBuffer> images,
                                          const PerturbationSpec& spec,
                                          std::span<const double> unit) {
  if (images.size() != spec.images) {
    throw std::invalid_argument("decode_and_apply: frame has " + std::to_string(images.size()) +
                                " images, spec expects " + std::to_string(spec.images));
  }
  const auto params = spec.decode(unit);
  std::vector<ImageBuffer> out;
  out.reserve(images.size());
  for (std::size_t n = 0; n < images.size(); ++n) out.push_back(apply_family(images[n], spec, params[n]));
  return out;
}

}  // namespace semdirect
