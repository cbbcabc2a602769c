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

#include "semdirect/image_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <stdexcept>

namespace semdirect {

namespace {

std::uint8_t to_byte(float v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

// OpenCV stores BGR.
cv::Mat to_mat(const ImageBuffer& img) {
  cv::Mat m(static_cast<int>(img.height()), static_cast<int>(img.width()), CV_8UC3);
  for (std::size_t r = 0; r < img.height(); ++r) {
    auto* row = m.ptr<cv::Vec3b>(static_cast<int>(r));
    for (std::size_t c = 0; c < img.width(); ++c) {
      row[c] = cv::Vec3b(to_byte(img.at(r, c, 2)), to_byte(img.at(r, c, 1)), to_byte(img.at(r, c, 0)));
    }
  }
  return m;
}

ImageBuffer from_mat(const cv::Mat& m) {
  if (m.empty()) throw std::runtime_error("image decode failed");
  cv::Mat bgr;
  if (m.channels() == 1) {
    cv::cvtColor(m, bgr, cv::COLOR_GRAY2BGR);
  } else if (m.channels() == 4) {
    cv::cvtColor(m, bgr, cv::COLOR_BGRA2BGR);
  } else {
    bgr = m;
  }
  if (bgr.depth() != CV_8U) bgr.convertTo(bgr, CV_8U);
  ImageBuffer img(static_cast<std::size_t>(bgr.rows), static_cast<std::size_t>(bgr.cols));
  for (int r = 0; r < bgr.rows; ++r) {
    const auto* row = bgr.ptr<cv::Vec3b>(r);
    for (int c = 0; c < bgr.cols; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        img.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c),
               static_cast<std::size_t>(2 - ch)) = static_cast<float>(row[c][ch]) / 255.0f;
      }
    }
  }
  return img;
}

}  // namespace

ImageBuffer read_image(const std::filesystem::path& path) {
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) throw std::runtime_error("cannot read image '" + path.string() + "'");
  return from_mat(m);
}

void write_image(const std::filesystem::path& path, const ImageBuffer& img) {
  if (!cv::imwrite(path.string(), to_mat(img))) {
    throw std::runtime_error("cannot write image '" + path.string() + "'");
  }
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", to_mat(img), out)) throw std::runtime_error("PNG encode failed");
  return out;
}

ImageBuffer decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw std::runtime_error("image decode failed: empty buffer");
  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                    const_cast<std::uint8_t*>(bytes.data()));
  return from_mat(cv::imdecode(raw, cv::IMREAD_UNCHANGED));
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw std::runtime_error("base64: length is not a multiple of 4");
  std::vector<std::uint8_t> out(3 * text.size() / 4);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw std::runtime_error("base64: invalid input");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

ImageBuffer quantize8(const ImageBuffer& img) {
  ImageBuffer out = img;
  for (float& v : out.data()) v = static_cast<float>(to_byte(v)) / 255.0f;
  return out;
}

}  // namespace semdirect
