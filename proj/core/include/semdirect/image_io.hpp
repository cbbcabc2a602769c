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

#ifndef SEMDIRECT_IMAGE_IO_HPP_
#define SEMDIRECT_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "semdirect/perturb.hpp"

namespace semdirect {

// PNG/JPEG codecs. 8-bit samples map to [0,1] as v / 255; encoding rounds to
// the nearest 8-bit level.
ImageBuffer read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const ImageBuffer& img);

std::vector<std::uint8_t> encode_png(const ImageBuffer& img);
ImageBuffer decode_image(std::span<const std::uint8_t> bytes);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

// Rounds every intensity to the nearest 8-bit level.
ImageBuffer quantize8(const ImageBuffer& img);

}  // namespace semdirect

#endif  // SEMDIRECT_IMAGE_IO_HPP_
