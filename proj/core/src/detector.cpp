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

#include "semdirect/detector.hpp"

#include <array>
#include <boost/process.hpp>
#include <chrono>
#include <cmath>
#include <csignal>
#include <fstream>
#include <httplib.h>
#include <json.hpp>
#include <numbers>
#include <random>
#include <set>

#include "semdirect/image_io.hpp"

namespace semdirect {

namespace bp = boost::process;
using nlohmann::json;

void Frame::validate() const {
  if (images.empty()) throw std::invalid_argument("frame '" + frame_id + "' has no images");
  std::set<std::string> seen;
  for (const CameraImage& ci : images) {
    if (!seen.insert(ci.camera).second) {
      throw std::invalid_argument("frame '" + frame_id + "' repeats camera '" + ci.camera + "'");
    }
  }
}

std::vector<ImageBuffer> Frame::buffers() const {
  std::vector<ImageBuffer> out;
  out.reserve(images.size());
  for (const CameraImage& ci : images) out.push_back(ci.image);
  return out;
}

Frame Frame::with_buffers(std::vector<ImageBuffer> buffers) const {
  if (buffers.size() != images.size()) {
    throw std::invalid_argument("with_buffers: image count mismatch");
  }
  Frame out{frame_id, {}};
  for (std::size_t i = 0; i < images.size(); ++i) {
    out.images.push_back({images[i].camera, std::move(buffers[i])});
  }
  return out;
}

std::string make_request(std::uint64_t id, const Frame& frame) {
  json req;
  req["id"] = id;
  json imgs = json::array();
  for (const CameraImage& ci : frame.images) {
    imgs.push_back({{"camera", ci.camera}, {"png_base64", base64_encode(encode_png(ci.image))}});
  }
  req["images"] = std::move(imgs);
  return req.dump();
}

namespace {

std::string class_label(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ProtocolError("box class must be a string or an integer");
}

PredBox parse_box(const json& b) {
  if (!b.is_object() || !b.contains("class") || !b.contains("cx") || !b.contains("cy")) {
    throw ProtocolError("box must be an object with class, cx and cy");
  }
  PredBox p;
  p.class_id = class_label(b.at("class"));
  p.center = {b.at("cx").get<double>(), b.at("cy").get<double>()};
  p.score = b.value("score", 1.0);
  if (!std::isfinite(p.center.x) || !std::isfinite(p.center.y)) {
    throw ProtocolError("box center must be finite");
  }
  if (!(p.score >= 0.0 && p.score <= 1.0)) throw ProtocolError("box score must lie in [0, 1]");
  return p;
}

}  // namespace

std::vector<PredBox> parse_response(const std::string& line, std::uint64_t expected_id) {
  json body;
  try {
    body = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed detector response: ") + e.what());
  }
  if (!body.is_object() || !body.contains("id")) {
    throw ProtocolError("detector response lacks an id");
  }
  const json& id = body.at("id");
  if (!id.is_number_unsigned() || id.get<std::uint64_t>() != expected_id) {
    throw ProtocolError("detector response id " + id.dump() + " does not echo request id " +
                        std::to_string(expected_id));
  }
  if (body.contains("error")) {
    const json& err = body.at("error");
    throw DetectorError("detector error: " + (err.is_string() ? err.get<std::string>() : err.dump()));
  }
  if (!body.contains("boxes") || !body.at("boxes").is_array()) {
    throw ProtocolError("detector response lacks a boxes array");
  }
  std::vector<PredBox> out;
  try {
    for (const json& b : body.at("boxes")) out.push_back(parse_box(b));
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed box: ") + e.what());
  }
  return out;
}

struct SubprocessDetector::Process {
  bp::pipe to_child;  // unbuffered
  bp::ipstream from_child;
  bp::child child;

  explicit Process(const std::string& command)
      : child("/bin/sh", "-c", command, bp::std_in < to_child, bp::std_out > from_child) {}
};

SubprocessDetector::SubprocessDetector(const std::string& command) {
  // A dead child must surface as a read failure, not kill us on write.
  std::signal(SIGPIPE, SIG_IGN);
  try {
    proc_ = std::make_unique<Process>(command);
  } catch (const std::exception& e) {
    throw DetectorError("cannot launch detector '" + command + "': " + e.what());
  }
}

SubprocessDetector::~SubprocessDetector() {
  if (!proc_) return;
  try {
    proc_->to_child.close();
    if (!proc_->child.wait_for(std::chrono::seconds(5))) proc_->child.terminate();
  } catch (...) {
  }
}

std::vector<PredBox> SubprocessDetector::detect(const Frame& frame) {
  const std::uint64_t id = next_id_++;
  const std::string request = make_request(id, frame) + '\n';
  try {
    if (!proc_->to_child.is_open()) throw DetectorError("detector process is not accepting requests");
    std::size_t sent = 0;
    while (sent < request.size()) {
      const int n = proc_->to_child.write(request.data() + sent, static_cast<int>(request.size() - sent));
      if (n <= 0) throw DetectorError("detector process is not accepting requests");
      sent += static_cast<std::size_t>(n);
    }
  } catch (const bp::process_error& e) {
    proc_->to_child.close();
    throw DetectorError(std::string("detector process is not accepting requests: ") + e.what());
  }
  std::string line;
  if (!std::getline(proc_->from_child, line)) {
    throw DetectorError("detector process closed its output");
  }
  return parse_response(line, id);
}

HttpDetector::HttpDetector(std::string base_url) {
  const auto scheme = base_url.find("://");
  const auto path_start = base_url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  host_ = base_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "" : base_url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  path_ += "/detect";
}

std::vector<PredBox> HttpDetector::detect(const Frame& frame) {
  const std::uint64_t id = next_id_++;
  httplib::Client cli(host_);
  cli.set_read_timeout(std::chrono::seconds(600));
  auto res = cli.Post(path_, make_request(id, frame), "application/json");
  if (!res) {
    throw DetectorError("HTTP detector at " + host_ + " unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    // Error bodies still follow the protocol when the server produced them.
    parse_response(res->body, id);
    throw DetectorError("HTTP detector returned status " + std::to_string(res->status));
  }
  return parse_response(res->body, id);
}

ReplayDetector::ReplayDetector(std::map<std::string, std::vector<PredBox>> boxes)
    : boxes_(std::move(boxes)) {}

ReplayDetector ReplayDetector::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DetectorError("cannot open replay file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
    ReplayDetector out;
    for (const json& f : doc.at("frames")) {
      std::vector<PredBox> boxes;
      for (const json& b : f.at("boxes")) boxes.push_back(parse_box(b));
      out.set(f.at("frame_id").get<std::string>(), std::move(boxes));
    }
    return out;
  } catch (const json::exception& e) {
    throw DetectorError("malformed replay file '" + path + "': " + e.what());
  }
}

ReplayDetector ReplayDetector::echo(const std::vector<Annotation>& annotations) {
  ReplayDetector out;
  for (const Annotation& a : annotations) {
    std::vector<PredBox> boxes;
    for (const GtBox& g : a.gt) boxes.push_back({g.class_id, g.center, 1.0});
    out.set(a.frame_id, std::move(boxes));
  }
  return out;
}

void ReplayDetector::set(const std::string& frame_id, std::vector<PredBox> boxes) {
  boxes_[frame_id] = std::move(boxes);
}

std::vector<PredBox> ReplayDetector::detect(const Frame& frame) {
  auto it = boxes_.find(frame.frame_id);
  if (it == boxes_.end()) throw DetectorError("replay has no boxes for frame '" + frame.frame_id + "'");
  return it->second;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform_draw(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_draw(rng);
}

}  // namespace

SyntheticDetector::SyntheticDetector(SyntheticProfile profile, double tau)
    : profile_(profile), tau_(tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("synthetic detector: tau must be > 0");
  if (!(profile.min_gain > 0.0) || profile.max_gain < profile.min_gain) {
    throw std::invalid_argument("synthetic detector: need 0 < min_gain <= max_gain");
  }
}

void SyntheticDetector::add_frame(const Frame& clean, const Annotation& annotation) {
  clean.validate();
  Entry e{clean, annotation, {}};
  const std::uint64_t fh = fnv1a(clean.frame_id);
  for (std::size_t v = 0; v < annotation.gt.size(); ++v) {
    std::seed_seq seq{static_cast<std::uint32_t>(profile_.seed), static_cast<std::uint32_t>(profile_.seed >> 32),
                      static_cast<std::uint32_t>(fh), static_cast<std::uint32_t>(fh >> 32),
                      static_cast<std::uint32_t>(v)};
    std::mt19937_64 rng(seq);
    BoxResponse r{};
    for (double& w : r.channel_weight) w = uniform_draw(rng, 0.1, 1.0);
    r.image_weight.resize(clean.images.size());
    for (double& w : r.image_weight) w = uniform_draw(rng, 0.5, 1.5);
    r.gain = uniform_draw(rng, profile_.min_gain, profile_.max_gain);
    r.base_angle = uniform_draw(rng, 0.0, 2.0 * std::numbers::pi);
    r.twist = uniform_draw(rng, -std::numbers::pi, std::numbers::pi);
    e.responses.push_back(std::move(r));
  }
  frames_[clean.frame_id] = std::move(e);
}

const std::vector<SyntheticDetector::BoxResponse>& SyntheticDetector::responses(
    const std::string& frame_id) const {
  auto it = frames_.find(frame_id);
  if (it == frames_.end()) throw DetectorError("synthetic detector does not know frame '" + frame_id + "'");
  return it->second.responses;
}

std::vector<PredBox> SyntheticDetector::detect(const Frame& frame) {
  auto it = frames_.find(frame.frame_id);
  if (it == frames_.end()) {
    throw DetectorError("synthetic detector does not know frame '" + frame.frame_id + "'");
  }
  const Entry& e = it->second;
  if (frame.images.size() != e.clean.images.size()) {
    throw DetectorError("synthetic detector: frame '" + frame.frame_id + "' has wrong image count");
  }

  // diff[n][c]: mean |x - clean| of channel c in image n.
  std::vector<std::array<double, 3>> diff(frame.images.size());
  for (std::size_t n = 0; n < frame.images.size(); ++n) {
    const ImageBuffer& a = frame.images[n].image;
    const ImageBuffer& b = e.clean.images[n].image;
    if (a.height() != b.height() || a.width() != b.width()) {
      throw DetectorError("synthetic detector: image size changed for camera '" +
                          frame.images[n].camera + "'");
    }
    auto da = a.data();
    auto db = b.data();
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < da.size(); ++i) {
      acc[i % 3] += std::abs(static_cast<double>(da[i]) - db[i]);
    }
    const double pixels = static_cast<double>(a.height() * a.width());
    for (double& x : acc) x /= pixels;
    diff[n] = acc;
  }

  std::vector<PredBox> out;
  out.reserve(e.annotation.gt.size());
  for (std::size_t v = 0; v < e.annotation.gt.size(); ++v) {
    const BoxResponse& r = e.responses[v];
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < diff.size(); ++n) {
      for (std::size_t c = 0; c < 3; ++c) {
        num += r.image_weight[n] * r.channel_weight[c] * diff[n][c];
        den += r.image_weight[n] * r.channel_weight[c];
      }
    }
    const double strength = std::clamp(num / den, 0.0, 1.0);
    const double magnitude = 2.0 * tau_ * std::tanh(r.gain * strength) / std::tanh(r.gain);
    const double angle = r.base_angle + r.twist * strength;
    const GtBox& g = e.annotation.gt[v];
    out.push_back({g.class_id,
                   {g.center.x + magnitude * std::cos(angle), g.center.y + magnitude * std::sin(angle)},
                   1.0 - 0.5 * strength});
  }
  return out;
}

namespace {

std::string frame_key(const Frame& frame) {
  std::string key = frame.frame_id;
  for (const CameraImage& ci : frame.images) {
    key += '\x1f';
    key += ci.camera;
    key += '\x1f';
    auto d = ci.image.data();
    key.append(reinterpret_cast<const char*>(d.data()), d.size() * sizeof(float));
  }
  return key;
}

}  // namespace

std::vector<PredBox> MemoDetector::detect(const Frame& frame) {
  const std::string key = frame_key(frame);
  auto it = cache_.find(key);
  if (it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  auto boxes = inner_.detect(frame);
  cache_.emplace(key, boxes);
  return boxes;
}

std::vector<PredBox> CountingDetector::detect(const Frame& frame) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_;
  }
  return inner_.detect(frame);
}

std::size_t CountingDetector::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

}  // namespace semdirect
