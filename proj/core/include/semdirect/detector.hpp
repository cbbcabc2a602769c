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

#ifndef SEMDIRECT_DETECTOR_HPP_
#define SEMDIRECT_DETECTOR_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "semdirect/perturb.hpp"
#include "semdirect/surrogate.hpp"

namespace semdirect {

struct CameraImage {
  std::string camera;
  ImageBuffer image;
};

// One synchronized multi-camera capture.
struct Frame {
  std::string frame_id;
  std::vector<CameraImage> images;

  // Throws std::invalid_argument if empty or if camera ids repeat.
  void validate() const;
  std::vector<ImageBuffer> buffers() const;
  Frame with_buffers(std::vector<ImageBuffer> buffers) const;
};

struct Annotation {
  std::string frame_id;
  std::vector<GtBox> gt;
};

class DetectorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The peer broke the wire contract (bad id, malformed body).
class ProtocolError : public DetectorError {
 public:
  using DetectorError::DetectorError;
};

// Anything that maps a frame of images to ground-plane boxes. Implementations
// must be deterministic for identical inputs.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<PredBox> detect(const Frame& frame) = 0;
};

// --- wire protocol -----------------------------------------------------------

// {"id":I,"images":[{"camera":C,"png_base64":B}]}
std::string make_request(std::uint64_t id, const Frame& frame);

// Parses {"id":I,"boxes":[...]} or {"id":I,"error":MSG}. Throws ProtocolError
// when the id does not echo `expected_id` or the body is malformed, and
// DetectorError when the peer reports an error.
std::vector<PredBox> parse_response(const std::string& line, std::uint64_t expected_id);

// Launches `command` through /bin/sh and exchanges one request line and one
// response line per detect call over the child's standard streams.
class SubprocessDetector : public Detector {
 public:
  explicit SubprocessDetector(const std::string& command);
  ~SubprocessDetector() override;
  SubprocessDetector(const SubprocessDetector&) = delete;
  SubprocessDetector& operator=(const SubprocessDetector&) = delete;

  std::vector<PredBox> detect(const Frame& frame) override;

 private:
  struct Process;
  std::unique_ptr<Process> proc_;
  std::uint64_t next_id_ = 1;
};

// POSTs the request body to <base_url>/detect.
class HttpDetector : public Detector {
 public:
  explicit HttpDetector(std::string base_url);
  std::vector<PredBox> detect(const Frame& frame) override;

 private:
  std::string host_;
  std::string path_;
  std::uint64_t next_id_ = 1;
};

// --- in-process detectors ------------------------------------------------------

// Returns stored boxes per frame id, ignoring image content.
class ReplayDetector : public Detector {
 public:
  ReplayDetector() = default;
  explicit ReplayDetector(std::map<std::string, std::vector<PredBox>> boxes);

  // {"frames":[{"frame_id":F,"boxes":[{"class":K,"cx":X,"cy":Y,"score":S}]}]}
  static ReplayDetector from_json_file(const std::string& path);
  // Predictions equal to the ground truth, score 1.
  static ReplayDetector echo(const std::vector<Annotation>& annotations);

  void set(const std::string& frame_id, std::vector<PredBox> boxes);
  std::vector<PredBox> detect(const Frame& frame) override;

 private:
  std::map<std::string, std::vector<PredBox>> boxes_;
};

struct SyntheticProfile {
  std::uint64_t seed = 0;
  double min_gain = 1.0;
  double max_gain = 4.0;
};

// Emits one prediction per ground-truth box, displaced by a smooth function of
// the mean absolute per-channel difference between the incoming images and the
// stored clean frame. The displacement reaches 2 * tau when every channel
// differs by 1 and is zero on the clean frame.
class SyntheticDetector : public Detector {
 public:
  SyntheticDetector(SyntheticProfile profile, double tau);

  void add_frame(const Frame& clean, const Annotation& annotation);
  std::vector<PredBox> detect(const Frame& frame) override;

  // Per-box response parameters, exposed for tests.
  struct BoxResponse {
    double channel_weight[3];
    std::vector<double> image_weight;
    double gain;
    double base_angle;
    double twist;
  };
  const std::vector<BoxResponse>& responses(const std::string& frame_id) const;

 private:
  struct Entry {
    Frame clean;
    Annotation annotation;
    std::vector<BoxResponse> responses;
  };
  SyntheticProfile profile_;
  double tau_;
  std::map<std::string, Entry> frames_;
};

// Caches responses per frame content.
class MemoDetector : public Detector {
 public:
  explicit MemoDetector(Detector& inner) : inner_(inner) {}
  std::vector<PredBox> detect(const Frame& frame) override;
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  Detector& inner_;
  std::unordered_map<std::string, std::vector<PredBox>> cache_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

// Counts detect calls; thread-safe.
class CountingDetector : public Detector {
 public:
  explicit CountingDetector(Detector& inner) : inner_(inner) {}
  std::vector<PredBox> detect(const Frame& frame) override;
  std::size_t calls() const;

 private:
  Detector& inner_;
  mutable std::mutex mu_;
  std::size_t calls_ = 0;
};

}  // namespace semdirect

#endif  // SEMDIRECT_DETECTOR_HPP_
