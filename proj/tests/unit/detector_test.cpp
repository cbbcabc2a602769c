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

#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <thread>

#include "semdirect/image_io.hpp"
#include "semdirect/synthetic_scene.hpp"

namespace sd = semdirect;
using json = nlohmann::json;

namespace {

sd::Frame test_frame(const std::string& id = "f0", std::size_t cameras = 1) {
  sd::Frame f{id, {}};
  for (std::size_t c = 0; c < cameras; ++c) {
    f.images.push_back({"CAM_" + std::to_string(c), sd::procedural_image(12, 16, c + 1)});
  }
  return f;
}

std::string mock(const std::string& args = "") {
  return std::string(MOCK_DETECTOR_PATH) + " " + args;
}

const char* kTwoBoxes = R"('[{"class":"car","cx":1.0,"cy":2.0,"score":0.7},{"class":3,"cx":-1,"cy":0}]')";

}  // namespace

TEST(WireProtocol, RequestCarriesPngPerCamera) {
  const sd::Frame f = test_frame("f0", 2);
  const json req = json::parse(sd::make_request(7, f));
  EXPECT_EQ(req.at("id"), 7);
  ASSERT_EQ(req.at("images").size(), 2u);
  EXPECT_EQ(req.at("images")[1].at("camera"), "CAM_1");
  const auto bytes = sd::base64_decode(req.at("images")[0].at("png_base64").get<std::string>());
  EXPECT_EQ(sd::decode_image(bytes), sd::quantize8(f.images[0].image));
}

TEST(WireProtocol, ParsesBoxes) {
  const auto boxes = sd::parse_response(
      R"({"id":3,"boxes":[{"class":"car","cx":1.5,"cy":-2,"score":0.25},{"class":4,"cx":0,"cy":0}]})", 3);
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_EQ(boxes[0].class_id, "car");
  EXPECT_EQ(boxes[0].center.x, 1.5);
  EXPECT_EQ(boxes[0].score, 0.25);
  EXPECT_EQ(boxes[1].class_id, "4");
  EXPECT_EQ(boxes[1].score, 1.0);
}

TEST(WireProtocol, Violations) {
  EXPECT_THROW(sd::parse_response("not json", 1), sd::ProtocolError);
  EXPECT_THROW(sd::parse_response(R"({"boxes":[]})", 1), sd::ProtocolError);
  EXPECT_THROW(sd::parse_response(R"({"id":2,"boxes":[]})", 1), sd::ProtocolError);
  EXPECT_THROW(sd::parse_response(R"({"id":1})", 1), sd::ProtocolError);
  EXPECT_THROW(sd::parse_response(R"({"id":1,"boxes":[{"class":"a","cx":0}]})", 1), sd::ProtocolError);
  EXPECT_THROW(sd::parse_response(R"({"id":1,"boxes":[{"class":"a","cx":0,"cy":0,"score":1.5}]})", 1),
               sd::ProtocolError);
  EXPECT_THROW(sd::parse_response(R"({"id":1,"boxes":[{"class":true,"cx":0,"cy":0}]})", 1), sd::ProtocolError);
  try {
    sd::parse_response(R"({"id":1,"error":"out of memory"})", 1);
    FAIL();
  } catch (const sd::ProtocolError&) {
    FAIL() << "detector errors are not protocol errors";
  } catch (const sd::DetectorError& e) {
    EXPECT_NE(std::string(e.what()).find("out of memory"), std::string::npos);
  }
}

TEST(Base64, RoundTrip) {
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 100u}) {
    std::vector<std::uint8_t> bytes(n);
    for (std::size_t i = 0; i < n; ++i) bytes[i] = static_cast<std::uint8_t>(i * 37 + 5);
    EXPECT_EQ(sd::base64_decode(sd::base64_encode(bytes)), bytes);
  }
  EXPECT_EQ(sd::base64_encode(std::vector<std::uint8_t>{'M', 'a'}), "TWE=");
  EXPECT_THROW(sd::base64_decode("abc"), std::runtime_error);
}

TEST(SubprocessDetector, ScriptedRoundTrips) {
  sd::SubprocessDetector det(mock(std::string("--boxes ") + kTwoBoxes));
  const sd::Frame f = test_frame();
  for (int i = 0; i < 100; ++i) {
    const auto boxes = det.detect(f);
    ASSERT_EQ(boxes.size(), 2u);
    EXPECT_EQ(boxes[0].center.x, 1.0);
    EXPECT_EQ(boxes[1].class_id, "3");
  }
}

TEST(SubprocessDetector, ResponsesDependOnImage) {
  sd::SubprocessDetector det(mock(std::string("--shift 10 --boxes ") + kTwoBoxes));
  sd::Frame dark = test_frame();
  sd::Frame bright = dark;
  for (float& v : bright.images[0].image.data()) v = std::min(1.0f, v + 0.2f);
  EXPECT_LT(det.detect(dark)[0].center.x, det.detect(bright)[0].center.x);
}

TEST(SubprocessDetector, MismatchedIdIsProtocolError) {
  sd::SubprocessDetector det(mock("--fault bad-id --fault-at 2"));
  const sd::Frame f = test_frame();
  EXPECT_NO_THROW(det.detect(f));
  EXPECT_THROW(det.detect(f), sd::ProtocolError);
}

TEST(SubprocessDetector, GarbageThenRecovery) {
  sd::SubprocessDetector det(mock("--fault garbage --fault-at 1"));
  const sd::Frame f = test_frame();
  EXPECT_THROW(det.detect(f), sd::ProtocolError);
  EXPECT_NO_THROW(det.detect(f));
}

TEST(SubprocessDetector, ErrorObjectSurfaces) {
  sd::SubprocessDetector det(mock("--fault error"));
  EXPECT_THROW(det.detect(test_frame()), sd::DetectorError);
}

TEST(SubprocessDetector, DeadChild) {
  sd::SubprocessDetector det(mock("--fault exit"));
  EXPECT_THROW(det.detect(test_frame()), sd::DetectorError);
  EXPECT_THROW(det.detect(test_frame()), sd::DetectorError);
}

TEST(HttpDetector, PostsToDetectEndpoint) {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/api/detect", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    const json body = json::parse(req.body);
    const json reply = {{"id", body.at("id")},
                        {"boxes", json::array({{{"class", "car"}, {"cx", 4.0}, {"cy", 5.0}}})}};
    res.set_content(reply.dump(), "application/json");
  });
  server.Post("/bad/detect", [&](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    res.status = 500;
    res.set_content(json{{"id", body.at("id")}, {"error", "model crashed"}}.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string base = "http://127.0.0.1:" + std::to_string(port);
  sd::HttpDetector det(base + "/api/");
  const auto boxes = det.detect(test_frame());
  ASSERT_EQ(boxes.size(), 1u);
  EXPECT_EQ(boxes[0].center.y, 5.0);
  det.detect(test_frame());
  EXPECT_EQ(hits.load(), 2);

  sd::HttpDetector bad(base + "/bad");
  EXPECT_THROW(bad.detect(test_frame()), sd::DetectorError);
  sd::HttpDetector missing(base + "/nowhere");
  EXPECT_THROW(missing.detect(test_frame()), sd::DetectorError);

  server.stop();
  t.join();
  sd::HttpDetector down(base);
  EXPECT_THROW(down.detect(test_frame()), sd::DetectorError);
}

TEST(ReplayDetector, EchoAndFile) {
  const sd::Annotation ann{"f0", {{"car", {1, 2}}, {"ped", {3, 4}}}};
  auto echo = sd::ReplayDetector::echo({ann});
  const auto boxes = echo.detect(test_frame("f0"));
  ASSERT_EQ(boxes.size(), 2u);
  EXPECT_EQ(boxes[1].center, (sd::GroundPoint{3, 4}));
  EXPECT_THROW(echo.detect(test_frame("other")), sd::DetectorError);

  const auto path = std::filesystem::temp_directory_path() / "semdirect_replay_test.json";
  std::ofstream(path) << R"({"frames":[{"frame_id":"f0","boxes":[{"class":"car","cx":9,"cy":8,"score":0.5}]}]})";
  auto file = sd::ReplayDetector::from_json_file(path.string());
  EXPECT_EQ(file.detect(test_frame("f0")).front().score, 0.5);
  std::ofstream(path) << R"({"frames":[{"boxes":[]}]})";
  EXPECT_THROW(sd::ReplayDetector::from_json_file(path.string()), sd::DetectorError);
  std::filesystem::remove(path);
  EXPECT_THROW(sd::ReplayDetector::from_json_file("/nonexistent/replay.json"), sd::DetectorError);
}

TEST(SyntheticDetector, CleanFrameReproducesGroundTruth) {
  const sd::Annotation ann{"f0", {{"car", {0, 0}}, {"ped", {10, 0}}}};
  const sd::Frame f = test_frame("f0", 2);
  sd::SyntheticDetector det({11, 1.0, 4.0}, 2.0);
  det.add_frame(f, ann);
  const auto boxes = det.detect(f);
  ASSERT_EQ(boxes.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(boxes[i].center.x, ann.gt[i].center.x, 1e-12);
    EXPECT_NEAR(boxes[i].center.y, ann.gt[i].center.y, 1e-12);
    EXPECT_EQ(boxes[i].score, 1.0);
  }
}

TEST(SyntheticDetector, SaturatedDifferenceMovesEveryBoxTwoTau) {
  const sd::Annotation ann{"f0", {{"car", {0, 0}}, {"car", {50, 0}}, {"ped", {0, 50}}}};
  sd::Frame clean{"f0", {{"CAM_0", sd::ImageBuffer(4, 4, 0.0f)}}};
  sd::Frame white{"f0", {{"CAM_0", sd::ImageBuffer(4, 4, 1.0f)}}};
  sd::SyntheticDetector det({0, 1.0, 4.0}, 2.0);
  det.add_frame(clean, ann);
  const auto boxes = det.detect(white);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(sd::center_distance(boxes[i].center, ann.gt[i].center), 4.0, 1e-12);
    EXPECT_EQ(boxes[i].score, 0.5);
  }
}

TEST(SyntheticDetector, ResponsesDependOnSeedAndFrame) {
  const sd::Annotation a0{"f0", {{"car", {0, 0}}}};
  const sd::Annotation a1{"f1", {{"car", {0, 0}}}};
  sd::SyntheticDetector d0({0, 1.0, 4.0}, 2.0), d1({1, 1.0, 4.0}, 2.0);
  d0.add_frame(test_frame("f0"), a0);
  d0.add_frame(test_frame("f1"), a1);
  d1.add_frame(test_frame("f0"), a0);
  EXPECT_NE(d0.responses("f0")[0].base_angle, d1.responses("f0")[0].base_angle);
  EXPECT_NE(d0.responses("f0")[0].base_angle, d0.responses("f1")[0].base_angle);
  const auto& r = d0.responses("f0")[0];
  EXPECT_GE(r.gain, 1.0);
  EXPECT_LE(r.gain, 4.0);
  EXPECT_THROW(sd::SyntheticDetector({0, 2.0, 1.0}, 2.0), std::invalid_argument);
  EXPECT_THROW(d0.detect(test_frame("zz")), sd::DetectorError);
}

TEST(MemoDetector, CachesIdenticalFrames) {
  const sd::Annotation ann{"f0", {{"car", {0, 0}}}};
  auto replay = sd::ReplayDetector::echo({ann});
  sd::CountingDetector counter(replay);
  sd::MemoDetector memo(counter);
  sd::Frame f = test_frame();
  memo.detect(f);
  memo.detect(f);
  f.images[0].image.at(0, 0, 0) += 0.01f;
  memo.detect(f);
  EXPECT_EQ(counter.calls(), 2u);
  EXPECT_EQ(memo.hits(), 1u);
  EXPECT_EQ(memo.misses(), 2u);
}

TEST(Frame, Validation) {
  sd::Frame empty{"f", {}};
  EXPECT_THROW(empty.validate(), std::invalid_argument);
  sd::Frame dup = test_frame("f", 2);
  dup.images[1].camera = dup.images[0].camera;
  EXPECT_THROW(dup.validate(), std::invalid_argument);
}
