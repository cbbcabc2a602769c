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

#ifndef SEMDIRECT_TOOLS_CLI_HPP_
#define SEMDIRECT_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "semdirect/detector.hpp"
#include "semdirect/problem.hpp"

namespace semdirect::cli {

// Builds detectors from a spec string:
//   synthetic[:seed=N][,gain=LO-HI]   in-process synthetic detector
//   replay:gt                          echo the manifest ground truth
//   replay:PATH                        boxes from a replay JSON file
//   exec:COMMAND                       wire protocol over a child's stdio
//   http://HOST:PORT[/PREFIX]          wire protocol over HTTP POST /detect
// Each call to make() returns an independent session.
class DetectorFactory {
 public:
  DetectorFactory(std::string spec, const Manifest& manifest, double tau, std::uint64_t seed);
  std::unique_ptr<Detector> make() const;
  const std::string& spec() const { return spec_; }

 private:
  std::string spec_;
  const Manifest* manifest_;
  double tau_;
  std::uint64_t seed_;
};

// Entry point shared by the executable and the tests; args exclude argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semdirect::cli

#endif  // SEMDIRECT_TOOLS_CLI_HPP_
