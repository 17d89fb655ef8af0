// Copyright 2026 The EdgeSpec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scenario file: flat INI-style sections of key = value lines.
//
//   [model] [channel] [latency] [power] [policy] [run] [train] [shift]
//
// Unknown sections or keys are rejected with a ConfigError naming them.
// Relative paths are resolved against the config file's directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgespec/sim/scenario.hpp"
#include "edgespec/sim/shift.hpp"

namespace edgespec::cli {

struct Config {
  sim::Scenario scenario;
  std::uint64_t seed = 1;
  bool seed_from_file = false;
  unsigned threads = 1;
  sim::ShiftEvalConfig shift;
  std::vector<std::uint64_t> shift_seeds{1, 2, 3};
  std::vector<std::string> warnings;
};

Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
// Missing or unreadable file is a ConfigError.
Config load_config(const std::filesystem::path& path);

// Every key with its effective value, in a stable order; parse_config of the
// result reproduces the same Config.
std::string resolved_config(const Config& config);

// "1,3,5" style lists. Throws ConfigError naming `what` on a bad entry or an
// empty list.
std::vector<double> parse_number_list(std::string_view text, std::string_view what);
std::vector<int> parse_int_list(std::string_view text, std::string_view what);

}  // namespace edgespec::cli
