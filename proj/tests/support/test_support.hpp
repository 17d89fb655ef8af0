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

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>

#include "edgespec/models/lm.hpp"
#include "edgespec/sim/scenario.hpp"

namespace edgespec::testing {

inline std::filesystem::path source_path(const std::string& rel) {
  return std::filesystem::path(EDGESPEC_SOURCE_DIR) / rel;
}

inline std::filesystem::path fixture_path(const std::string& rel) {
  return std::filesystem::path(EDGESPEC_FIXTURE_DIR) / rel;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("edgespec_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Borrowed target and drafter as a ModelSet.
class BorrowedModels final : public sim::ModelSet {
 public:
  BorrowedModels(const models::TargetLm& target, const models::Drafter& draft) : target_(target), draft_(draft) {}
  const models::TargetLm& target() const override { return target_; }
  const models::Drafter& draft() const override { return draft_; }

 private:
  const models::TargetLm& target_;
  const models::Drafter& draft_;
};

}  // namespace edgespec::testing
