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

// Uplink rate R_n as seen by the latency model: constant, trace-driven, or a
// two-state Gilbert-Elliott regime chain.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "edgespec/random.hpp"

namespace edgespec::channel {

struct ChannelSample {
  double time_s = 0.0;
  double rate_bps = 0.0;
  std::optional<double> snr_db;
};

enum class HoldMode { kStepHold, kLinear };

// Non-empty, strictly increasing in time, positive rates. Immutable.
class ChannelTrace {
 public:
  explicit ChannelTrace(std::vector<ChannelSample> samples, HoldMode mode = HoldMode::kStepHold);

  // Clamps to the first/last sample outside the covered interval.
  double rate_at(double t) const;

  const std::vector<ChannelSample>& samples() const noexcept { return samples_; }
  HoldMode hold_mode() const noexcept { return mode_; }
  double min_rate() const noexcept { return min_rate_; }
  double max_rate() const noexcept { return max_rate_; }

 private:
  std::vector<ChannelSample> samples_;
  HoldMode mode_;
  double min_rate_ = 0.0;
  double max_rate_ = 0.0;
};

// Shannon capacity scaled by a spectral-efficiency factor:
// efficiency * W * log2(1 + 10^(snr/10)).
double snr_to_rate(double snr_db, double bandwidth_hz, double efficiency = 1.0);

// Parses `time_s,rate_bps` or `time_s,snr_db,bandwidth_hz` rows; blank lines
// and lines starting with '#' are skipped. Throws ParseError.
ChannelTrace load_trace(std::string_view text, HoldMode mode = HoldMode::kStepHold,
                        double snr_efficiency = 1.0);
ChannelTrace load_trace_file(const std::filesystem::path& path, HoldMode mode = HoldMode::kStepHold,
                             double snr_efficiency = 1.0);

struct GilbertElliottParams {
  double rate_strong = 0.0;
  double rate_weak = 0.0;
  double p_stay_strong = 0.9;
  double p_stay_weak = 0.9;
  std::uint64_t seed = 0;

  // Throws ConfigError on out-of-range fields.
  void validate() const;
  // Long-run fraction of steps spent in the strong state.
  double stationary_strong() const;
};

enum class GeState : std::uint8_t { kStrong, kWeak };

// One Markov transition; returns the new state and its rate.
std::pair<GeState, double> ge_step(GeState state, const GilbertElliottParams& params, Rng& rng);

// Gilbert-Elliott chain indexed by time: slot i covers [i*slot_s, (i+1)*slot_s)
// and the chain starts strong in slot 0. The realization depends only on the
// seed and the slot index, so every policy sees the same channel at a given
// simulated time.
class GilbertElliottChannel {
 public:
  GilbertElliottChannel(GilbertElliottParams params, double slot_s);

  // Queries must be non-decreasing in t; the chain is advanced lazily.
  double rate_at(double t);
  GeState state_at(double t);

  const GilbertElliottParams& params() const noexcept { return params_; }
  double slot_s() const noexcept { return slot_s_; }

 private:
  void advance_to(std::uint64_t slot);

  GilbertElliottParams params_;
  double slot_s_;
  Rng rng_;
  GeState state_ = GeState::kStrong;
  std::uint64_t slot_ = 0;
};

struct ConstantChannel {
  double rate_bps;
};

// What the simulator samples once per round. Owned by one simulation.
class ChannelModel {
 public:
  explicit ChannelModel(ConstantChannel c);
  explicit ChannelModel(ChannelTrace trace);
  explicit ChannelModel(GilbertElliottChannel ge);

  double rate_at(double t);

 private:
  std::variant<ConstantChannel, ChannelTrace, GilbertElliottChannel> impl_;
};

}  // namespace edgespec::channel
