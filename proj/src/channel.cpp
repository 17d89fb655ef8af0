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

#include "edgespec/channel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "edgespec/errors.hpp"

namespace edgespec::channel {

ChannelTrace::ChannelTrace(std::vector<ChannelSample> samples, HoldMode mode)
    : samples_(std::move(samples)), mode_(mode) {
  if (samples_.empty()) throw ConfigError("channel trace is empty");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const ChannelSample& s = samples_[i];
    if (!(s.time_s >= 0.0) || !std::isfinite(s.time_s)) {
      throw ConfigError("channel trace sample " + std::to_string(i) + " has negative time");
    }
    if (!(s.rate_bps > 0.0) || !std::isfinite(s.rate_bps)) {
      throw ConfigError("channel trace sample " + std::to_string(i) + " has non-positive rate");
    }
    if (i > 0 && !(s.time_s > samples_[i - 1].time_s)) {
      throw ConfigError("channel trace times must be strictly increasing");
    }
  }
  const auto [lo, hi] = std::minmax_element(
      samples_.begin(), samples_.end(),
      [](const ChannelSample& a, const ChannelSample& b) { return a.rate_bps < b.rate_bps; });
  min_rate_ = lo->rate_bps;
  max_rate_ = hi->rate_bps;
}

double ChannelTrace::rate_at(double t) const {
  if (!(t >= 0.0)) throw DomainError("rate_at: time must be >= 0");
  if (t <= samples_.front().time_s) return samples_.front().rate_bps;
  if (t >= samples_.back().time_s) return samples_.back().rate_bps;
  // First sample strictly after t; its predecessor is the latest one <= t.
  const auto next = std::upper_bound(samples_.begin(), samples_.end(), t,
                                     [](double v, const ChannelSample& s) { return v < s.time_s; });
  const auto prev = next - 1;
  if (mode_ == HoldMode::kStepHold) return prev->rate_bps;
  const double frac = (t - prev->time_s) / (next->time_s - prev->time_s);
  return prev->rate_bps + frac * (next->rate_bps - prev->rate_bps);
}

double snr_to_rate(double snr_db, double bandwidth_hz, double efficiency) {
  if (!(bandwidth_hz > 0.0)) throw DomainError("snr_to_rate: bandwidth must be > 0");
  if (!(efficiency > 0.0)) throw DomainError("snr_to_rate: efficiency must be > 0");
  const double linear = std::pow(10.0, snr_db / 10.0);
  return efficiency * bandwidth_hz * std::log2(1.0 + linear);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError(line, "not a number: '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

ChannelTrace load_trace(std::string_view text, HoldMode mode, double snr_efficiency) {
  std::vector<ChannelSample> samples;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    for (std::size_t start = 0;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }

    ChannelSample s;
    if (fields.size() == 2) {
      s.time_s = parse_number(fields[0], line_no);
      s.rate_bps = parse_number(fields[1], line_no);
    } else if (fields.size() == 3) {
      s.time_s = parse_number(fields[0], line_no);
      s.snr_db = parse_number(fields[1], line_no);
      const double bandwidth = parse_number(fields[2], line_no);
      if (!(bandwidth > 0.0)) throw ParseError(line_no, "bandwidth must be > 0");
      s.rate_bps = snr_to_rate(*s.snr_db, bandwidth, snr_efficiency);
    } else {
      throw ParseError(line_no, "expected 2 or 3 comma-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    if (s.time_s < 0.0) throw ParseError(line_no, "time must be >= 0");
    if (!(s.rate_bps > 0.0)) throw ParseError(line_no, "rate must be > 0");
    if (!samples.empty() && !(s.time_s > samples.back().time_s)) {
      throw ParseError(line_no, "time not strictly increasing");
    }
    samples.push_back(s);
  }
  if (samples.empty()) throw ParseError(line_no, "trace has no samples");
  return ChannelTrace(std::move(samples), mode);
}

ChannelTrace load_trace_file(const std::filesystem::path& path, HoldMode mode, double snr_efficiency) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open channel trace: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_trace(buf.str(), mode, snr_efficiency);
}

void GilbertElliottParams::validate() const {
  if (!(rate_strong > 0.0) || !(rate_weak > 0.0)) throw ConfigError("Gilbert-Elliott rates must be > 0");
  if (!(p_stay_strong >= 0.0 && p_stay_strong <= 1.0) || !(p_stay_weak >= 0.0 && p_stay_weak <= 1.0)) {
    throw ConfigError("Gilbert-Elliott stay probabilities must be in [0, 1]");
  }
}

double GilbertElliottParams::stationary_strong() const {
  const double leave_strong = 1.0 - p_stay_strong;
  const double leave_weak = 1.0 - p_stay_weak;
  if (leave_strong + leave_weak == 0.0) return 1.0;  // both absorbing; chain starts strong
  return leave_weak / (leave_strong + leave_weak);
}

std::pair<GeState, double> ge_step(GeState state, const GilbertElliottParams& params, Rng& rng) {
  const double stay = state == GeState::kStrong ? params.p_stay_strong : params.p_stay_weak;
  GeState next = state;
  if (!rng.bernoulli(stay)) next = state == GeState::kStrong ? GeState::kWeak : GeState::kStrong;
  return {next, next == GeState::kStrong ? params.rate_strong : params.rate_weak};
}

GilbertElliottChannel::GilbertElliottChannel(GilbertElliottParams params, double slot_s)
    : params_(params), slot_s_(slot_s), rng_(params.seed) {
  params_.validate();
  if (!(slot_s_ > 0.0)) throw ConfigError("Gilbert-Elliott slot duration must be > 0");
}

void GilbertElliottChannel::advance_to(std::uint64_t slot) {
  if (slot < slot_) throw ContractViolation("Gilbert-Elliott channel queried backwards in time");
  while (slot_ < slot) {
    state_ = ge_step(state_, params_, rng_).first;
    ++slot_;
  }
}

GeState GilbertElliottChannel::state_at(double t) {
  if (!(t >= 0.0)) throw DomainError("rate_at: time must be >= 0");
  advance_to(static_cast<std::uint64_t>(std::floor(t / slot_s_)));
  return state_;
}

double GilbertElliottChannel::rate_at(double t) {
  return state_at(t) == GeState::kStrong ? params_.rate_strong : params_.rate_weak;
}

ChannelModel::ChannelModel(ConstantChannel c) : impl_(c) {
  if (!(c.rate_bps > 0.0)) throw ConfigError("constant channel rate must be > 0");
}
ChannelModel::ChannelModel(ChannelTrace trace) : impl_(std::move(trace)) {}
ChannelModel::ChannelModel(GilbertElliottChannel ge) : impl_(std::move(ge)) {}

double ChannelModel::rate_at(double t) {
  return std::visit(
      [t](auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConstantChannel>) {
          return c.rate_bps;
        } else {
          return c.rate_at(t);
        }
      },
      impl_);
}

}  // namespace edgespec::channel
