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

#include "edgespec/sim/report.hpp"

#include <charconv>
#include <cstdio>
#include <json.hpp>
#include <system_error>

#include "edgespec/errors.hpp"
#include "edgespec/io.hpp"

namespace edgespec::sim {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T parse_field(std::string_view s, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad field '" + std::string(s) + "'");
  }
  return v;
}

nlohmann::ordered_json shares_json(const Shares& s) {
  return {{"edge", s.edge}, {"up", s.up}, {"cloud", s.cloud}, {"down", s.down}};
}

}  // namespace

std::string rounds_csv(const std::vector<RoundRecord>& records) {
  std::string out(kRoundsCsvHeader);
  out += '\n';
  for (const RoundRecord& r : records) {
    out += std::to_string(r.round) + ',' + num(r.rate_bps) + ',' + std::to_string(r.k) + ',' + std::to_string(r.tau) +
           ',' + num(r.time.t_edge) + ',' + num(r.time.t_up) + ',' + num(r.time.t_cloud) + ',' + num(r.time.t_down) +
           ',' + num(r.time.t_total) + ',' + num(r.energy.total) + ',' + num(r.gamma_hat) + ',' +
           (r.fallback ? '1' : '0') + '\n';
  }
  return out;
}

std::vector<RoundRecord> parse_rounds_csv(std::string_view text, const latency::PowerParams& power) {
  std::vector<RoundRecord> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    const std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line_no == 1) {
      if (line != kRoundsCsvHeader) throw ParseError(1, "unexpected header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) throw ParseError(line_no, "expected 12 fields");
    RoundRecord r;
    r.round = parse_field<std::size_t>(f[0], line_no);
    r.rate_bps = parse_field<double>(f[1], line_no);
    r.k = parse_field<int>(f[2], line_no);
    r.tau = parse_field<int>(f[3], line_no);
    r.time = {parse_field<double>(f[4], line_no), parse_field<double>(f[5], line_no),
              parse_field<double>(f[6], line_no), parse_field<double>(f[7], line_no),
              parse_field<double>(f[8], line_no)};
    r.energy = latency::energy_step(r.time, power);
    if (r.energy.total != parse_field<double>(f[9], line_no)) {
      throw ParseError(line_no, "energy_j inconsistent with the power parameters");
    }
    r.gamma_hat = parse_field<double>(f[10], line_no);
    const int fallback = parse_field<int>(f[11], line_no);
    if (fallback != 0 && fallback != 1) throw ParseError(line_no, "fallback must be 0 or 1");
    r.fallback = fallback == 1;
    records.push_back(r);
  }
  return records;
}

std::string summary_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["etgr_emitted"] = m.etgr_emitted;
  j["etgr_accepted"] = m.etgr_accepted;
  j["mean_acceptance"] = m.mean_acceptance;
  j["p95_token_latency_s"] = m.p95_token_latency_s;
  j["total_energy_j"] = m.total_energy_j;
  j["time_shares"] = shares_json(m.time_shares);
  j["energy_shares"] = shares_json(m.energy_shares);
  j["rounds"] = m.rounds;
  j["emitted_tokens"] = m.emitted_tokens;
  j["accepted_tokens"] = m.accepted_tokens;
  j["total_time_s"] = m.total_time_s;
  j["mean_token_latency_s"] = m.mean_token_latency_s;
  return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "policy,etgr_emitted,etgr_accepted,mean_acceptance,p95_token_latency_s,total_energy_j,rounds\n";
  for (const SweepRow& r : rows) {
    const Metrics& m = r.metrics;
    out += r.policy + ',' + num(m.etgr_emitted) + ',' + num(m.etgr_accepted) + ',' + num(m.mean_acceptance) + ',' +
           num(m.p95_token_latency_s) + ',' + num(m.total_energy_j) + ',' + std::to_string(m.rounds) + '\n';
  }
  return out;
}

std::string landscape_csv(const Landscape& l) {
  std::string out = "rate_bps";
  for (int k = 1; k <= l.k_max; ++k) out += ",etgr_k" + std::to_string(k);
  out += ",argmax_k\n";
  for (std::size_t i = 0; i < l.rates.size(); ++i) {
    out += num(l.rates[i]);
    for (double v : l.etgr[i]) out += ',' + num(v);
    out += ',' + std::to_string(l.argmax_k[i]) + '\n';
  }
  return out;
}

std::string shift_csv(const ShiftExperiment& e) {
  std::string out = "seed,magnitude,anchored,baseline,baseline_same_target\n";
  auto row = [&](const std::string& seed, const ShiftRow& r) {
    out += seed + ',' + num(r.magnitude) + ',' + num(r.anchored) + ',' + num(r.baseline) + ',' +
           num(r.baseline_same_target) + '\n';
  };
  for (const ShiftSeedResult& s : e.seeds) {
    for (const ShiftRow& r : s.rows) row(std::to_string(s.seed), r);
  }
  for (const ShiftRow& r : e.mean) row("mean", r);
  return out;
}

void write_run_outputs(const std::filesystem::path& dir, const std::vector<RoundRecord>& records,
                       const Metrics& metrics, std::string_view resolved_config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  write_file_atomic(dir / "rounds.csv", rounds_csv(records));
  write_file_atomic(dir / "summary.json", summary_json(metrics));
  write_file_atomic(dir / "config.resolved", resolved_config);
}

}  // namespace edgespec::sim
