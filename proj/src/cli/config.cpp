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

#include "edgespec/cli/config.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "edgespec/errors.hpp"
#include "edgespec/io.hpp"

namespace edgespec::cli {

namespace {

using Setter = std::function<void(Config&, const std::string& value, const std::string& key)>;
using Getter = std::function<std::optional<std::string>(const Config&)>;

struct Field {
  std::string section;
  std::string key;
  Setter set;
  Getter get;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(std::string_view s, const std::string& key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t to_u64(std::string_view s, const std::string& key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

template <typename Acc>
Field real(std::string section, std::string key, Acc acc) {
  return {std::move(section), std::move(key),
          [acc](Config& c, const std::string& v, const std::string& k) { acc(c) = to_double(v, k); },
          [acc](const Config& c) -> std::optional<std::string> { return fmt(acc(c)); }};
}

template <typename Acc>
Field integer(std::string section, std::string key, Acc acc) {
  return {std::move(section), std::move(key),
          [acc](Config& c, const std::string& v, const std::string& k) {
            using T = std::remove_reference_t<decltype(acc(c))>;
            const std::uint64_t x = to_u64(v, k);
            if (x > std::numeric_limits<T>::max()) throw ConfigError(k + ": value out of range");
            acc(c) = static_cast<T>(x);
          },
          [acc](const Config& c) -> std::optional<std::string> { return std::to_string(acc(c)); }};
}

template <typename Acc>
Field real_list(std::string section, std::string key, Acc acc) {
  return {std::move(section), std::move(key),
          [acc](Config& c, const std::string& v, const std::string& k) { acc(c) = parse_number_list(v, k); },
          [acc](const Config& c) -> std::optional<std::string> {
            std::string out;
            for (double x : acc(c)) out += (out.empty() ? "" : ", ") + fmt(x);
            return out;
          }};
}

template <typename T>
Field choice(std::string section, std::string key, std::function<T&(Config&)> acc,
             std::vector<std::pair<std::string, T>> options) {
  auto get_acc = [acc](const Config& c) -> const T& { return acc(const_cast<Config&>(c)); };
  return {std::move(section), std::move(key),
          [acc, options](Config& c, const std::string& v, const std::string& k) {
            for (const auto& [name, value] : options) {
              if (name == v) {
                acc(c) = value;
                return;
              }
            }
            std::string allowed;
            for (const auto& o : options) allowed += (allowed.empty() ? "" : ", ") + o.first;
            throw ConfigError(k + ": expected one of " + allowed + ", got '" + v + "'");
          },
          [get_acc, options](const Config& c) -> std::optional<std::string> {
            for (const auto& [name, value] : options) {
              if (value == get_acc(c)) return name;
            }
            return std::nullopt;
          }};
}

Field path(std::string section, std::string key,
           std::function<std::optional<std::filesystem::path>&(Config&)> acc, const std::filesystem::path& base) {
  return {std::move(section), std::move(key),
          [acc, base](Config& c, const std::string& v, const std::string& k) {
            if (v.empty()) throw ConfigError(k + ": empty path");
            const std::filesystem::path p(v);
            acc(c) = p.is_absolute() || base.empty() ? p : base / p;
          },
          [acc](const Config& c) -> std::optional<std::string> {
            const auto& p = acc(const_cast<Config&>(c));
            if (!p) return std::nullopt;
            return "\"" + p->string() + "\"";
          }};
}

std::vector<Field> fields(const std::filesystem::path& base) {
  std::vector<Field> f;
  // [model]
  f.push_back(choice<sim::ModelKind>("model", "kind", [](Config& c) -> auto& { return c.scenario.model.kind; },
                                     {{"bernoulli", sim::ModelKind::kBernoulli},
                                      {"anchored", sim::ModelKind::kAnchored}}));
  f.push_back(real("model", "p", [](auto& c) -> auto& { return c.scenario.model.bernoulli_p; }));
  f.push_back(integer("model", "vocab", [](auto& c) -> auto& { return c.scenario.model.family.vocab; }));
  f.push_back(integer("model", "dim", [](auto& c) -> auto& { return c.scenario.model.family.dim; }));
  f.push_back(integer("model", "hidden", [](auto& c) -> auto& { return c.scenario.model.family.hidden; }));
  f.push_back(integer("model", "buckets", [](auto& c) -> auto& { return c.scenario.model.family.buckets; }));
  f.push_back(integer("model", "target_window", [](auto& c) -> auto& { return c.scenario.model.family.target_window; }));
  f.push_back(integer("model", "draft_window", [](auto& c) -> auto& { return c.scenario.model.family.draft_window; }));
  f.push_back(real_list("model", "order_scales", [](auto& c) -> auto& { return c.scenario.model.family.order_scales; }));
  f.push_back(real("model", "anchor_gain", [](auto& c) -> auto& { return c.scenario.model.family.anchor_gain; }));
  f.push_back(
      real("model", "anchor_bias_scale", [](auto& c) -> auto& { return c.scenario.model.family.anchor_bias_scale; }));
  f.push_back(real("model", "lm_head_scale", [](auto& c) -> auto& { return c.scenario.model.family.lm_head_scale; }));
  f.push_back(integer("model", "family_seed", [](auto& c) -> auto& { return c.scenario.model.family.seed; }));
  f.push_back(real("model", "magnitude", [](auto& c) -> auto& { return c.scenario.model.magnitude; }));
  f.push_back(integer("model", "task_seed", [](auto& c) -> auto& { return c.scenario.model.task_seed; }));
  f.push_back(path("model", "draft_checkpoint", [](Config& c) -> auto& { return c.scenario.model.draft_checkpoint; },
                   base));
  f.push_back(integer("model", "corpus_sequences", [](auto& c) -> auto& { return c.scenario.model.corpus_sequences; }));
  f.push_back(integer("model", "corpus_length", [](auto& c) -> auto& { return c.scenario.model.corpus_length; }));
  f.push_back(integer("model", "corpus_seed", [](auto& c) -> auto& { return c.scenario.model.corpus_seed; }));
  f.push_back(real("model", "draft_temperature", [](auto& c) -> auto& { return c.scenario.model.draft_temperature; }));
  // [channel]
  f.push_back(choice<sim::ChannelKind>("channel", "kind", [](Config& c) -> auto& { return c.scenario.channel.kind; },
                                       {{"constant", sim::ChannelKind::kConstant},
                                        {"trace", sim::ChannelKind::kTrace},
                                        {"gilbert_elliott", sim::ChannelKind::kGilbertElliott}}));
  f.push_back(real("channel", "rate_bps", [](auto& c) -> auto& { return c.scenario.channel.rate_bps; }));
  f.push_back(path("channel", "trace", [](Config& c) -> auto& { return c.scenario.channel.trace_path; }, base));
  f.push_back(choice<channel::HoldMode>("channel", "hold", [](Config& c) -> auto& { return c.scenario.channel.hold; },
                                        {{"step", channel::HoldMode::kStepHold},
                                         {"linear", channel::HoldMode::kLinear}}));
  f.push_back(real("channel", "snr_efficiency", [](auto& c) -> auto& { return c.scenario.channel.snr_efficiency; }));
  f.push_back(real("channel", "rate_strong", [](auto& c) -> auto& { return c.scenario.channel.ge.rate_strong; }));
  f.push_back(real("channel", "rate_weak", [](auto& c) -> auto& { return c.scenario.channel.ge.rate_weak; }));
  f.push_back(real("channel", "p_stay_strong", [](auto& c) -> auto& { return c.scenario.channel.ge.p_stay_strong; }));
  f.push_back(real("channel", "p_stay_weak", [](auto& c) -> auto& { return c.scenario.channel.ge.p_stay_weak; }));
  f.push_back(integer("channel", "ge_seed", [](auto& c) -> auto& { return c.scenario.channel.ge.seed; }));
  f.push_back(real("channel", "slot_s", [](auto& c) -> auto& { return c.scenario.channel.slot_s; }));
  // [latency]
  f.push_back(real("latency", "alpha_edge", [](auto& c) -> auto& { return c.scenario.latency.alpha_edge; }));
  f.push_back(real("latency", "beta", [](auto& c) -> auto& { return c.scenario.latency.beta; }));
  f.push_back(real("latency", "token_bits", [](auto& c) -> auto& { return c.scenario.latency.token_bits; }));
  f.push_back(real("latency", "header_bits", [](auto& c) -> auto& { return c.scenario.latency.header_bits; }));
  f.push_back(real("latency", "t_prop", [](auto& c) -> auto& { return c.scenario.latency.t_prop; }));
  f.push_back(real("latency", "t_base", [](auto& c) -> auto& { return c.scenario.latency.t_base; }));
  f.push_back(real("latency", "delta_cloud", [](auto& c) -> auto& { return c.scenario.latency.delta_cloud; }));
  f.push_back(real("latency", "t_down", [](auto& c) -> auto& { return c.scenario.latency.t_down; }));
  // [power]
  f.push_back(real("power", "p_edge_compute", [](auto& c) -> auto& { return c.scenario.power.p_edge_compute; }));
  f.push_back(real("power", "p_radio_tx", [](auto& c) -> auto& { return c.scenario.power.p_radio_tx; }));
  f.push_back(real("power", "p_radio_rx", [](auto& c) -> auto& { return c.scenario.power.p_radio_rx; }));
  f.push_back(real("power", "p_idle", [](auto& c) -> auto& { return c.scenario.power.p_idle; }));
  // [policy]
  f.push_back({"policy", "policy",
               [](Config& c, const std::string& v, const std::string& k) {
                 try {
                   c.scenario.policy = policy::Policy::parse(v);
                 } catch (const ConfigError& e) {
                   throw ConfigError(k + ": " + e.what());
                 }
               },
               [](const Config& c) -> std::optional<std::string> { return c.scenario.policy.label(); }});
  f.push_back(integer("policy", "k_max", [](auto& c) -> auto& { return c.scenario.policy_config.k_max; }));
  f.push_back(choice<policy::AcceptanceModel>(
      "policy", "acceptance_model", [](Config& c) -> auto& { return c.scenario.policy_config.acceptance_model; },
      {{"geometric", policy::AcceptanceModel::kGeometric}, {"linear", policy::AcceptanceModel::kLinear}}));
  f.push_back(
      real("policy", "fallback_threshold", [](auto& c) -> auto& { return c.scenario.policy_config.fallback_threshold; }));
  f.push_back(real("policy", "gamma0", [](auto& c) -> auto& { return c.scenario.gamma0; }));
  f.push_back(real("policy", "mu", [](auto& c) -> auto& { return c.scenario.mu; }));
  // [run]
  f.push_back({"run", "seed",
               [](Config& c, const std::string& v, const std::string& k) {
                 c.seed = to_u64(v, k);
                 c.seed_from_file = true;
               },
               [](const Config& c) -> std::optional<std::string> { return std::to_string(c.seed); }});
  f.push_back(integer("run", "tokens", [](auto& c) -> auto& { return c.scenario.token_budget; }));
  f.push_back(integer("run", "max_rounds", [](auto& c) -> auto& { return c.scenario.max_rounds; }));
  f.push_back(integer("run", "prompt_length", [](auto& c) -> auto& { return c.scenario.prompt_length; }));
  f.push_back(integer("run", "threads", [](auto& c) -> auto& { return c.threads; }));
  // [train]
  f.push_back(real("train", "lambda1", [](auto& c) -> auto& { return c.scenario.model.train.lambda1; }));
  f.push_back(real("train", "lambda2", [](auto& c) -> auto& { return c.scenario.model.train.lambda2; }));
  f.push_back(real("train", "temperature", [](auto& c) -> auto& { return c.scenario.model.train.temperature; }));
  f.push_back(real("train", "lr", [](auto& c) -> auto& { return c.scenario.model.train.lr; }));
  f.push_back(integer("train", "steps", [](auto& c) -> auto& { return c.scenario.model.train.steps; }));
  f.push_back(integer("train", "batch", [](auto& c) -> auto& { return c.scenario.model.train.batch; }));
  f.push_back(integer("train", "seq_len", [](auto& c) -> auto& { return c.scenario.model.train.seq_len; }));
  f.push_back(integer("train", "seed", [](auto& c) -> auto& { return c.scenario.model.train.seed; }));
  // [shift]
  f.push_back(real_list("shift", "magnitudes", [](auto& c) -> auto& { return c.shift.magnitudes; }));
  f.push_back(integer("shift", "prompts", [](auto& c) -> auto& { return c.shift.prompts; }));
  f.push_back(integer("shift", "prompt_length", [](auto& c) -> auto& { return c.shift.prompt_length; }));
  f.push_back(integer("shift", "k", [](auto& c) -> auto& { return c.shift.k; }));
  f.push_back(integer("shift", "rounds", [](auto& c) -> auto& { return c.shift.rounds; }));
  f.push_back({"shift", "seeds",
               [](Config& c, const std::string& v, const std::string& k) {
                 c.shift_seeds.clear();
                 for (double x : parse_number_list(v, k)) {
                   if (x < 0 || x != static_cast<double>(static_cast<std::uint64_t>(x))) {
                     throw ConfigError(k + ": seeds must be non-negative integers");
                   }
                   c.shift_seeds.push_back(static_cast<std::uint64_t>(x));
                 }
               },
               [](const Config& c) -> std::optional<std::string> {
                 std::string out;
                 for (std::uint64_t s : c.shift_seeds) out += (out.empty() ? "" : ", ") + std::to_string(s);
                 return out;
               }});
  return f;
}

void validate_shift(const Config& c) {
  if (c.shift.prompts == 0 || c.shift.prompt_length == 0) throw ConfigError("shift.prompts and shift.prompt_length must be >= 1");
  if (c.shift.k < 1 || c.shift.rounds == 0) throw ConfigError("shift.k and shift.rounds must be >= 1");
  for (double m : c.shift.magnitudes) {
    if (!(m >= 0.0)) throw ConfigError("shift.magnitudes must be >= 0");
  }
  if (c.shift_seeds.empty()) throw ConfigError("shift.seeds must not be empty");
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw ConfigError(std::string(what) + ": empty list entry");
    out.push_back(to_double(item, std::string(what)));
    start = end + 1;
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view text, std::string_view what) {
  std::vector<int> out;
  for (double v : parse_number_list(text, what)) {
    if (v != static_cast<double>(static_cast<int>(v))) {
      throw ConfigError(std::string(what) + ": expected integers, got " + fmt(v));
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Config parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  const std::vector<Field> table = fields(base_dir);
  std::map<std::string, const Field*> by_name;
  std::set<std::string> sections;
  for (const Field& f : table) {
    by_name[f.section + "." + f.key] = &f;
    sections.insert(f.section);
  }

  std::istringstream in{std::string(text)};
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  Config c;
  std::set<std::string> seen;
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    const std::string name = item.fullname();
    if (item.parents.size() != 1) throw ConfigError(name + ": keys must live in a section");
    if (!sections.contains(item.parents[0])) throw ConfigError("unknown section [" + item.parents[0] + "]");
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw ConfigError("unknown key " + name);
    if (!seen.insert(name).second) throw ConfigError(name + ": set more than once");
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
    it->second->set(c, value, name);
  }

  c.scenario.validate();
  validate_shift(c);
  if (c.scenario.latency.header_bits != 120.0) {
    c.warnings.push_back("latency.header_bits = " + fmt(c.scenario.latency.header_bits) +
                         " differs from the 120-bit wire header; round timing uses the encoded size");
  }
  if (c.scenario.latency.token_bits != 16.0) {
    c.warnings.push_back("latency.token_bits = " + fmt(c.scenario.latency.token_bits) +
                         " differs from the 16-bit wire token; round timing uses the encoded size");
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError&) {
    throw ConfigError("cannot read config file " + path.string());
  }
  return parse_config(text, path.parent_path());
}

std::string resolved_config(const Config& config) {
  std::string out;
  std::string section;
  for (const Field& f : fields({})) {
    const auto value = f.get(config);
    if (!value) continue;
    if (f.section != section) {
      out += (out.empty() ? "[" : "\n[") + f.section + "]\n";
      section = f.section;
    }
    out += f.key + " = " + *value + "\n";
  }
  return out;
}

}  // namespace edgespec::cli
