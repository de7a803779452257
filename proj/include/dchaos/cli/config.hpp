#pragma once

// Run configuration: a flat table of dotted keys with typed defaults.
// Config files hold `key = value` lines with '#' comments; command-line
// flags are applied on top through the same setter.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dchaos/error.hpp"

namespace dchaos::cli {

enum class ValueType { integer, real, integer_list, real_list, choice, boolean, text };

struct KeyDef {
  std::string_view name;
  ValueType type;
  std::string_view fallback;
  std::vector<std::string_view> choices{};
  bool optional = false;  // may be left empty
};

inline const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table{
      {"system.kind", ValueType::choice, "fullshift", {"fullshift", "tent", "logistic", "odometer", "zero-entropy"}},
      {"system.arity", ValueType::integer, "2"},
      {"system.probabilities", ValueType::real_list, "", {}, true},
      {"system.parameter", ValueType::real, "2"},
      {"system.coding_depth", ValueType::integer, "1"},
      {"system.q", ValueType::integer_list, "2,2,2"},
      {"system.offset", ValueType::integer, "0"},
      {"horizon", ValueType::integer, "1000"},
      {"seed", ValueType::integer, "1"},
      {"seeds", ValueType::integer_list, "", {}, true},
      {"metric", ValueType::choice, "hamming", {"hamming", "cantor", "absolute"}},
      {"coupling", ValueType::choice, "independent", {"independent", "explicit-witness", "same-fiber"}},
      {"witness", ValueType::choice, "DC3", {"LY", "DC1", "DC1half", "DC2", "DC3"}},
      {"pairs", ValueType::integer, "1"},
      {"thresholds.tau_one", ValueType::real, "0.05"},
      {"thresholds.tau_zero", ValueType::real, "0.05"},
      {"thresholds.eta_grid", ValueType::real_list, "0.5,0.75,0.9"},
      {"thresholds.eta_min", ValueType::real, "0.05"},
      {"thresholds.gap", ValueType::real, "0.1"},
      {"thresholds.burn_in", ValueType::integer, "", {}, true},
      {"thresholds.grid", ValueType::choice, "geometric", {"geometric", "dense"}},
      {"partition.depth", ValueType::integer, "4"},
      {"scan.size", ValueType::integer, "8"},
      {"scan.target", ValueType::choice, "DC2", {"LY", "DC1", "DC1half", "DC2", "DC3", "pk", "pk+"}},
      {"scan.allow_singleton", ValueType::boolean, "true"},
      {"forge.dump", ValueType::choice, "params", {"params", "blocks", "points"}},
      {"forge.level", ValueType::integer, "0"},
      {"forge.count", ValueType::integer, "4"},
      {"entropy.ell", ValueType::integer, "8"},
      {"pipka.eta", ValueType::real_list, "0.81"},
      {"pipka.h", ValueType::real, "1"},
      {"pipka.card", ValueType::integer, "2"},
      {"pipka.epsilon_grid", ValueType::real_list, "0.005,0.01,0.02,0.05,0.1"},
      {"ball.n", ValueType::integer_list, "8,10,12"},
      {"ball.m", ValueType::integer_list, "2,3"},
      {"ball.eta", ValueType::real_list, "0.25,0.5,0.75"},
      {"ball.h", ValueType::real, "1"},
      {"ball.card", ValueType::integer, "2"},
      {"ball.delta", ValueType::real, "0.01"},
      {"ball.guard", ValueType::integer, "20"},
      {"ball.a0", ValueType::choice, "zeros", {"zeros", "alternating"}},
      {"verify.suite", ValueType::choice, "pi-bijection", {"pi-bijection", "percentage", "scheme", "entropy-zero"}},
      {"output.path", ValueType::text, "", {}, true},
      {"output.format", ValueType::choice, "csv", {"csv", "svg"}},
  };
  return table;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::string closest_key(std::string_view key) {
  std::string best;
  std::size_t best_d = SIZE_MAX;
  for (const auto& def : key_table()) {
    const std::size_t d = edit_distance(key, def.name);
    if (d < best_d) {
      best_d = d;
      best = std::string(def.name);
    }
  }
  return best;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

inline bool parse_integer(std::string_view s, std::int64_t& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

inline bool parse_real(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

inline bool value_fits(const KeyDef& def, std::string_view v) {
  if (v.empty()) return def.optional;
  std::int64_t i = 0;
  double r = 0.0;
  switch (def.type) {
    case ValueType::integer: return parse_integer(v, i);
    case ValueType::real: return parse_real(v, r);
    case ValueType::integer_list:
      return std::ranges::all_of(split_list(v), [&](std::string_view x) { return parse_integer(x, i); });
    case ValueType::real_list:
      return std::ranges::all_of(split_list(v), [&](std::string_view x) { return parse_real(x, r); });
    case ValueType::choice: return std::ranges::find(def.choices, v) != def.choices.end();
    case ValueType::boolean: return v == "true" || v == "false";
    case ValueType::text: return true;
  }
  return false;
}

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> values;

  RunConfig() {
    for (const auto& def : key_table()) values.emplace(def.name, def.fallback);
  }

  static const KeyDef& definition(std::string_view key) {
    for (const auto& def : key_table())
      if (def.name == key) return def;
    throw Error(ErrorKind::unknown_key, "unknown key '" + std::string(key) + "' (did you mean '" + closest_key(key) + "'?)");
  }

  void set(std::string_view key, std::string_view value) {
    const KeyDef& def = definition(key);
    const std::string v(trim(value));
    if (!value_fits(def, v)) {
      std::string msg = "invalid value '" + v + "' for " + std::string(key);
      if (def.type == ValueType::choice) {
        msg += " (expected one of:";
        for (auto c : def.choices) msg += " " + std::string(c);
        msg += ")";
      }
      throw Error(ErrorKind::parse, msg);
    }
    values[std::string(key)] = v;
  }

  const std::string& get(std::string_view key) const {
    definition(key);
    return values.at(std::string(key));
  }
  bool has(std::string_view key) const { return !get(key).empty(); }

  std::int64_t integer(std::string_view key) const {
    std::int64_t v = 0;
    parse_integer(get(key), v);
    return v;
  }
  double real(std::string_view key) const {
    double v = 0.0;
    parse_real(get(key), v);
    return v;
  }
  bool boolean(std::string_view key) const { return get(key) == "true"; }
  std::vector<std::int64_t> integers(std::string_view key) const {
    std::vector<std::int64_t> out;
    if (!has(key)) return out;
    for (auto s : split_list(get(key))) {
      std::int64_t v = 0;
      parse_integer(s, v);
      out.push_back(v);
    }
    return out;
  }
  std::vector<double> reals(std::string_view key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    for (auto s : split_list(get(key))) {
      double v = 0.0;
      parse_real(s, v);
      out.push_back(v);
    }
    return out;
  }

  /// `key = value` lines in key order, the form load_config reads back.
  std::vector<std::string> serialize() const {
    std::vector<std::string> lines{"command = " + command};
    for (const auto& [k, v] : values) lines.push_back(k + " = " + v);
    return lines;
  }
};

/// Applies a config text to cfg. Errors name the 1-based line.
inline void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos || line.find('=', eq + 1) != std::string_view::npos)
      throw Error(ErrorKind::parse, where + "expected `key = value`, got '" + std::string(line) + "'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const bool key_ok = !key.empty() && std::ranges::all_of(key, [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    });
    if (!key_ok || value.empty())
      throw Error(ErrorKind::parse, where + "expected `key = value`, got '" + std::string(line) + "'");
    try {
      cfg.set(key, value);
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.detail());
    }
  }
}

inline RunConfig load_config(const std::string& path, RunConfig cfg = {}) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
  return cfg;
}

}  // namespace dchaos::cli
