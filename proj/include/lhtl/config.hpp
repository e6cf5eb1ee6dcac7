#pragma once

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lhtl/types.hpp"

namespace lhtl {

enum class VarUnits { absolute, zero_point };

struct SweepRange {
  std::string param;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  bool operator==(const SweepRange&) const = default;
};

// target := coeff op source, evaluated after the sweep value is assigned.
struct LinkedRule {
  std::string target;
  double coeff = 0.0;
  char op = '*';  // '*' or '/'
  std::string source;
  bool operator==(const LinkedRule&) const = default;
};

struct SweepConfig {
  CircuitParams circuit;
  DsfsParams state;
  double ell = 1e-6;
  std::optional<double> var_j_input;
  VarUnits var_units = VarUnits::absolute;
  UnitsMode units = UnitsMode::si;
  MomentVariant variant = MomentVariant::rederived;
  int trunc = 64;
  std::optional<SweepRange> sweep;
  std::vector<LinkedRule> links;
  std::vector<int> n_options;
  std::vector<double> xi_options;

  bool operator==(const SweepConfig& o) const {
    return circuit.R == o.circuit.R && circuit.G == o.circuit.G && circuit.L == o.circuit.L &&
           circuit.C == o.circuit.C && circuit.z0 == o.circuit.z0 &&
           circuit.omega == o.circuit.omega && state.alpha_mag == o.state.alpha_mag &&
           state.theta == o.state.theta && state.xi_mag == o.state.xi_mag &&
           state.phi == o.state.phi && state.n == o.state.n && ell == o.ell &&
           var_j_input == o.var_j_input && var_units == o.var_units && units == o.units &&
           variant == o.variant && trunc == o.trunc && sweep == o.sweep && links == o.links &&
           n_options == o.n_options && xi_options == o.xi_options;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// value := number [pi|hz]; `pi` multiplies by pi, `hz` (omega only) by 2*pi.
inline double parse_number(std::string_view raw, int line, bool allow_hz) {
  std::string_view s = trim(raw);
  if (s.empty()) throw ParseError(line, "empty value");
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr == begin) throw ParseError(line, "malformed number '" + std::string(s) + "'");
  std::string_view rest = trim(std::string_view(ptr, size_t(end - ptr)));
  if (rest.empty()) return v;
  if (rest == "pi") return v * kPi;
  if (rest == "hz") {
    if (!allow_hz) throw ParseError(line, "'hz' suffix is only valid for omega");
    return v * 2.0 * kPi;
  }
  throw ParseError(line, "unexpected trailing token '" + std::string(rest) + "'");
}

inline long parse_int(std::string_view raw, int line) {
  std::string_view s = trim(raw);
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "malformed integer '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline const std::set<std::string>& double_fields() {
  static const std::set<std::string> f = {"R",     "G",     "L",         "C",   "z0",
                                          "omega", "alpha_mag", "theta", "xi_mag", "phi",
                                          "ell",   "var_j_input"};
  return f;
}

}  // namespace detail

inline bool set_config_field(SweepConfig& c, const std::string& name, double v) {
  if (name == "R") c.circuit.R = v;
  else if (name == "G") c.circuit.G = v;
  else if (name == "L") c.circuit.L = v;
  else if (name == "C") c.circuit.C = v;
  else if (name == "z0") c.circuit.z0 = v;
  else if (name == "omega") c.circuit.omega = v;
  else if (name == "alpha_mag") c.state.alpha_mag = v;
  else if (name == "theta") c.state.theta = v;
  else if (name == "xi_mag") c.state.xi_mag = v;
  else if (name == "phi") c.state.phi = v;
  else if (name == "ell") c.ell = v;
  else if (name == "var_j_input") c.var_j_input = v;
  else return false;
  return true;
}

inline void validate_config(const SweepConfig& cfg) {
  if (!(cfg.circuit.omega > 0)) throw ValidationError("omega", "missing required key");
  cfg.circuit.validate();
  cfg.state.validate();
  if (!(cfg.ell > 0) || !std::isfinite(cfg.ell)) throw ValidationError("ell", "must be finite and > 0");
  if (cfg.trunc < 2) throw ValidationError("trunc", "must be >= 2");
  if (cfg.var_j_input && (!std::isfinite(*cfg.var_j_input) || *cfg.var_j_input < 0))
    throw ValidationError("var_j_input", "must be finite and >= 0");
  for (int n : cfg.n_options)
    if (n < 0) throw ValidationError("n_options", "entries must be >= 0");
  for (double x : cfg.xi_options)
    if (!std::isfinite(x) || x < 0) throw ValidationError("xi_options", "entries must be finite and >= 0");

  if (cfg.sweep) {
    const auto& sw = *cfg.sweep;
    if (!detail::double_fields().count(sw.param)) {
      if (sw.param == "n" || sw.param == "trunc" || sw.param == "units" || sw.param == "variant" ||
          sw.param == "var_j_units")
        throw ValidationError(sw.param, "not sweepable");
      throw ValidationError(sw.param, "no such parameter");
    }
    if (!(sw.lo < sw.hi)) throw ValidationError("sweep_lo", "must satisfy lo < hi");
    if (sw.count < 2) throw ValidationError("sweep_count", "must be >= 2");
  }

  std::set<std::string> targets;
  for (const auto& rule : cfg.links) {
    if (!detail::double_fields().count(rule.target))
      throw ValidationError(rule.target, "no such parameter");
    if (!detail::double_fields().count(rule.source))
      throw ValidationError(rule.source, "no such parameter");
    if (!std::isfinite(rule.coeff)) throw ValidationError("link_" + rule.target, "coefficient must be finite");
    if (rule.op != '*' && rule.op != '/') throw ValidationError("link_" + rule.target, "operator must be * or /");
    if (!targets.insert(rule.target).second)
      throw ValidationError("link_" + rule.target, "duplicate linked target");
    if (cfg.sweep && rule.target == cfg.sweep->param)
      throw ValidationError("link_" + rule.target, "linked target cannot be the sweep parameter");
  }
  // Rules must be acyclic: walking target -> source must terminate.
  for (const auto& rule : cfg.links) {
    std::set<std::string> seen = {rule.target};
    std::string cur = rule.source;
    while (true) {
      if (seen.count(cur)) throw ValidationError("link_" + rule.target, "linked rules form a cycle");
      seen.insert(cur);
      auto next = std::find_if(cfg.links.begin(), cfg.links.end(),
                               [&](const LinkedRule& r) { return r.target == cur; });
      if (next == cfg.links.end()) break;
      cur = next->source;
    }
  }
}

inline SweepConfig parse_config(const std::string& text) {
  SweepConfig cfg;
  bool have_omega = false;
  std::optional<std::string> sweep_param;
  std::optional<double> sweep_lo, sweep_hi;
  std::optional<int> sweep_count;
  std::set<std::string> seen_keys;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected key = value");
    std::string key(detail::trim(line.substr(0, eq)));
    std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "missing key before '='");
    if (value.empty()) throw ParseError(lineno, "empty value");
    if (!seen_keys.insert(key).second) throw ParseError(lineno, "duplicate key '" + key + "'");

    if (key == "omega") {
      cfg.circuit.omega = detail::parse_number(value, lineno, true);
      have_omega = true;
    } else if (detail::double_fields().count(key)) {
      double v = detail::parse_number(value, lineno, false);
      if (key == "var_j_input") cfg.var_j_input = v;
      else set_config_field(cfg, key, v);
    } else if (key == "n") {
      cfg.state.n = int(detail::parse_int(value, lineno));
    } else if (key == "trunc") {
      cfg.trunc = int(detail::parse_int(value, lineno));
    } else if (key == "units") {
      if (value == "si") cfg.units = UnitsMode::si;
      else if (value == "natural") cfg.units = UnitsMode::natural_units;
      else throw ValidationError("units", "must be si or natural");
    } else if (key == "variant") {
      if (value == "printed") cfg.variant = MomentVariant::printed;
      else if (value == "rederived") cfg.variant = MomentVariant::rederived;
      else throw ValidationError("variant", "must be printed or rederived");
    } else if (key == "var_j_units") {
      if (value == "absolute") cfg.var_units = VarUnits::absolute;
      else if (value == "zero_point") cfg.var_units = VarUnits::zero_point;
      else throw ValidationError("var_j_units", "must be absolute or zero_point");
    } else if (key == "sweep_param") {
      sweep_param = std::string(value);
    } else if (key == "sweep_lo") {
      sweep_lo = detail::parse_number(value, lineno, false);
    } else if (key == "sweep_hi") {
      sweep_hi = detail::parse_number(value, lineno, false);
    } else if (key == "sweep_count") {
      sweep_count = int(detail::parse_int(value, lineno));
    } else if (key == "n_options") {
      for (auto item : detail::split(value, ','))
        cfg.n_options.push_back(int(detail::parse_int(item, lineno)));
    } else if (key == "xi_options") {
      for (auto item : detail::split(value, ','))
        cfg.xi_options.push_back(detail::parse_number(item, lineno, false));
    } else if (key.starts_with("link_")) {
      std::string target = key.substr(5);
      std::string_view v = detail::trim(value);
      auto star = v.find('*');
      auto slash = v.find('/');
      size_t pos;
      char op;
      if (star != std::string_view::npos && (slash == std::string_view::npos || star < slash)) {
        pos = star; op = '*';
      } else if (slash != std::string_view::npos) {
        pos = slash; op = '/';
      } else {
        throw ParseError(lineno, "linked rule must be '<coeff>*<param>' or '<coeff>/<param>'");
      }
      LinkedRule rule;
      rule.target = target;
      rule.op = op;
      rule.coeff = detail::parse_number(v.substr(0, pos), lineno, false);
      rule.source = std::string(detail::trim(v.substr(pos + 1)));
      if (rule.source.empty()) throw ParseError(lineno, "linked rule missing source parameter");
      cfg.links.push_back(rule);
    } else {
      throw ValidationError(key, "no such parameter");
    }
  }

  if (!have_omega) throw ValidationError("omega", "missing required key");
  int given = int(bool(sweep_param)) + int(bool(sweep_lo)) + int(bool(sweep_hi)) + int(bool(sweep_count));
  if (given != 0 && given != 4)
    throw ValidationError("sweep_param", "sweep_param, sweep_lo, sweep_hi, sweep_count must appear together");
  if (given == 4) cfg.sweep = SweepRange{*sweep_param, *sweep_lo, *sweep_hi, *sweep_count};
  validate_config(cfg);
  return cfg;
}

inline std::string serialize_config(const SweepConfig& cfg) {
  std::ostringstream out;
  auto num = [](double v) { return detail::shortest(v); };
  out << "omega = " << num(cfg.circuit.omega) << "\n";
  out << "R = " << num(cfg.circuit.R) << "\n";
  out << "G = " << num(cfg.circuit.G) << "\n";
  out << "L = " << num(cfg.circuit.L) << "\n";
  out << "C = " << num(cfg.circuit.C) << "\n";
  out << "z0 = " << num(cfg.circuit.z0) << "\n";
  out << "alpha_mag = " << num(cfg.state.alpha_mag) << "\n";
  out << "theta = " << num(cfg.state.theta) << "\n";
  out << "xi_mag = " << num(cfg.state.xi_mag) << "\n";
  out << "phi = " << num(cfg.state.phi) << "\n";
  out << "n = " << cfg.state.n << "\n";
  out << "ell = " << num(cfg.ell) << "\n";
  if (cfg.var_j_input) out << "var_j_input = " << num(*cfg.var_j_input) << "\n";
  out << "var_j_units = " << (cfg.var_units == VarUnits::absolute ? "absolute" : "zero_point") << "\n";
  out << "units = " << (cfg.units == UnitsMode::si ? "si" : "natural") << "\n";
  out << "variant = " << (cfg.variant == MomentVariant::printed ? "printed" : "rederived") << "\n";
  out << "trunc = " << cfg.trunc << "\n";
  if (cfg.sweep) {
    out << "sweep_param = " << cfg.sweep->param << "\n";
    out << "sweep_lo = " << num(cfg.sweep->lo) << "\n";
    out << "sweep_hi = " << num(cfg.sweep->hi) << "\n";
    out << "sweep_count = " << cfg.sweep->count << "\n";
  }
  for (const auto& rule : cfg.links)
    out << "link_" << rule.target << " = " << num(rule.coeff) << rule.op << rule.source << "\n";
  if (!cfg.n_options.empty()) {
    out << "n_options = ";
    for (size_t i = 0; i < cfg.n_options.size(); ++i)
      out << (i ? "," : "") << cfg.n_options[i];
    out << "\n";
  }
  if (!cfg.xi_options.empty()) {
    out << "xi_options = ";
    for (size_t i = 0; i < cfg.xi_options.size(); ++i)
      out << (i ? "," : "") << num(cfg.xi_options[i]);
    out << "\n";
  }
  return out.str();
}

}  // namespace lhtl
