#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "lhtl/circuit.hpp"
#include "lhtl/config.hpp"
#include "lhtl/moments.hpp"
#include "lhtl/nri.hpp"
#include "lhtl/types.hpp"

namespace lhtl {

struct CurvePoint {
  double sweep_value = 0.0;
  std::optional<double> sigma, beta, F, variance, n_r_printed, n_r_rederived;
  std::vector<std::string> warnings;

  bool operator==(const CurvePoint&) const = default;
};

namespace detail {

inline std::optional<double> get_config_field(const SweepConfig& c, const std::string& name) {
  if (name == "R") return c.circuit.R;
  if (name == "G") return c.circuit.G;
  if (name == "L") return c.circuit.L;
  if (name == "C") return c.circuit.C;
  if (name == "z0") return c.circuit.z0;
  if (name == "omega") return c.circuit.omega;
  if (name == "alpha_mag") return c.state.alpha_mag;
  if (name == "theta") return c.state.theta;
  if (name == "xi_mag") return c.state.xi_mag;
  if (name == "phi") return c.state.phi;
  if (name == "ell") return c.ell;
  if (name == "var_j_input") return c.var_j_input;
  return std::nullopt;
}

}  // namespace detail

// One sweep sample. Failures surface as warnings on the row, never as thrown
// errors, so a sweep always yields exactly `count` rows.
inline CurvePoint evaluate_point(const SweepConfig& base, double value) {
  CurvePoint pt;
  pt.sweep_value = value;
  SweepConfig c = base;
  if (c.sweep && !set_config_field(c, c.sweep->param, value)) {
    pt.warnings.push_back("unknown-sweep-param");
    return pt;
  }

  // Linked rules fire after the sweep assignment; sources resolved in
  // dependency order (validated acyclic).
  std::vector<LinkedRule> pending = c.links;
  while (!pending.empty()) {
    size_t before = pending.size();
    for (auto it = pending.begin(); it != pending.end();) {
      bool source_pending = false;
      for (const auto& other : pending)
        if (&other != &*it && other.target == it->source) source_pending = true;
      if (source_pending) {
        ++it;
        continue;
      }
      auto src = detail::get_config_field(c, it->source);
      if (!src) {
        pt.warnings.push_back("link-" + it->target + "-unset-source");
        return pt;
      }
      double v;
      if (it->op == '*') {
        v = it->coeff * *src;
      } else {
        if (*src == 0.0) {
          pt.warnings.push_back("link-" + it->target + "-division-by-zero");
          return pt;
        }
        v = it->coeff / *src;
      }
      set_config_field(c, it->target, v);
      it = pending.erase(it);
    }
    if (pending.size() == before) break;  // unreachable once validated acyclic
  }

  try {
    c.circuit.validate();
    c.state.validate();
    if (!(c.ell > 0)) throw ValidationError("ell", "must be > 0");
  } catch (const ValidationError& e) {
    pt.warnings.push_back("invalid-params-" + e.key);
    return pt;
  }

  Dispersion d = dispersion(c.circuit);
  pt.sigma = d.sigma;
  pt.beta = d.beta;
  double F = normalization_F(c.circuit, c.units);
  pt.F = F;

  double var_used;
  if (c.var_j_input) {
    var_used = (c.var_units == VarUnits::absolute)
                   ? *c.var_j_input
                   : *c.var_j_input * F * F * std::exp(-2.0 * d.sigma * c.ell);
  } else {
    var_used = variance(F, d, c.state, c.ell, c.variant);
  }
  pt.variance = var_used;

  for (MomentVariant v : {MomentVariant::printed, MomentVariant::rederived}) {
    std::optional<double>& slot =
        (v == MomentVariant::printed) ? pt.n_r_printed : pt.n_r_rederived;
    try {
      NriResult r = nri_from_fluctuation(var_used, c.circuit, c.state, c.ell, v, c.units, base.ell);
      slot = r.n_r;
      if (!r.small_angle_ok) {
        std::string w = "large-angle";
        if (std::find(pt.warnings.begin(), pt.warnings.end(), w) == pt.warnings.end())
          pt.warnings.push_back(w);
      }
    } catch (const SingularDirection&) {
      std::string w = "singular-direction";
      if (std::find(pt.warnings.begin(), pt.warnings.end(), w) == pt.warnings.end())
        pt.warnings.push_back(w);
    } catch (const ZeroSqueeze&) {
      std::string w = "zero-squeeze";
      if (std::find(pt.warnings.begin(), pt.warnings.end(), w) == pt.warnings.end())
        pt.warnings.push_back(w);
    } catch (const ValidationError& e) {
      pt.warnings.push_back("invalid-params-" + e.key);
    }
  }
  return pt;
}

inline std::vector<CurvePoint> run_sweep(const SweepConfig& cfg, int threads = 1) {
  validate_config(cfg);
  if (!cfg.sweep) throw ValidationError("sweep_param", "missing required key for a sweep");
  const auto& sw = *cfg.sweep;
  std::vector<CurvePoint> pts(size_t(sw.count));
  auto value_at = [&](int k) { return sw.lo + (sw.hi - sw.lo) * double(k) / double(sw.count - 1); };
  if (threads <= 1) {
    for (int k = 0; k < sw.count; ++k) pts[size_t(k)] = evaluate_point(cfg, value_at(k));
    return pts;
  }
  // Points are independent and rows are written to disjoint slots, so the
  // assembled output is identical to the serial order.
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int k = t; k < sw.count; k += threads) pts[size_t(k)] = evaluate_point(cfg, value_at(k));
    });
  }
  for (auto& th : pool) th.join();
  return pts;
}

inline SweepConfig preset(const std::string& name) {
  SweepConfig cfg;
  cfg.circuit.omega = 3e9;
  cfg.circuit.L = 398e-6;
  cfg.circuit.C = 995e-12;
  cfg.circuit.z0 = 4e-6;
  cfg.ell = 1e-6;
  cfg.trunc = 64;
  cfg.units = UnitsMode::natural_units;
  cfg.variant = MomentVariant::rederived;
  cfg.var_j_input = 10.0;
  cfg.var_units = VarUnits::absolute;

  if (name == "fig2") {
    cfg.state.phi = kPi / 3.0;
    cfg.state.n = 2;
    cfg.state.xi_mag = 0.05 * kPi;
    // Uniform 0.05*pi ladder for the squeeze magnitude options.
    cfg.xi_options = {0.05 * kPi, 0.10 * kPi, 0.15 * kPi, 0.20 * kPi, 0.25 * kPi};
    cfg.circuit.R = 0.5;
    cfg.circuit.G = 0.02;
    cfg.sweep = SweepRange{"R", 0.0, 2.0, 200};
    cfg.links.push_back(LinkedRule{"G", 1e-2, '/', "R"});
  } else if (name == "fig3") {
    cfg.state.xi_mag = 2.8 * kPi;
    cfg.circuit.G = 0.2;
    cfg.circuit.R = 0.2;
    cfg.state.n = 1;
    cfg.n_options = {1, 2, 15};
    cfg.state.phi = kPi / 3.0;
    cfg.sweep = SweepRange{"phi", 0.0, kPi, 200};
  } else if (name == "fig4") {
    cfg.state.xi_mag = 2.8 * kPi;
    cfg.circuit.G = 0.02;
    cfg.circuit.R = 0.02;
    cfg.state.n = 5;
    cfg.state.phi = kPi / 5.0;
    cfg.sweep = SweepRange{"ell", 2e-8, 4e-6, 200};
  } else {
    throw ValidationError("preset", "unknown preset '" + name + "'");
  }
  validate_config(cfg);
  return cfg;
}

// Option lists multiply a preset into one run per option value.
inline std::vector<std::pair<std::string, SweepConfig>> expand_options(const SweepConfig& cfg) {
  std::vector<std::pair<std::string, SweepConfig>> out;
  if (!cfg.n_options.empty()) {
    for (int n : cfg.n_options) {
      SweepConfig c = cfg;
      c.state.n = n;
      c.n_options.clear();
      out.emplace_back("n" + std::to_string(n), c);
    }
  } else if (!cfg.xi_options.empty()) {
    for (size_t i = 0; i < cfg.xi_options.size(); ++i) {
      SweepConfig c = cfg;
      c.state.xi_mag = cfg.xi_options[i];
      c.xi_options.clear();
      out.emplace_back("xi" + std::to_string(i + 1), c);
    }
  } else {
    out.emplace_back("", cfg);
  }
  return out;
}

inline std::string join_warnings(const std::vector<std::string>& w) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ';';
    out += w[i];
  }
  return out;
}

inline std::string emit_csv(const std::vector<CurvePoint>& pts) {
  std::string out = "sweep_value,sigma,beta,F,variance,n_r_printed,n_r_rederived,warnings\n";
  auto cell = [](const std::optional<double>& v) { return v ? detail::shortest(*v) : std::string(); };
  for (const auto& p : pts) {
    out += detail::shortest(p.sweep_value);
    out += ',';
    out += cell(p.sigma); out += ',';
    out += cell(p.beta); out += ',';
    out += cell(p.F); out += ',';
    out += cell(p.variance); out += ',';
    out += cell(p.n_r_printed); out += ',';
    out += cell(p.n_r_rederived); out += ',';
    out += join_warnings(p.warnings);
    out += '\n';
  }
  return out;
}

inline std::string emit_json(const std::vector<CurvePoint>& pts) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto cell = [](nlohmann::ordered_json& row, const char* key, const std::optional<double>& v) {
    if (v) row[key] = *v;
    else row[key] = nullptr;
  };
  for (const auto& p : pts) {
    nlohmann::ordered_json row;
    row["sweep_value"] = p.sweep_value;
    cell(row, "sigma", p.sigma);
    cell(row, "beta", p.beta);
    cell(row, "F", p.F);
    cell(row, "variance", p.variance);
    cell(row, "n_r_printed", p.n_r_printed);
    cell(row, "n_r_rederived", p.n_r_rederived);
    row["warnings"] = join_warnings(p.warnings);
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

}  // namespace lhtl
