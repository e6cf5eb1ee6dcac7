// Command-line front end: single-point evaluation, parameter sweeps, preset
// emission, and the verification suite. Exit codes: 0 success, 1 configuration
// error, 2 verification failure.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lhtl/sweep.hpp"
#include "lhtl/verify.hpp"

namespace {

using namespace lhtl;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << text;
}

// "out.csv" + "n1" -> "out.n1.csv"; extensionless paths get a plain suffix.
std::string with_label(const std::string& path, const std::string& label) {
  size_t slash = path.find_last_of('/');
  size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + "." + label;
  return path.substr(0, dot) + "." + label + path.substr(dot);
}

struct Overrides {
  std::string variant, units;
  int trunc = 0;

  void apply(SweepConfig& cfg) const {
    if (variant == "printed") cfg.variant = MomentVariant::printed;
    else if (variant == "rederived") cfg.variant = MomentVariant::rederived;
    if (units == "si") cfg.units = UnitsMode::si;
    else if (units == "natural") cfg.units = UnitsMode::natural_units;
    if (trunc > 0) cfg.trunc = trunc;
    validate_config(cfg);
  }
};

using Record = std::vector<std::pair<std::string, std::optional<double>>>;

std::string record_csv(const Record& kv, const std::vector<std::string>& warnings) {
  std::string head, row;
  for (const auto& [key, val] : kv) {
    head += key;
    head += ',';
    if (val) row += detail::shortest(*val);
    row += ',';
  }
  head += "warnings\n";
  row += join_warnings(warnings);
  row += '\n';
  return head + row;
}

std::string record_json(const Record& kv, const std::vector<std::string>& warnings) {
  nlohmann::ordered_json obj;
  for (const auto& [key, val] : kv) {
    if (val) obj[key] = *val;
    else obj[key] = nullptr;
  }
  obj["warnings"] = join_warnings(warnings);
  return obj.dump(2) + "\n";
}

std::string emit_record(const Record& kv, const std::vector<std::string>& warnings,
                        const std::string& format) {
  return format == "json" ? record_json(kv, warnings) : record_csv(kv, warnings);
}

int cmd_dispersion(const SweepConfig& cfg, const std::string& out, const std::string& format) {
  Dispersion d = dispersion(cfg.circuit);
  write_output(out, emit_record({{"sigma", d.sigma}, {"beta", d.beta}}, {}, format));
  return 0;
}

int cmd_moments(const SweepConfig& cfg, const std::string& out, const std::string& format) {
  Dispersion d = dispersion(cfg.circuit);
  double F = normalization_F(cfg.circuit, cfg.units);
  ClosedFormMoments m = closed_form_moments(F, d, cfg.state, cfg.ell, cfg.variant);
  write_output(out, emit_record({{"F", m.F},
                                 {"mean_j", m.mean_j},
                                 {"mean_j2", m.mean_j2},
                                 {"var_j", m.var_j}},
                                {}, format));
  return 0;
}

int cmd_nri(const SweepConfig& cfg, const std::string& out, const std::string& format) {
  SweepConfig point = cfg;
  point.sweep.reset();
  CurvePoint pt = evaluate_point(point, 0.0);
  Dispersion d = dispersion(cfg.circuit);
  NriResult nb = nri_from_beta(d, cfg.circuit.omega, cfg.units, cfg.ell);
  write_output(out, emit_record({{"sigma", pt.sigma},
                                 {"beta", pt.beta},
                                 {"F", pt.F},
                                 {"variance", pt.variance},
                                 {"n_r_beta", nb.n_r},
                                 {"n_r_printed", pt.n_r_printed},
                                 {"n_r_rederived", pt.n_r_rederived}},
                                pt.warnings, format));
  return 0;
}

int cmd_sweep(const SweepConfig& cfg, const std::string& out, const std::string& format,
              int threads) {
  auto runs = expand_options(cfg);
  if (format == "json") {
    if (runs.size() == 1) {
      write_output(out, emit_json(run_sweep(runs[0].second, threads)));
      return 0;
    }
    nlohmann::ordered_json doc;
    for (const auto& [label, c] : runs)
      doc[label] = nlohmann::ordered_json::parse(emit_json(run_sweep(c, threads)));
    write_output(out, doc.dump(2) + "\n");
    return 0;
  }
  if (runs.size() == 1) {
    write_output(out, emit_csv(run_sweep(runs[0].second, threads)));
    return 0;
  }
  if (!out.empty()) {
    for (const auto& [label, c] : runs)
      write_output(with_label(out, label), emit_csv(run_sweep(c, threads)));
    return 0;
  }
  std::string doc;
  for (const auto& [label, c] : runs) {
    doc += "# option: " + label + "\n";
    doc += emit_csv(run_sweep(c, threads));
  }
  write_output(out, doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dispersion, quantum current moments, and negative-index curves"
               " of a lossy left-handed transmission line"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv", preset_name;
  Overrides ov;
  int threads = 1;
  bool full = false;

  auto add_shared = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "config file path, or - for stdin");
    if (needs_config) c->required();
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--variant", ov.variant, "moment formula variant")
        ->check(CLI::IsMember({"printed", "rederived"}));
    sub->add_option("--units", ov.units, "unit system")
        ->check(CLI::IsMember({"si", "natural"}));
    sub->add_option("--trunc", ov.trunc, "Fock truncation dimension")->check(CLI::Range(2, 4096));
  };

  auto* sub_disp = app.add_subcommand("dispersion", "attenuation and phase constants");
  add_shared(sub_disp, true);
  auto* sub_mom = app.add_subcommand("moments", "closed-form current moments");
  add_shared(sub_mom, true);
  auto* sub_nri = app.add_subcommand("nri", "refraction index paths at one point");
  add_shared(sub_nri, true);
  auto* sub_sweep = app.add_subcommand("sweep", "evaluate a configured parameter sweep");
  add_shared(sub_sweep, true);
  sub_sweep->add_option("--threads", threads, "sweep worker count")->check(CLI::Range(1, 256));
  auto* sub_preset = app.add_subcommand("preset", "emit a named preset as config text");
  sub_preset->add_option("name", preset_name, "fig2, fig3, or fig4")->required();
  sub_preset->add_option("--out", out_path, "output path (default stdout)");
  auto* sub_verify = app.add_subcommand("verify", "run the verification suite");
  sub_verify->add_flag("--full", full, "N=128 deep-draw level instead of quick");
  sub_verify->add_option("--out", out_path, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(sub_preset)) {
      write_output(out_path, serialize_config(preset(preset_name)));
      return 0;
    }
    if (app.got_subcommand(sub_verify)) {
      VerifyReport rep = verify_suite(full ? VerifyLevel::full : VerifyLevel::quick);
      write_output(out_path, render_report(rep));
      return rep.all_pass() ? 0 : 2;
    }
    SweepConfig cfg = parse_config(read_input(config_path));
    ov.apply(cfg);
    if (app.got_subcommand(sub_disp)) return cmd_dispersion(cfg, out_path, format);
    if (app.got_subcommand(sub_mom)) return cmd_moments(cfg, out_path, format);
    if (app.got_subcommand(sub_nri)) return cmd_nri(cfg, out_path, format);
    if (app.got_subcommand(sub_sweep)) return cmd_sweep(cfg, out_path, format, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
