#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lhtl/sweep.hpp"

using namespace lhtl;

namespace {

bool has_warning(const CurvePoint& p, const std::string& w) {
  return std::find(p.warnings.begin(), p.warnings.end(), w) != p.warnings.end();
}

bool numeric_fields_empty(const CurvePoint& p) {
  return !p.sigma && !p.beta && !p.F && !p.variance && !p.n_r_printed && !p.n_r_rederived;
}

}  // namespace

TEST_CASE("lossless sweep rows carry exact zero attenuation") {
  SweepConfig cfg;
  cfg.circuit = CircuitParams{0.0, 0.0, 398e-6, 995e-12, 4e-6, 3e9};
  cfg.state.phi = kPi / 3.0;  // keeps sin(phi) regular so the squeeze guard fires
  cfg.sweep = SweepRange{"ell", 1e-6, 2e-6, 2};
  auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sweep_value == 1e-6);
  CHECK(rows[1].sweep_value == 2e-6);
  for (const auto& r : rows) {
    REQUIRE(r.sigma.has_value());
    CHECK(*r.sigma == 0.0);
    REQUIRE(r.beta.has_value());
    CHECK_THAT(*r.beta, Catch::Matchers::WithinRel(5.2957e-4, 1e-3));
    CHECK(r.F.has_value());
    CHECK(r.variance.has_value());
    // Inversion needs a squeeze direction; the row survives with a warning.
    CHECK_FALSE(r.n_r_printed.has_value());
    CHECK_FALSE(r.n_r_rederived.has_value());
    CHECK(has_warning(r, "zero-squeeze"));
  }
}

TEST_CASE("linked division by zero yields a warning row, not a throw") {
  SweepConfig cfg = preset("fig2");
  auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 200);
  CHECK(rows[0].sweep_value == 0.0);
  CHECK(has_warning(rows[0], "link-G-division-by-zero"));
  CHECK(numeric_fields_empty(rows[0]));
  for (size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].sigma.has_value());
    CHECK(rows[k].beta.has_value());
  }
}

TEST_CASE("linked rules fire after the sweep assignment") {
  SweepConfig base = preset("fig2");
  CurvePoint pt = evaluate_point(base, 0.2);
  CircuitParams expect = base.circuit;
  expect.R = 0.2;
  expect.G = 1e-2 / 0.2;
  Dispersion d = dispersion(expect);
  REQUIRE(pt.sigma.has_value());
  REQUIRE(pt.beta.has_value());
  CHECK(*pt.sigma == d.sigma);
  CHECK(*pt.beta == d.beta);
}

TEST_CASE("out-of-domain points become warning rows and keep the grid size") {
  SweepConfig cfg;
  cfg.circuit = CircuitParams{0.5, 0.02, 398e-6, 995e-12, 4e-6, 3e9};
  cfg.state.xi_mag = 0.3;
  cfg.state.phi = kPi / 3.0;
  cfg.sweep = SweepRange{"R", -1.0, 1.0, 3};
  auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 3);
  CHECK(has_warning(rows[0], "invalid-params-R"));
  CHECK(numeric_fields_empty(rows[0]));
  CHECK(rows[1].n_r_rederived.has_value());
  CHECK(rows[2].n_r_rederived.has_value());
}

TEST_CASE("unknown sweep parameter marks the row when validation is bypassed") {
  SweepConfig cfg;
  cfg.circuit.omega = 3e9;
  cfg.sweep = SweepRange{"Q", 0.0, 1.0, 2};
  CurvePoint pt = evaluate_point(cfg, 0.5);
  CHECK(has_warning(pt, "unknown-sweep-param"));
  CHECK(numeric_fields_empty(pt));
  CHECK_THROWS_AS(run_sweep(cfg), ValidationError);
}

TEST_CASE("fixed fluctuation input makes index magnitude fall with squeeze") {
  SweepConfig cfg;
  cfg.circuit = CircuitParams{0.02, 0.02, 398e-6, 995e-12, 4e-6, 3e9};
  cfg.state.xi_mag = 1.0;
  cfg.state.phi = kPi / 3.0;
  cfg.state.n = 1;
  cfg.ell = 1e-6;
  cfg.units = UnitsMode::si;
  cfg.var_j_input = 10.0;
  cfg.var_units = VarUnits::absolute;
  cfg.sweep = SweepRange{"xi_mag", 1.0, 3.0, 20};
  auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 20);
  for (size_t k = 0; k < rows.size(); ++k) {
    REQUIRE(rows[k].n_r_rederived.has_value());
    REQUIRE(rows[k].n_r_printed.has_value());
    if (k > 0) CHECK(std::abs(*rows[k].n_r_rederived) < std::abs(*rows[k - 1].n_r_rederived));
  }
}

TEST_CASE("direction sweep endpoints degrade to singular warning rows") {
  SweepConfig cfg = preset("fig3");
  auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 200);
  for (size_t k : {size_t(0), size_t(199)}) {
    CHECK(has_warning(rows[k], "singular-direction"));
    CHECK_FALSE(rows[k].n_r_printed.has_value());
    CHECK_FALSE(rows[k].n_r_rederived.has_value());
    // Dispersion side of the row still fills in.
    CHECK(rows[k].sigma.has_value());
    CHECK(rows[k].variance.has_value());
  }
  size_t with_nri = 0;
  for (const auto& r : rows)
    if (r.n_r_rederived.has_value()) ++with_nri;
  CHECK(with_nri == 198);
}

TEST_CASE("option lists expand into one run per value") {
  SweepConfig fig3 = preset("fig3");
  auto by_n = expand_options(fig3);
  REQUIRE(by_n.size() == 3);
  CHECK(by_n[0].first == "n1");
  CHECK(by_n[1].first == "n2");
  CHECK(by_n[2].first == "n15");
  CHECK(by_n[2].second.state.n == 15);
  CHECK(by_n[0].second.n_options.empty());

  SweepConfig fig2 = preset("fig2");
  auto by_xi = expand_options(fig2);
  REQUIRE(by_xi.size() == 5);
  CHECK(by_xi[0].first == "xi1");
  CHECK(by_xi[4].first == "xi5");
  CHECK_THAT(by_xi[4].second.state.xi_mag, Catch::Matchers::WithinRel(0.25 * kPi, 1e-15));
  CHECK(by_xi[0].second.xi_options.empty());

  SweepConfig plain;
  plain.circuit.omega = 3e9;
  auto single = expand_options(plain);
  REQUIRE(single.size() == 1);
  CHECK(single[0].first.empty());
}

TEST_CASE("parallel execution reproduces the serial output byte for byte") {
  SweepConfig cfg = expand_options(preset("fig3"))[0].second;
  std::string serial_a = emit_csv(run_sweep(cfg, 1));
  std::string serial_b = emit_csv(run_sweep(cfg, 1));
  std::string parallel = emit_csv(run_sweep(cfg, 4));
  CHECK(serial_a == serial_b);
  CHECK(serial_a == parallel);
}

TEST_CASE("csv output has a fixed header and blank cells for missing values") {
  CHECK(emit_csv({}) == "sweep_value,sigma,beta,F,variance,n_r_printed,n_r_rederived,warnings\n");
  CurvePoint p;
  p.sweep_value = 0.5;
  p.beta = 2.0;
  p.warnings = {"a", "b"};
  std::string csv = emit_csv({p});
  CHECK(csv.find("\n0.5,,2,,,,,a;b\n") != std::string::npos);
}

TEST_CASE("json output uses null for missing values") {
  SweepConfig cfg = preset("fig2");
  auto rows = run_sweep(cfg);
  auto doc = nlohmann::json::parse(emit_json(rows));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 200);
  CHECK(doc[0]["sigma"].is_null());
  CHECK(doc[0]["warnings"].get<std::string>() == "link-G-division-by-zero");
  CHECK(doc[10]["sigma"].is_number());
  CHECK(doc[10]["sweep_value"].is_number());
}

TEST_CASE("presets are self-consistent and unknown names are rejected") {
  for (const char* name : {"fig2", "fig3", "fig4"}) {
    SweepConfig cfg = preset(name);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->count == 200);
  }
  CHECK(preset("fig4").sweep->param == "ell");
  try {
    preset("nope");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key == "preset");
  }
}

TEST_CASE("sweep without a sweep group is rejected") {
  SweepConfig cfg;
  cfg.circuit.omega = 3e9;
  try {
    run_sweep(cfg);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key == "sweep_param");
  }
}
