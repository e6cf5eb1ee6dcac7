#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>

#include "lhtl/config.hpp"

using namespace lhtl;

TEST_CASE("empty document names the missing required key") {
  try {
    parse_config("");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key == "omega");
  }
}

TEST_CASE("single required key accepts documented defaults") {
  SweepConfig cfg = parse_config("omega = 3e9\n");
  CHECK(cfg.circuit.omega == 3e9);
  CHECK(cfg.circuit.R == 0.0);
  CHECK(cfg.circuit.G == 0.0);
  CHECK(cfg.circuit.L == 398e-6);
  CHECK(cfg.circuit.C == 995e-12);
  CHECK(cfg.circuit.z0 == 4e-6);
  CHECK(cfg.ell == 1e-6);
  CHECK(cfg.trunc == 64);
  CHECK(cfg.units == UnitsMode::si);
  CHECK(cfg.variant == MomentVariant::rederived);
  CHECK_FALSE(cfg.var_j_input.has_value());
  CHECK_FALSE(cfg.sweep.has_value());
}

TEST_CASE("comments and blank lines are ignored") {
  SweepConfig cfg = parse_config("# header\n\nomega = 3e9  # trailing\n  \n# done\n");
  CHECK(cfg.circuit.omega == 3e9);
}

TEST_CASE("angle values accept a pi multiplier") {
  SweepConfig cfg = parse_config("omega = 3e9\nphi = 0.25 pi\ntheta = 0.5pi\n");
  CHECK_THAT(cfg.state.phi, Catch::Matchers::WithinRel(0.25 * kPi, 1e-15));
  CHECK_THAT(cfg.state.theta, Catch::Matchers::WithinRel(0.5 * kPi, 1e-15));
}

TEST_CASE("frequency accepts a hz suffix as cycles per second") {
  SweepConfig cfg = parse_config("omega = 1.5e9 hz\n");
  CHECK_THAT(cfg.circuit.omega, Catch::Matchers::WithinRel(2.0 * kPi * 1.5e9, 1e-15));
  CHECK_THROWS_AS(parse_config("omega = 3e9\nphi = 0.5 hz\n"), ParseError);
}

TEST_CASE("unknown keys are rejected by name") {
  try {
    parse_config("omega = 3e9\nQ = 1.0\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key == "Q");
  }
}

TEST_CASE("unknown sweep parameter is rejected by name") {
  try {
    parse_config("omega = 3e9\nsweep_param = Q\nsweep_lo = 0\nsweep_hi = 1\nsweep_count = 5\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key == "Q");
    CHECK(std::string(e.what()).find("no such parameter") != std::string::npos);
  }
}

TEST_CASE("non-numeric fields cannot be swept") {
  CHECK_THROWS_AS(
      parse_config("omega = 3e9\nsweep_param = n\nsweep_lo = 0\nsweep_hi = 1\nsweep_count = 5\n"),
      ValidationError);
}

TEST_CASE("malformed lines raise parse errors with their line number") {
  try {
    parse_config("omega = 3e9\nnot a pair\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_config("omega = abc\n"), ParseError);
  CHECK_THROWS_AS(parse_config("omega = 3e9\nomega = 4e9\n"), ParseError);
}

TEST_CASE("sweep group must be given completely") {
  CHECK_THROWS_AS(parse_config("omega = 3e9\nsweep_param = R\nsweep_lo = 0\n"), ValidationError);
  SweepConfig cfg = parse_config(
      "omega = 3e9\nsweep_param = R\nsweep_lo = 0\nsweep_hi = 2\nsweep_count = 200\n");
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->param == "R");
  CHECK(cfg.sweep->lo == 0.0);
  CHECK(cfg.sweep->hi == 2.0);
  CHECK(cfg.sweep->count == 200);
}

TEST_CASE("sweep bounds must be ordered and populated") {
  CHECK_THROWS_AS(
      parse_config("omega = 3e9\nsweep_param = R\nsweep_lo = 2\nsweep_hi = 1\nsweep_count = 5\n"),
      ValidationError);
  CHECK_THROWS_AS(
      parse_config("omega = 3e9\nsweep_param = R\nsweep_lo = 0\nsweep_hi = 1\nsweep_count = 1\n"),
      ValidationError);
}

TEST_CASE("linked rules parse into couplings") {
  SweepConfig cfg = parse_config("omega = 3e9\nlink_G = 1e-2/R\nlink_C = 2.5*L\nR = 0.5\n");
  REQUIRE(cfg.links.size() == 2);
  CHECK(cfg.links[0].target == "G");
  CHECK(cfg.links[0].coeff == 1e-2);
  CHECK(cfg.links[0].op == '/');
  CHECK(cfg.links[0].source == "R");
  CHECK(cfg.links[1].target == "C");
  CHECK(cfg.links[1].op == '*');
}

TEST_CASE("linked rule cycles are rejected") {
  CHECK_THROWS_AS(parse_config("omega = 3e9\nlink_R = 1.0*G\nlink_G = 1.0*R\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("omega = 3e9\nlink_G = 2.0*G\n"), ValidationError);
}

TEST_CASE("linked target cannot shadow the sweep parameter") {
  CHECK_THROWS_AS(
      parse_config("omega = 3e9\nsweep_param = R\nsweep_lo = 0\nsweep_hi = 2\nsweep_count = 5\n"
                    "link_R = 1.0*G\n"),
      ValidationError);
}

TEST_CASE("option lists parse") {
  SweepConfig cfg = parse_config("omega = 3e9\nn_options = 1, 2, 15\nxi_options = 0.05 pi, 0.25pi\n");
  CHECK(cfg.n_options == std::vector<int>{1, 2, 15});
  REQUIRE(cfg.xi_options.size() == 2);
  CHECK_THAT(cfg.xi_options[0], Catch::Matchers::WithinRel(0.05 * kPi, 1e-15));
  CHECK_THAT(cfg.xi_options[1], Catch::Matchers::WithinRel(0.25 * kPi, 1e-15));
}

TEST_CASE("out-of-range state angles are rejected") {
  CHECK_THROWS_AS(parse_config("omega = 3e9\ntheta = 6.3\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("omega = 3e9\nphi = 2 pi\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("omega = 3e9\nn = -1\n"), ValidationError);
}

TEST_CASE("serialization round-trips a fully featured config") {
  SweepConfig cfg = parse_config(
      "omega = 3e9\nR = 0.5\nG = 0.02\nalpha_mag = 1.25\ntheta = 0.3\nxi_mag = 0.4\n"
      "phi = 0.3333 pi\nn = 2\nell = 1e-6\nvar_j_input = 10\nvar_j_units = zero_point\n"
      "units = natural\nvariant = printed\ntrunc = 96\n"
      "sweep_param = R\nsweep_lo = 0\nsweep_hi = 2\nsweep_count = 200\n"
      "link_G = 1e-2/R\nn_options = 1, 2, 15\n");
  std::string text = serialize_config(cfg);
  SweepConfig back = parse_config(text);
  CHECK(back == cfg);
  CHECK(serialize_config(back) == text);
}

TEST_CASE("serialization is deterministic and round-trip exact on random configs") {
  std::mt19937_64 g(61);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); };
  const std::vector<std::string> fields(detail::double_fields().begin(),
                                        detail::double_fields().end());
  for (int i = 0; i < 50; ++i) {
    SweepConfig cfg;
    cfg.circuit.R = u(0.0, 5.0);
    cfg.circuit.G = u(0.0, 5.0);
    cfg.circuit.L = std::pow(10.0, u(-7.0, -3.0));
    cfg.circuit.C = std::pow(10.0, u(-12.0, -9.0));
    cfg.circuit.z0 = std::pow(10.0, u(-6.0, -4.0));
    cfg.circuit.omega = std::pow(10.0, u(8.0, 10.0));
    cfg.state = DsfsParams{u(0.0, 3.0), u(0.0, 2.0 * kPi), u(0.0, 2.0), u(0.0, 2.0 * kPi),
                           int(g() % 21)};
    cfg.ell = std::pow(10.0, u(-7.0, -5.0));
    if (g() % 2) {
      cfg.var_j_input = u(0.0, 20.0);
      cfg.var_units = (g() % 2) ? VarUnits::absolute : VarUnits::zero_point;
    }
    cfg.units = (g() % 2) ? UnitsMode::si : UnitsMode::natural_units;
    cfg.variant = (g() % 2) ? MomentVariant::printed : MomentVariant::rederived;
    cfg.trunc = 2 + int(g() % 255);
    std::string swept;
    if (g() % 2) {
      swept = fields[g() % fields.size()];
      cfg.sweep = SweepRange{swept, u(0.0, 1.0), u(1.5, 9.0), 2 + int(g() % 300)};
    }
    if (g() % 3 == 0) {
      std::string target = fields[g() % fields.size()];
      std::string source = fields[g() % fields.size()];
      if (target != swept && source != target)
        cfg.links.push_back(LinkedRule{target, u(0.5, 2.0), (g() % 2) ? '*' : '/', source});
    }
    if (g() % 4 == 0) cfg.n_options = {int(g() % 5), int(g() % 20)};
    if (g() % 4 == 1) cfg.xi_options = {u(0.0, 2.0), u(2.0, 9.0)};

    std::string text = serialize_config(cfg);
    SweepConfig back = parse_config(text);
    REQUIRE(back == cfg);
    REQUIRE(serialize_config(back) == text);
  }
}
