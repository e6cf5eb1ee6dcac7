#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "lhtl/circuit.hpp"
#include "lhtl/config.hpp"
#include "lhtl/fock.hpp"
#include "lhtl/matexp.hpp"
#include "lhtl/moments.hpp"
#include "lhtl/nri.hpp"
#include "lhtl/sweep.hpp"
#include "lhtl/types.hpp"

namespace lhtl {

enum class VerifyLevel { quick, full };

struct VerifyItem {
  std::string name;
  bool pass = false;
  // Expected-divergence items assert a documented discrepancy is present with
  // its known magnitude; pass means the divergence matched expectations.
  bool expected_divergence = false;
  double measured = 0.0;
  double bound = 0.0;
  double millis = 0.0;
  std::string detail;
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::quick;
  std::vector<VerifyItem> items;
  double wall_seconds = 0.0;

  bool all_pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
};

namespace detail {

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline double log_uniform(std::mt19937_64& g, double lo10, double hi10) {
  return std::pow(10.0, uniform(g, lo10, hi10));
}

inline CircuitParams random_circuit(std::mt19937_64& g, bool lossless = false) {
  CircuitParams p;
  p.R = lossless ? 0.0 : uniform(g, 0.0, 5.0);
  p.G = lossless ? 0.0 : uniform(g, 0.0, 5.0);
  p.L = log_uniform(g, -7.0, -3.0);
  p.C = log_uniform(g, -12.0, -9.0);
  p.z0 = log_uniform(g, -6.0, -4.0);
  p.omega = log_uniform(g, 8.0, 10.0);
  return p;
}

inline DsfsParams random_state(std::mt19937_64& g, double alpha_max, double xi_max, int n_max) {
  DsfsParams q;
  q.alpha_mag = uniform(g, 0.0, alpha_max);
  q.theta = uniform(g, 0.0, 2.0 * kPi);
  q.xi_mag = uniform(g, 0.0, xi_max);
  q.phi = uniform(g, 0.0, 2.0 * kPi);
  q.n = int(g() % uint64_t(n_max + 1));
  return q;
}

// Reference circuit whose scales match the presets.
inline CircuitParams bench_circuit(double R, double G) {
  CircuitParams p;
  p.R = R;
  p.G = G;
  p.L = 398e-6;
  p.C = 995e-12;
  p.z0 = 4e-6;
  p.omega = 3e9;
  return p;
}

}  // namespace detail

// Level-dependent knobs. Full keeps the documented 1000-draw budget for
// closed-form checks; draws that need an operator exponential per sample are
// capped lower to hold the wall time.
struct VerifyParams {
  int N;
  int draws_cheap;
  int draws_oracle;
  int draws_bch;
  double alpha_max;
  double xi_max;
  int n_max;
  int bch_block;
  int stab_n1, stab_n2, stab_draws;
  DsfsParams must_throw;
};

// The draw envelopes are set by measured truncation stability of the oracle
// moments, not by the state-norm deficit alone: N vs 2N agreement stays below
// 1e-10 inside them, so the 1e-8 stability gate holds with margin.
inline VerifyParams verify_params(VerifyLevel level) {
  if (level == VerifyLevel::quick)
    return VerifyParams{32, 50, 50, 20, 0.8, 0.25, 2, 6, 32, 48, 10,
                        DsfsParams{0.0, 0.0, 1.0, 0.0, 5}};
  return VerifyParams{128, 1000, 200, 20, 1.5, 0.4, 4, 24, 64, 128, 20,
                      DsfsParams{0.0, 0.0, 2.0, 0.0, 8}};
}

inline VerifyReport verify_suite(VerifyLevel level) {
  using clock = std::chrono::steady_clock;
  const VerifyParams vp = verify_params(level);
  VerifyReport rep;
  rep.level = level;
  auto t_start = clock::now();

  auto run = [&](const std::string& name, bool expected_div, auto&& body) {
    VerifyItem it;
    it.name = name;
    it.expected_divergence = expected_div;
    auto t0 = clock::now();
    try {
      body(it);
    } catch (const std::exception& e) {
      it.pass = false;
      it.detail = std::string("unexpected exception: ") + e.what();
    }
    it.millis = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    rep.items.push_back(std::move(it));
  };

  run("dispersion-identities", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1001);
    it.bound = 1e-10;
    double worst = 0.0;
    const char* which = "beta2-minus-sigma2";
    for (int i = 0; i < vp.draws_cheap; ++i) {
      CircuitParams p = detail::random_circuit(g);
      Dispersion d = dispersion(p);
      auto [ed, ec] = dispersion_identity_errors(p, d);
      if (ed > worst) { worst = ed; which = "beta2-minus-sigma2"; }
      if (ec > worst) { worst = ec; which = "two-sigma-beta"; }
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = std::string("worst identity: ") + which;
  });

  run("dispersion-lossless", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1002);
    it.bound = 1e-12;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      CircuitParams p = detail::random_circuit(g, true);
      Dispersion d = dispersion(p);
      double beta_ref = 1.0 / (p.omega * std::sqrt(p.L * p.C));
      if (d.sigma != 0.0) { it.detail = "sigma not exactly zero"; it.measured = d.sigma; return; }
      worst = std::max(worst, std::abs(d.beta - beta_ref) / beta_ref);
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "sigma exact, beta vs 1/(w sqrt(LC))";
  });

  run("gamma-squared-equals-zy", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1003);
    it.bound = 1e-12;
    double worst = 0.0;
    for (int i = 0; i < vp.draws_cheap; ++i) {
      CircuitParams p = detail::random_circuit(g);
      Dispersion d = dispersion(p);
      cplx gamma(d.sigma, -d.beta);
      cplx Z(p.R, -1.0 / (p.omega * p.C));
      cplx Y(p.G, -1.0 / (p.omega * p.L));
      worst = std::max(worst, std::abs(gamma * gamma - Z * Y) / std::abs(Z * Y));
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "(sigma - i beta)^2 vs Z*Y";
  });

  run("residual-order", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1004);
    it.bound = 1.8;
    double worst = 10.0;
    for (int i = 0; i < 5; ++i) {
      CircuitParams p = detail::random_circuit(g);
      Dispersion d = dispersion(p);
      double gmag = std::hypot(d.sigma, d.beta);
      cplx amp(detail::uniform(g, 0.5, 2.0), detail::uniform(g, -1.0, 1.0));
      double ell = detail::uniform(g, 0.5, 2.0) / gmag;
      double t = detail::uniform(g, 0.0, 2.0 * kPi / p.omega);
      worst = std::min(worst, residual_order(p, amp, ell, t));
    }
    it.measured = worst;
    it.pass = worst >= it.bound;
    it.detail = "least-squares dz-ladder slope, minimum over draws";
  });

  run("expm-unitary", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1005);
    it.bound = 1e-12;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      CMat B(vp.N, vp.N);
      for (int r = 0; r < vp.N; ++r)
        for (int c = 0; c < vp.N; ++c)
          B(r, c) = cplx(detail::uniform(g, -0.25, 0.25), detail::uniform(g, -0.25, 0.25));
      CMat A = 0.5 * (B - B.adjoint().eval());
      CMat U = matrix_exponential(A);
      CMat res = U.adjoint() * U - CMat::Identity(vp.N, vp.N);
      worst = std::max(worst, res.cwiseAbs().maxCoeff());
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "anti-Hermitian generator, max |U*U - I| entry";
  });

  run("expm-known-cases", false, [&](VerifyItem& it) {
    it.bound = 1e-13;
    double worst = 0.0;
    CMat D = CMat::Zero(3, 3);
    D(0, 0) = cplx(0.3, 0.0);
    D(1, 1) = cplx(-1.2, 0.7);
    D(2, 2) = cplx(2.0, -3.0);
    CMat Dx = matrix_exponential(D);
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::abs(Dx(k, k) - std::exp(D(k, k))) / std::abs(std::exp(D(k, k))));
    CMat Nl = CMat::Zero(2, 2);
    Nl(0, 1) = cplx(1.0, 0.0);
    CMat Nx = matrix_exponential(Nl);
    worst = std::max(worst, std::abs(Nx(0, 0) - 1.0));
    worst = std::max(worst, std::abs(Nx(0, 1) - 1.0));
    worst = std::max(worst, std::abs(Nx(1, 0)));
    worst = std::max(worst, std::abs(Nx(1, 1) - 1.0));
    double th = 0.8;
    CMat R = CMat::Zero(2, 2);
    R(0, 1) = cplx(-th, 0.0);
    R(1, 0) = cplx(th, 0.0);
    CMat Rx = matrix_exponential(R);
    worst = std::max(worst, std::abs(Rx(0, 0) - std::cos(th)));
    worst = std::max(worst, std::abs(Rx(0, 1) + std::sin(th)));
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "diagonal, nilpotent, rotation generators";
  });

  run("displacement-coherent", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1007);
    it.bound = 1e-10;
    double worst = 0.0;
    FockSpace s = build_space(vp.N);
    for (int i = 0; i < 10; ++i) {
      cplx alpha = std::polar(detail::uniform(g, 0.0, vp.alpha_max), detail::uniform(g, 0.0, 2.0 * kPi));
      CVec e0 = CVec::Zero(vp.N);
      e0(0) = 1.0;
      CVec psi = displacement_operator(s, alpha) * e0;
      cplx ck = std::exp(-0.5 * std::norm(alpha));
      for (int k = 0; k <= 12; ++k) {
        worst = std::max(worst, std::abs(psi(k) - ck));
        ck *= alpha / std::sqrt(double(k + 1));
      }
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "leading coherent-state amplitudes vs exp(-|a|^2/2) a^k/sqrt(k!)";
  });

  run("squeeze-vacuum", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1008);
    it.bound = 1e-9;
    double worst = 0.0;
    FockSpace s = build_space(vp.N);
    for (int i = 0; i < 10; ++i) {
      double r = detail::uniform(g, 0.05, vp.xi_max);
      double phi = detail::uniform(g, 0.0, 2.0 * kPi);
      CVec e0 = CVec::Zero(vp.N);
      e0(0) = 1.0;
      CVec psi = squeeze_operator(s, std::polar(r, phi)) * e0;
      cplx cm = cplx(1.0 / std::sqrt(std::cosh(r)), 0.0);
      for (int m = 0; 2 * m + 1 < 14; ++m) {
        worst = std::max(worst, std::abs(psi(2 * m) - cm));
        worst = std::max(worst, std::abs(psi(2 * m + 1)));
        cm *= std::polar(std::tanh(r), phi) *
              std::sqrt((2.0 * m + 1.0) / (2.0 * m + 2.0));
      }
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "even-ladder squeezed-vacuum amplitudes, odd amplitudes zero";
  });

  run("bch-similarity", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1009);
    it.bound = 1e-8;
    double worst = 0.0;
    FockSpace s = build_space(vp.N);
    for (int i = 0; i < vp.draws_bch; ++i) {
      cplx alpha = std::polar(detail::uniform(g, 0.0, vp.alpha_max), detail::uniform(g, 0.0, 2.0 * kPi));
      cplx xi = std::polar(detail::uniform(g, 0.0, vp.xi_max), detail::uniform(g, 0.0, 2.0 * kPi));
      worst = std::max(worst, similarity_checks_block(s, alpha, xi, vp.bch_block));
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "conjugation identities on the converged block";
  });

  run("truncation-deficit-gate", false, [&](VerifyItem& it) {
    FockSpace s = build_space(vp.N);
    bool threw = false;
    double deficit_seen = 0.0;
    try {
      dsfs_state(s, vp.must_throw);
    } catch (const TruncationError& e) {
      threw = true;
      deficit_seen = e.deficit;
    }
    DsfsParams safe{vp.alpha_max, 0.4, vp.xi_max, 1.1, vp.n_max};
    StateVector sv = dsfs_state(s, safe);
    it.measured = deficit_seen;
    it.bound = 1e-6;
    it.pass = threw && deficit_seen > it.bound && sv.deficit < it.bound;
    it.detail = "over-squeezed state rejected, envelope corner admitted";
  });

  run("hamiltonian-diagonal", false, [&](VerifyItem& it) {
    it.bound = 1e-9;
    CircuitParams p = detail::bench_circuit(0.02, 0.2);
    FockSpace s = build_space(vp.N);
    double dev = hamiltonian_deviation(s, p, 1e-6, 1e-10);
    it.measured = dev / (kHbar * p.omega);
    it.pass = it.measured < it.bound;
    it.detail = "quadrature Hamiltonian vs hw(N+1/2) on the trimmed block, in units of hw";
  });

  run("hamiltonian-location-time-invariance", false, [&](VerifyItem& it) {
    it.bound = 1e-12;
    CircuitParams p = detail::bench_circuit(0.02, 0.2);
    Dispersion d = dispersion(p);
    FockSpace s = build_space(vp.N);
    CMat H1 = hamiltonian_matrix(s, p, 1e-6, 0.0);
    CMat H2 = hamiltonian_matrix(s, p, 1e-6 + 1.3 / d.beta, 2.7 / p.omega);
    int m = s.N - 2;
    double diff = (H1.topLeftCorner(m, m) - H2.topLeftCorner(m, m)).cwiseAbs().maxCoeff();
    it.measured = diff / (kHbar * p.omega);
    it.pass = it.measured < it.bound;
    it.detail = "H matrix independent of (ell, t) after phase cancellation";
  });

  run("commutator-scale", false, [&](VerifyItem& it) {
    it.bound = 1e-12;
    CircuitParams p = detail::bench_circuit(0.02, 0.2);
    FockSpace s = build_space(vp.N);
    it.measured = commutator_check(s, p);
    it.pass = it.measured <= it.bound;
    it.detail = "[A, A+] vs hw(wLG+1)/(2Lz0) identity, truncation edge excluded";
  });

  run("oracle-mean-agreement", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x100C);
    it.bound = 1e-8;
    double worst = 0.0;
    FockSpace s = build_space(vp.N);
    for (int i = 0; i < vp.draws_oracle; ++i) {
      CircuitParams p = detail::random_circuit(g);
      Dispersion d = dispersion(p);
      DsfsParams q = detail::random_state(g, vp.alpha_max, vp.xi_max, vp.n_max);
      double ell = detail::log_uniform(g, -7.0, -5.0);
      double t = detail::uniform(g, 0.0, 2.0 * kPi / p.omega);
      double F = normalization_F(p);
      OracleMoments om = oracle_moments(s, q, F, d, ell, t, p.omega);
      double closed = mean_current(F, d, q, ell, t, p.omega);
      double scale = std::max(std::abs(om.mean_j), F * std::exp(-d.sigma * ell));
      worst = std::max(worst, std::abs(closed - om.mean_j) / scale);
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "closed-form mean vs truncated-space expectation";
  });

  run("oracle-variance-agreement", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x100D);
    it.bound = 1e-6;
    double worst = 0.0;
    FockSpace s = build_space(vp.N);
    for (int i = 0; i < vp.draws_oracle; ++i) {
      CircuitParams p = detail::random_circuit(g);
      Dispersion d = dispersion(p);
      DsfsParams q = detail::random_state(g, vp.alpha_max, vp.xi_max, vp.n_max);
      double ell = detail::log_uniform(g, -7.0, -5.0);
      double t = detail::uniform(g, 0.0, 2.0 * kPi / p.omega);
      double F = normalization_F(p);
      OracleMoments om = oracle_moments(s, q, F, d, ell, t, p.omega);
      double closed = variance(F, d, q, ell, MomentVariant::rederived, t, p.omega);
      worst = std::max(worst, std::abs(closed - om.var_j) / om.var_j);
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "rederived variance vs truncated-space expectation";
  });

  run("moment-consistency", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x100E);
    it.bound = 1e-10;
    double worst = 0.0;
    for (int i = 0; i < vp.draws_cheap; ++i) {
      CircuitParams p = detail::random_circuit(g);
      Dispersion d = dispersion(p);
      DsfsParams q = detail::random_state(g, 3.0, 2.0, 20);
      double ell = detail::log_uniform(g, -7.0, -5.0);
      double t = detail::uniform(g, 0.0, 2.0 * kPi / p.omega);
      double F = normalization_F(p);
      ClosedFormMoments m = closed_form_moments(F, d, q, ell, MomentVariant::rederived, t, p.omega);
      worst = std::max(worst, std::abs(m.mean_j * m.mean_j + m.var_j - m.mean_j2) / m.mean_j2);
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "mean^2 + variance vs second moment, rederived forms";
  });

  run("printed-variance-factor", true, [&](VerifyItem& it) {
    it.bound = 1e-6;
    CircuitParams p = detail::bench_circuit(0.2, 0.2);
    Dispersion d = dispersion(p);
    DsfsParams vac{};
    double vp_ = variance(1.0, d, vac, 1e-6, MomentVariant::printed);
    double vr = variance(1.0, d, vac, 1e-6, MomentVariant::rederived);
    it.measured = vp_ / vr;
    it.pass = std::abs(it.measured - 2.0) <= it.bound;
    it.detail = "EXPECTED-DIVERGENCE: printed vacuum variance is twice the oracle value";
  });

  run("truncation-stability", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1010);
    it.bound = 1e-8;
    double worst = 0.0;
    FockSpace s1 = build_space(vp.stab_n1);
    FockSpace s2 = build_space(vp.stab_n2);
    for (int i = 0; i < vp.stab_draws; ++i) {
      CircuitParams p = detail::random_circuit(g);
      Dispersion d = dispersion(p);
      DsfsParams q = detail::random_state(g, vp.alpha_max, vp.xi_max, vp.n_max);
      double ell = detail::log_uniform(g, -7.0, -5.0);
      double t = detail::uniform(g, 0.0, 2.0 * kPi / p.omega);
      double F = normalization_F(p);
      OracleMoments a = oracle_moments(s1, q, F, d, ell, t, p.omega);
      OracleMoments b = oracle_moments(s2, q, F, d, ell, t, p.omega);
      double mscale = std::max(std::abs(b.mean_j), F * std::exp(-d.sigma * ell));
      worst = std::max(worst, std::abs(a.mean_j - b.mean_j) / mscale);
      worst = std::max(worst, std::abs(a.var_j - b.var_j) / b.var_j);
    }
    it.measured = worst;
    it.pass = worst <= it.bound;
    it.detail = "oracle moments stable between truncation sizes";
  });

  run("nri-roundtrip-ladder", false, [&](VerifyItem& it) {
    it.bound = 1e-3;
    CircuitParams p = detail::bench_circuit(0.02, 0.02);
    Dispersion d = dispersion(p);
    DsfsParams q{0.3, 0.2, 0.4, kPi / 3.0, 1};
    std::vector<double> bl = {1e-6, 1e-5, 1e-4, 1e-3};
    double worst = 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double b : bl) {
      double err = roundtrip_error(p, q, b / d.beta, MomentVariant::rederived);
      worst = std::max(worst, err);
      double lx = std::log(b), ly = std::log(err);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    double n = double(bl.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    it.measured = worst;
    it.pass = worst <= it.bound && std::abs(slope - 1.0) <= 0.15;
    it.detail = "inversion error vanishes linearly in beta*ell, slope " + detail::shortest(slope);
  });

  run("printed-inversion-divergence", true, [&](VerifyItem& it) {
    it.bound = 0.1;
    CircuitParams p = detail::bench_circuit(0.02, 0.02);
    Dispersion d = dispersion(p);
    DsfsParams q{0.3, 0.2, 0.4, kPi / 3.0, 1};
    double ell = 1e-4 / d.beta;
    double err_p = roundtrip_error(p, q, ell, MomentVariant::printed);
    double err_r = roundtrip_error(p, q, ell, MomentVariant::rederived);
    it.measured = err_p;
    it.pass = err_p > it.bound && err_p > 10.0 * err_r;
    it.detail = "EXPECTED-DIVERGENCE: printed inversion misses the true index (rederived error " +
                detail::shortest(err_r) + ")";
  });

  run("nri-monotone-in-squeeze", false, [&](VerifyItem& it) {
    it.bound = 0.0;
    CircuitParams p = detail::bench_circuit(0.02, 0.02);
    DsfsParams q{0.0, 0.0, 1.0, kPi / 3.0, 1};
    double prev = 0.0;
    double min_drop = 1e300;
    for (int i = 0; i < 20; ++i) {
      q.xi_mag = 1.0 + 2.0 * double(i) / 19.0;
      NriResult r = nri_from_fluctuation(10.0, p, q, 1e-6, MomentVariant::rederived);
      double mag = std::abs(r.n_r);
      if (i > 0) min_drop = std::min(min_drop, prev - mag);
      prev = mag;
    }
    it.measured = min_drop;
    it.pass = min_drop > it.bound;
    it.detail = "|n_r| strictly decreasing across xi in [1, 3] at fixed fluctuation";
  });

  run("sweep-determinism", false, [&](VerifyItem& it) {
    SweepConfig cfg = expand_options(preset("fig3"))[0].second;
    auto r1 = run_sweep(cfg, 1);
    auto r2 = run_sweep(cfg, 1);
    auto r4 = run_sweep(cfg, 4);
    std::string c1 = emit_csv(r1), c2 = emit_csv(r2), c4 = emit_csv(r4);
    it.measured = double(r1.size());
    it.bound = double(cfg.sweep->count);
    it.pass = (c1 == c2) && (c1 == c4) && int(r1.size()) == cfg.sweep->count;
    it.detail = "serial repeat and 4-thread run byte-identical, row count preserved";
  });

  run("singular-row-preservation", false, [&](VerifyItem& it) {
    SweepConfig cfg = expand_options(preset("fig3"))[0].second;
    auto rows = run_sweep(cfg, 1);
    const CurvePoint& first = rows.front();
    const CurvePoint& last = rows.back();
    auto has = [](const CurvePoint& p, const char* w) {
      return std::find(p.warnings.begin(), p.warnings.end(), w) != p.warnings.end();
    };
    bool ok = int(rows.size()) == cfg.sweep->count &&
              has(first, "singular-direction") && has(last, "singular-direction") &&
              !first.n_r_rederived && !last.n_r_rederived &&
              first.sigma && last.sigma;
    int with_nri = 0;
    for (const auto& r : rows)
      if (r.n_r_rederived) ++with_nri;
    it.measured = double(with_nri);
    it.bound = double(cfg.sweep->count - 2);
    it.pass = ok && with_nri == cfg.sweep->count - 2;
    it.detail = "phi = 0 and phi = pi rows kept with warnings and empty index fields";
  });

  run("config-roundtrip", false, [&](VerifyItem& it) {
    std::mt19937_64 g(0x1014);
    int draws = (level == VerifyLevel::quick) ? 50 : 200;
    it.bound = double(draws);
    int ok = 0;
    const std::vector<std::string> fields(detail::double_fields().begin(),
                                          detail::double_fields().end());
    for (int i = 0; i < draws; ++i) {
      SweepConfig cfg;
      cfg.circuit = detail::random_circuit(g);
      DsfsParams q = detail::random_state(g, 3.0, 2.0, 20);
      cfg.state = q;
      cfg.ell = detail::log_uniform(g, -7.0, -5.0);
      if (g() % 2) {
        cfg.var_j_input = detail::uniform(g, 0.0, 20.0);
        cfg.var_units = (g() % 2) ? VarUnits::absolute : VarUnits::zero_point;
      }
      cfg.units = (g() % 2) ? UnitsMode::si : UnitsMode::natural_units;
      cfg.variant = (g() % 2) ? MomentVariant::printed : MomentVariant::rederived;
      cfg.trunc = 2 + int(g() % 255);
      std::string swept;
      if (g() % 2) {
        swept = fields[g() % fields.size()];
        double a = detail::uniform(g, 0.1, 1.0), b = detail::uniform(g, 1.5, 9.0);
        cfg.sweep = SweepRange{swept, a, b, 2 + int(g() % 300)};
      }
      if (g() % 3 == 0) {
        std::string target = fields[g() % fields.size()];
        std::string source = fields[g() % fields.size()];
        if (target != swept && source != target) {
          cfg.links.push_back(LinkedRule{target, detail::uniform(g, 0.5, 2.0),
                                         (g() % 2) ? '*' : '/', source});
        }
      }
      if (g() % 4 == 0) cfg.n_options = {int(g() % 5), int(g() % 20)};
      if (g() % 4 == 1) cfg.xi_options = {detail::uniform(g, 0.0, 2.0), detail::uniform(g, 2.0, 9.0)};
      std::string text = serialize_config(cfg);
      SweepConfig back = parse_config(text);
      if (back == cfg && serialize_config(back) == text) ++ok;
    }
    it.measured = double(ok);
    it.pass = ok == draws;
    it.detail = "parse(serialize(cfg)) == cfg and byte-stable reserialization";
  });

  rep.wall_seconds = std::chrono::duration<double>(clock::now() - t_start).count();
  return rep;
}

inline std::string render_report(const VerifyReport& rep) {
  std::string out = "verify (";
  out += (rep.level == VerifyLevel::quick) ? "quick" : "full";
  out += "): " + std::to_string(rep.items.size()) + " checks\n";
  int passed = 0;
  for (const auto& it : rep.items) {
    if (it.pass) ++passed;
    out += it.pass ? "[PASS] " : "[FAIL] ";
    out += it.name;
    if (out.size() > 0) {
      size_t line_start = out.rfind('\n') + 1;
      size_t width = out.size() - line_start;
      if (width < 48) out += std::string(48 - width, ' ');
    }
    if (it.expected_divergence) out += " EXPECTED-DIVERGENCE";
    out += " measured=" + detail::shortest(it.measured);
    out += " bound=" + detail::shortest(it.bound);
    out += " (" + std::to_string(int(it.millis + 0.5)) + " ms)";
    if (!it.detail.empty()) out += "  " + it.detail;
    out += '\n';
  }
  out += "result: " + std::to_string(passed) + "/" + std::to_string(rep.items.size());
  out += rep.all_pass() ? " pass, " : " pass, FAILURES PRESENT, ";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f s\n", rep.wall_seconds);
  out += buf;
  return out;
}

}  // namespace lhtl
