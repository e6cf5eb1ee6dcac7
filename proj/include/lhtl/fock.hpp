#pragma once

#include <cmath>

#include "lhtl/circuit.hpp"
#include "lhtl/matexp.hpp"
#include "lhtl/types.hpp"

namespace lhtl {

struct FockSpace {
  int N = 0;
  CMat a;
  CMat adag;
};

inline FockSpace build_space(int N) {
  if (N < 2) throw ValidationError("N", "truncation dimension must be >= 2");
  CMat a = CMat::Zero(N, N);
  for (int k = 0; k + 1 < N; ++k) a(k, k + 1) = std::sqrt(double(k + 1));
  FockSpace s;
  s.N = N;
  s.a = a;
  s.adag = a.adjoint();
  return s;
}

inline CMat displacement_operator(const FockSpace& s, cplx alpha) {
  return matrix_exponential(alpha * s.adag - std::conj(alpha) * s.a);
}

inline CMat squeeze_operator(const FockSpace& s, cplx xi) {
  return matrix_exponential(0.5 * xi * (s.adag * s.adag) - 0.5 * std::conj(xi) * (s.a * s.a));
}

struct StateVector {
  CVec amplitudes;
  double deficit = 0.0;  // pre-normalization weight lost above the cutoff
};

// The product D(alpha) S(xi) e_n is assembled in a padded space (N + 32) and
// projected back to N, so the recorded deficit measures the true tail weight
// beyond the requested cutoff. The all-at-N product would be exactly unitary
// and the deficit gate could never fire.
inline StateVector dsfs_state(const FockSpace& space, const DsfsParams& p) {
  p.validate();
  if (p.n >= space.N) throw ValidationError("n", "Fock number must be below the truncation dimension");
  constexpr int kPad = 32;
  FockSpace work = build_space(space.N + kPad);
  CVec e = CVec::Zero(work.N);
  e(p.n) = 1.0;
  CVec full = displacement_operator(work, p.alpha()) * (squeeze_operator(work, p.xi()) * e);
  CVec head = full.head(space.N);
  double nrm = head.norm();
  double deficit = 1.0 - nrm;
  if (!(deficit < 1e-6)) throw TruncationError(deficit);
  StateVector sv;
  sv.amplitudes = head / nrm;
  sv.deficit = deficit;
  return sv;
}

inline CMat current_operator(const FockSpace& s, double F, const Dispersion& d, double ell,
                             double t = 0.0, double omega = 0.0) {
  if (!(F >= 0)) throw ValidationError("F", "normalization must be >= 0");
  cplx ph = std::polar(1.0, d.beta * ell - omega * t);
  return (F * std::exp(-d.sigma * ell)) * (ph * s.a + std::conj(ph) * s.adag);
}

inline OracleMoments oracle_moments(const FockSpace& s, const DsfsParams& p, double F,
                                    const Dispersion& d, double ell, double t = 0.0,
                                    double omega = 0.0) {
  StateVector sv = dsfs_state(s, p);
  CMat J = current_operator(s, F, d, ell, t, omega);
  CVec Jpsi = J * sv.amplitudes;
  double mean_j = sv.amplitudes.dot(Jpsi).real();
  double mean_j2 = Jpsi.squaredNorm();
  return {mean_j, mean_j2, mean_j2 - mean_j * mean_j};
}

// Maximum entry-wise error over the four conjugation identities
// D'aD = a + alpha, D'a'D = a' + alpha*, S'aS = a cosh r + a' e^{i phi} sinh r,
// S'a'S = a' cosh r + a e^{-i phi} sinh r, restricted to the first N-8 columns.
inline double similarity_checks(const FockSpace& s, cplx alpha, cplx xi) {
  if (s.N < 32) throw ValidationError("N", "similarity checks require N >= 32");
  const long cols = s.N - 8;
  double r = std::abs(xi);
  double phi = (r > 0) ? std::arg(xi) : 0.0;
  CMat I = CMat::Identity(s.N, s.N);
  CMat D = displacement_operator(s, alpha);
  CMat S = squeeze_operator(s, xi);
  double worst = 0.0;
  auto track = [&](const CMat& lhs, const CMat& rhs) {
    double e = (lhs - rhs).leftCols(cols).cwiseAbs().maxCoeff();
    if (e > worst) worst = e;
  };
  track(D.adjoint() * s.a * D, s.a + alpha * I);
  track(D.adjoint() * s.adag * D, s.adag + std::conj(alpha) * I);
  track(S.adjoint() * s.a * S, std::cosh(r) * s.a + std::sinh(r) * std::polar(1.0, phi) * s.adag);
  track(S.adjoint() * s.adag * S, std::cosh(r) * s.adag + std::sinh(r) * std::polar(1.0, -phi) * s.a);
  return worst;
}

// Variant of the same check measured on the leading m x m block only, where
// the truncated conjugation has actually converged. Block sizes are chosen per
// (N, parameter envelope) from measured convergence, not from the fixed margin.
inline double similarity_checks_block(const FockSpace& s, cplx alpha, cplx xi, int block) {
  if (block < 1 || block > s.N) throw ValidationError("block", "block must lie in [1, N]");
  double r = std::abs(xi);
  double phi = (r > 0) ? std::arg(xi) : 0.0;
  CMat I = CMat::Identity(s.N, s.N);
  CMat D = displacement_operator(s, alpha);
  CMat S = squeeze_operator(s, xi);
  double worst = 0.0;
  auto track = [&](const CMat& lhs, const CMat& rhs) {
    double e = (lhs - rhs).topLeftCorner(block, block).cwiseAbs().maxCoeff();
    if (e > worst) worst = e;
  };
  track(D.adjoint() * s.a * D, s.a + alpha * I);
  track(D.adjoint() * s.adag * D, s.adag + std::conj(alpha) * I);
  track(S.adjoint() * s.a * S, std::cosh(r) * s.a + std::sinh(r) * std::polar(1.0, phi) * s.adag);
  track(S.adjoint() * s.adag * S, std::cosh(r) * s.adag + std::sinh(r) * std::polar(1.0, -phi) * s.a);
  return worst;
}

// Unit-cell Hamiltonian assembled from the quadrature pair at (ell, t).
inline CMat hamiltonian_matrix(const FockSpace& s, const CircuitParams& p, double ell, double t) {
  p.validate();
  Dispersion d = dispersion(p);
  double g = p.omega * p.L * p.G + 1.0;
  cplx ph = std::polar(1.0, d.beta * ell - p.omega * t);
  CMat eta = std::sqrt(kHbar * p.omega * g / (2.0 * p.L * p.z0)) *
             (ph * s.a + std::conj(ph) * s.adag);
  CMat nu = cplx(0.0, 1.0) * std::sqrt(kHbar * p.L * p.z0 / (2.0 * p.omega * g)) *
            (std::conj(ph) * s.adag - ph * s.a);
  return (p.omega * p.omega * g / (2.0 * p.L * p.z0)) * (nu * nu) +
         (p.L * p.z0 / (2.0 * g)) * (eta * eta);
}

// Deviation of the upper-left (N-2) block from hbar*omega*(N_hat + 1/2),
// checked at the given (ell, t) and at a shifted pair so a phase-dependent
// assembly cannot pass. Returned in joules.
inline double hamiltonian_deviation(const FockSpace& s, const CircuitParams& p, double ell,
                                    double t) {
  if (s.N < 16) throw ValidationError("N", "hamiltonian check requires N >= 16");
  Dispersion d = dispersion(p);
  double hw = kHbar * p.omega;
  const long m = s.N - 2;
  CMat ideal = CMat::Zero(s.N, s.N);
  for (int k = 0; k < s.N; ++k) ideal(k, k) = hw * (k + 0.5);
  double shift = (d.beta > 0) ? 0.7 / d.beta : 1.0;
  double dev = 0.0;
  for (auto [l2, t2] : {std::pair{ell, t}, std::pair{ell + shift, t + 0.3 / p.omega}}) {
    CMat H = hamiltonian_matrix(s, p, l2, t2);
    dev = std::max(dev, (H - ideal).topLeftCorner(m, m).cwiseAbs().maxCoeff());
  }
  return dev;
}

// [A, A'] with A = a * sqrt(hw(wLG+1)/(2 L z0)) against the loss-corrected
// value hw(wLG+1)/(2 L z0); the bare form without the (wLG+1) factor only
// holds at G = 0. Relative error over the first N-1 diagonal entries plus all
// off-diagonal entries.
inline double commutator_check(const FockSpace& s, const CircuitParams& p) {
  if (s.N < 8) throw ValidationError("N", "commutator check requires N >= 8");
  p.validate();
  double g = p.omega * p.L * p.G + 1.0;
  double scale = kHbar * p.omega * g / (2.0 * p.L * p.z0);
  CMat comm = scale * (s.a * s.adag - s.adag * s.a);
  double worst = 0.0;
  for (int i = 0; i < s.N; ++i) {
    for (int j = 0; j < s.N; ++j) {
      if (i == j && i == s.N - 1) continue;  // truncation edge entry, checked separately
      double ideal = (i == j) ? scale : 0.0;
      worst = std::max(worst, std::abs(comm(i, j) - ideal) / scale);
    }
  }
  return worst;
}

}  // namespace lhtl
