#pragma once

#include <cmath>
#include <utility>

#include "lhtl/types.hpp"

namespace lhtl {

inline std::pair<double, double> xy_terms(const CircuitParams& p) {
  p.validate();
  return {p.R * p.G, 1.0 / (p.omega * p.omega * p.L * p.C)};
}

inline Dispersion dispersion(const CircuitParams& p) {
  auto [x, y] = xy_terms(p);
  double cross = p.G / (p.omega * p.C) + p.R / (p.omega * p.L);
  double srad = std::hypot(x - y, cross);
  // srad >= |x - y|, so both radicands are nonnegative up to rounding.
  double sigma = std::sqrt(0.5 * std::max(0.0, (x - y) + srad));
  double beta = std::sqrt(0.5 * std::max(0.0, (y - x) + srad));
  if (!std::isfinite(sigma) || !std::isfinite(beta))
    throw ValidationError("dispersion", "non-finite sigma/beta (parameter overflow)");
  return {sigma, beta};
}

// Relative defect of each dispersion identity for a candidate (sigma, beta).
// first: beta^2 - sigma^2 = y - x, second: 2*sigma*beta = G/(wC) + R/(wL).
inline std::pair<double, double> dispersion_identity_errors(const CircuitParams& p,
                                                            const Dispersion& d) {
  auto [x, y] = xy_terms(p);
  double cross = p.G / (p.omega * p.C) + p.R / (p.omega * p.L);
  double scale = std::max({std::abs(x), std::abs(y), std::abs(cross), 1e-300});
  double err_diff = std::abs((d.beta * d.beta - d.sigma * d.sigma) - (y - x)) / scale;
  double err_cross = std::abs(2.0 * d.sigma * d.beta - cross) / scale;
  return {err_diff, err_cross};
}

inline ClassicalField classical_fields(const CircuitParams& p, const Dispersion& d,
                                       cplx amplitude, double ell, double t) {
  cplx ph = std::polar(1.0, d.beta * ell - p.omega * t);
  double damp = std::exp(-d.sigma * ell);
  cplx fwd = amplitude * ph;
  // j = e^{-sl}[A e^{i(bl-wt)} + c.c.]; u carries the iwL/(wLG+1) prefactor.
  cplx jc = damp * (fwd + std::conj(fwd));
  cplx pref = cplx(0.0, p.omega * p.L / (p.omega * p.L * p.G + 1.0));
  cplx uc = pref * damp * (std::conj(fwd) - fwd);
  return {jc.real(), uc.real()};
}

// One-step residuals of the telegrapher pair evaluated on the consistent
// complex phasor solution: gamma = sigma - i*beta satisfies gamma^2 = Z*Y with
// Z = R + 1/(iwC), Y = G + 1/(iwL), and u = j*gamma/Y solves both difference
// relations to second order in dz.
inline std::pair<double, double> difference_residual(const CircuitParams& p, cplx amplitude,
                                                     double ell, double t, double dz) {
  if (!(dz > 0)) throw ValidationError("dz", "step must be > 0");
  Dispersion d = dispersion(p);
  cplx Z(p.R, -1.0 / (p.omega * p.C));
  cplx Y(p.G, -1.0 / (p.omega * p.L));
  cplx gamma(d.sigma, -d.beta);
  cplx timef = std::polar(1.0, p.omega * t);
  cplx j0 = amplitude * std::exp(-gamma * ell) * timef;
  cplx j1 = amplitude * std::exp(-gamma * (ell + dz)) * timef;
  cplx u0 = j0 * gamma / Y;
  cplx u1 = j1 * gamma / Y;
  double res_u = std::abs(u0 - j0 * Z * dz - u1);
  double res_j = std::abs(j0 - u0 * Y * dz - j1);
  return {res_u, res_j};
}

// Least-squares log2-log2 slope of residual vs dz over a halving ladder.
// Returns the smaller of the voltage/current orders.
inline double residual_order(const CircuitParams& p, cplx amplitude, double ell, double t,
                             int halvings = 6) {
  if (std::abs(amplitude) == 0.0) throw ValidationError("amplitude", "order undefined at zero amplitude");
  Dispersion d = dispersion(p);
  double gmag = std::hypot(d.sigma, d.beta);
  if (gmag == 0.0) throw ValidationError("dispersion", "order undefined at gamma = 0");
  double dz0 = 1e-2 / gmag;
  auto slope = [&](bool voltage) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = halvings + 1;
    for (int k = 0; k < m; ++k) {
      double dz = dz0 / double(1 << k);
      auto [ru, rj] = difference_residual(p, amplitude, ell, t, dz);
      double xk = std::log2(dz);
      double yk = std::log2(voltage ? ru : rj);
      sx += xk; sy += yk; sxx += xk * xk; sxy += xk * yk;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  return std::min(slope(true), slope(false));
}

}  // namespace lhtl
