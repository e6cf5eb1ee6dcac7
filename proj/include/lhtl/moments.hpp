#pragma once

#include <cmath>

#include "lhtl/types.hpp"

namespace lhtl {

inline double normalization_F(const CircuitParams& p, UnitsMode mode = UnitsMode::si) {
  p.validate();
  if (mode == UnitsMode::natural_units) return 1.0;
  return std::sqrt(kHbar * p.omega * (p.omega * p.L * p.G + 1.0) / (2.0 * p.L * p.z0));
}

inline double mean_current(double F, const Dispersion& d, const DsfsParams& q, double ell,
                           double t = 0.0, double omega = 0.0) {
  q.validate();
  double chi = d.beta * ell - omega * t;
  return 2.0 * F * std::exp(-d.sigma * ell) * q.alpha_mag * std::cos(chi + q.theta);
}

// Both variants share the oscillatory e^{+-2i(beta ell)} terms; they differ
// only in the constant part: the printed form carries 2(n+1)cosh^2 r +
// 2n sinh^2 r, one unit above the canonical (2n+1)cosh 2r.
inline double second_moment(double F, const Dispersion& d, const DsfsParams& q, double ell,
                            MomentVariant variant, double t = 0.0, double omega = 0.0) {
  q.validate();
  double chi = d.beta * ell - omega * t;
  double r = q.xi_mag;
  double e2 = F * F * std::exp(-2.0 * d.sigma * ell);
  cplx alpha = q.alpha();
  cplx osc = ((2.0 * q.n + 1.0) * std::cosh(r) * std::sinh(r) * std::polar(1.0, q.phi) +
              alpha * alpha) *
             std::polar(1.0, 2.0 * chi);
  double constant;
  if (variant == MomentVariant::printed) {
    double ch = std::cosh(r), sh = std::sinh(r);
    constant = 2.0 * (q.n + 1.0) * ch * ch + 2.0 * q.n * sh * sh + 2.0 * q.alpha_mag * q.alpha_mag;
  } else {
    constant = (2.0 * q.n + 1.0) * std::cosh(2.0 * r) + 2.0 * q.alpha_mag * q.alpha_mag;
  }
  return e2 * (2.0 * osc.real() + constant);
}

// Printed bracket keeps the trailing +1 inside the (2n+1) factor verbatim;
// the rederived bracket drops it, which the oracle confirms.
inline double variance(double F, const Dispersion& d, const DsfsParams& q, double ell,
                       MomentVariant variant, double t = 0.0, double omega = 0.0) {
  q.validate();
  double chi = d.beta * ell - omega * t;
  double r2 = 2.0 * q.xi_mag;
  double e2 = F * F * std::exp(-2.0 * d.sigma * ell);
  double bracket = std::sinh(r2) * std::cos(q.phi + 2.0 * chi) + std::cosh(r2);
  if (variant == MomentVariant::printed) bracket += 1.0;
  return (2.0 * q.n + 1.0) * e2 * bracket;
}

inline ClosedFormMoments closed_form_moments(double F, const Dispersion& d, const DsfsParams& q,
                                             double ell, MomentVariant variant, double t = 0.0,
                                             double omega = 0.0) {
  ClosedFormMoments m;
  m.F = F;
  m.mean_j = mean_current(F, d, q, ell, t, omega);
  m.mean_j2 = second_moment(F, d, q, ell, variant, t, omega);
  m.var_j = variance(F, d, q, ell, variant, t, omega);
  return m;
}

}  // namespace lhtl
