#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace lhtl {

using cplx = std::complex<double>;

inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kC0 = 299792458.0;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  std::string key;
  std::string reason;
  ValidationError(std::string k, std::string r)
      : Error(k + ": " + r), key(std::move(k)), reason(std::move(r)) {}
};

// Signals that a truncated-space construction left too much weight above the cutoff.
struct TruncationError : Error {
  double deficit;
  explicit TruncationError(double d)
      : Error("norm deficit " + std::to_string(d) + " exceeds 1e-6; truncation dimension too small"),
        deficit(d) {}
};

struct SingularDirection : Error {
  SingularDirection() : Error("sin(phi) vanishes; fluctuation inversion undefined") {}
};

struct ZeroSqueeze : Error {
  ZeroSqueeze() : Error("squeeze magnitude vanishes; fluctuation inversion undefined") {}
};

struct ParseError : Error {
  int line;
  ParseError(int ln, const std::string& reason)
      : Error("line " + std::to_string(ln) + ": " + reason), line(ln) {}
};

enum class UnitsMode { si, natural_units };
enum class MomentVariant { printed, rederived };

struct CircuitParams {
  double R = 0.0;      // series resistance density, ohm/m
  double G = 0.0;      // shunt conductance density, S/m
  double L = 398e-6;   // shunt inductance density, H*m
  double C = 995e-12;  // series capacitance density, F*m
  double z0 = 4e-6;    // unit-cell length, m
  double omega = 0.0;  // angular frequency, rad/s

  void validate() const {
    auto bad = [](double v) { return !std::isfinite(v); };
    if (bad(R) || R < 0) throw ValidationError("R", "must be finite and >= 0");
    if (bad(G) || G < 0) throw ValidationError("G", "must be finite and >= 0");
    if (bad(L) || L <= 0) throw ValidationError("L", "must be finite and > 0");
    if (bad(C) || C <= 0) throw ValidationError("C", "must be finite and > 0");
    if (bad(z0) || z0 <= 0) throw ValidationError("z0", "must be finite and > 0");
    if (bad(omega) || omega <= 0) throw ValidationError("omega", "must be finite and > 0");
  }
};

struct Dispersion {
  double sigma = 0.0;  // attenuation constant, 1/m
  double beta = 0.0;   // phase constant, rad/m
};

struct ClassicalField {
  double j = 0.0;  // current, A
  double u = 0.0;  // voltage, V
};

struct DsfsParams {
  double alpha_mag = 0.0;  // displacement magnitude
  double theta = 0.0;      // displacement phase, [0, 2pi)
  double xi_mag = 0.0;     // squeeze magnitude
  double phi = 0.0;        // squeeze direction, [0, 2pi)
  int n = 0;               // Fock number

  void validate() const {
    auto bad = [](double v) { return !std::isfinite(v); };
    if (bad(alpha_mag) || alpha_mag < 0) throw ValidationError("alpha_mag", "must be finite and >= 0");
    if (bad(xi_mag) || xi_mag < 0) throw ValidationError("xi_mag", "must be finite and >= 0");
    if (bad(theta) || theta < 0 || theta >= 2 * kPi) throw ValidationError("theta", "must lie in [0, 2pi)");
    if (bad(phi) || phi < 0 || phi >= 2 * kPi) throw ValidationError("phi", "must lie in [0, 2pi)");
    if (n < 0) throw ValidationError("n", "must be >= 0");
  }

  cplx alpha() const { return std::polar(alpha_mag, theta); }
  cplx xi() const { return std::polar(xi_mag, phi); }
};

struct OracleMoments {
  double mean_j = 0.0;   // A
  double mean_j2 = 0.0;  // A^2
  double var_j = 0.0;    // A^2
};

struct ClosedFormMoments {
  double mean_j = 0.0;
  double mean_j2 = 0.0;
  double var_j = 0.0;
  double F = 0.0;
};

struct NriResult {
  double n_r = 0.0;
  MomentVariant variant = MomentVariant::rederived;
  bool small_angle_ok = true;
};

}  // namespace lhtl
