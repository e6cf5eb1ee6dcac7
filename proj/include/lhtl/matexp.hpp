#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "lhtl/types.hpp"

namespace lhtl {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Pade-13 scaling and squaring. Accurate to round-off for ||M|| <= theta13;
// larger norms are halved s times first, with s capped by max_squarings.
inline CMat matrix_exponential(const CMat& M, int max_squarings = 64) {
  if (M.rows() != M.cols()) throw ValidationError("matrix_exponential", "matrix must be square");
  if (!M.allFinite()) throw ValidationError("matrix_exponential", "non-finite entries");
  const long n = M.rows();
  if (n == 0) return CMat(0, 0);

  const double theta13 = 5.371920351148152;
  double nrm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (nrm > theta13) {
    s = int(std::ceil(std::log2(nrm / theta13)));
    if (s > max_squarings)
      throw Error("matrix_exponential: required scaling depth " + std::to_string(s) +
                  " exceeds limit " + std::to_string(max_squarings));
  }
  CMat A = M / std::ldexp(1.0, s);

  static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
  CMat I = CMat::Identity(n, n);
  CMat A2 = A * A;
  CMat A4 = A2 * A2;
  CMat A6 = A2 * A4;
  CMat U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) +
                b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  CMat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
           b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  CMat F = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < s; ++k) F = F * F;
  return F;
}

}  // namespace lhtl
