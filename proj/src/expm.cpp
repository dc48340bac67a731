// Copyright 2026 The qjh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "qjh/hilbert.hpp"

namespace qjh {

namespace {

// Degree-13 Pade coefficients and the 1-norm bound below which the
// approximant attains double-precision backward error (Higham, 2005).
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;
constexpr int kMaxSquarings = 1000;

double one_norm(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

Matrix matrix_exponential(const Matrix& m, double t) {
  if (m.rows() != m.cols()) throw DimensionError("matrix_exponential: non-square input");
  const Index n = m.rows();
  if (n == 0) return Matrix();
  if (!std::isfinite(t)) throw NumericalError("matrix_exponential: non-finite time");

  Matrix a = m * t;
  if (!a.allFinite()) throw NumericalError("matrix_exponential: non-finite entries");

  const double norm = one_norm(a);
  if (norm == 0.0) return Matrix::Identity(n, n);
  if (a.isDiagonal(0.0)) {
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) d(i, i) = std::exp(a(i, i));
    return d;
  }
  int squarings = 0;
  if (norm > kTheta13) {
    const double s = std::ceil(std::log2(norm / kTheta13));
    if (!(s <= kMaxSquarings)) {
      throw NumericalError("matrix_exponential: scaling exponent out of range");
    }
    squarings = static_cast<int>(s);
    a *= std::ldexp(1.0, -squarings);
  }

  const auto& b = kPade13;
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;

  Matrix inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Matrix u_poly = a6 * inner;
  u_poly += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Matrix u = a * u_poly;

  inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  Matrix v = a6 * inner;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  // A zero column of the generator leaves that basis vector fixed; pin it
  // so conserved quantities stay exact through the squarings.
  for (Index j = 0; j < n; ++j) {
    if (a.col(j).isZero(0.0)) {
      r.col(j).setZero();
      r(j, j) = 1.0;
    }
  }
  for (int k = 0; k < squarings; ++k) r = r * r;

  if (!r.allFinite()) throw NumericalError("matrix_exponential: result overflowed");
  return r;
}

}  // namespace qjh
