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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qjh {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Default tolerance for structural checks (Hermiticity, trace, unitarity).
inline constexpr double kStructuralTol = 1e-10;
/// Default floor for eigenvalue positivity of physical states.
inline constexpr double kPositivityTol = 1e-10;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Dense square operator on a finite Hilbert space.
///
/// Joint spaces follow one basis convention everywhere in the library: for
/// A on space 1 and B on space 2, the joint index is i*dim(B) + k, so the
/// rightmost factor varies fastest. The photodetector output mode is always
/// the rightmost factor, which makes its 2x2 block structure contiguous.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix entries);

  static Operator identity(Index dim);
  static Operator zero(Index dim);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(Index i, Index j) const { return entries_(i, j); }

  Operator adjoint() const { return Operator(entries_.adjoint()); }

  bool is_hermitian(double tol = kStructuralTol) const;
  bool is_unitary(double tol = kStructuralTol) const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);

 private:
  Matrix entries_;
};

/// Possibly unnormalised pure state. The squared norm carries probability
/// weight for no-jump evolution.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(Vector amplitudes);

  static StateVector basis(Index dim, Index k);

  Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  double norm_squared() const { return amplitudes_.squaredNorm(); }
  StateVector normalized() const;
  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  Vector amplitudes_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Matrix entries);

  static DensityMatrix pure(const StateVector& psi);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  Complex trace() const { return entries_.trace(); }

  bool is_hermitian(double tol = kStructuralTol) const;
  /// Hermitian, unit trace and min eigenvalue >= -pos_tol.
  bool is_physical(double tol = kStructuralTol,
                   double pos_tol = kPositivityTol) const;
  double min_eigenvalue() const;

 private:
  Matrix entries_;
};

/// The four system-space blocks of an operator on system (x) output mode,
/// rho = sum_ab rho_ab (x) |a><b|.
struct BlockState {
  Matrix b00, b01, b10, b11;

  Index system_dim() const { return b00.rows(); }
  Matrix& block(int a, int b);
  const Matrix& block(int a, int b) const;
};

Operator tensor(const Operator& a, const Operator& b);
Matrix tensor(const Matrix& a, const Matrix& b);

/// exp(m * t) by scaling and squaring of the degree-13 Pade approximant.
/// Throws NumericalError when the input is not finite or the required
/// scaling exponent is out of range.
Matrix matrix_exponential(const Matrix& m, double t);
Operator matrix_exponential(const Operator& m, double t);

/// Pure reindexing; the output mode is the rightmost 2-level factor.
BlockState block_decompose(const Matrix& rho);
Matrix block_compose(const BlockState& blocks);

/// Partial trace over the output mode: rho00 + rho11.
Matrix trace_out_mode(const Matrix& rho);

/// Half the sum of absolute eigenvalues of rho1 - rho2.
/// Throws PreconditionError when the difference is not Hermitian within tol.
double trace_distance(const Matrix& rho1, const Matrix& rho2,
                      double tol = kStructuralTol);
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2,
                      double tol = kStructuralTol);

/// Column-stacking vectorisation: vec(X)[i + j*d] = X(i, j).
Vector vectorize(const Matrix& x);
Matrix unvectorize(const Vector& v, Index dim);

}  // namespace qjh
