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

#include "qjh/hilbert.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qjh {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": matrix must be square and non-empty");
  }
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "Operator");
}

Operator Operator::identity(Index dim) {
  return Operator(Matrix::Identity(dim, dim));
}

Operator Operator::zero(Index dim) { return Operator(Matrix::Zero(dim, dim)); }

bool Operator::is_hermitian(double tol) const {
  return max_abs(entries_ - entries_.adjoint()) <= tol;
}

bool Operator::is_unitary(double tol) const {
  const Matrix id = Matrix::Identity(dim(), dim());
  return max_abs(entries_.adjoint() * entries_ - id) <= tol;
}

Operator operator+(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("Operator +: dimension mismatch");
  return Operator(a.entries_ + b.entries_);
}

Operator operator-(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("Operator -: dimension mismatch");
  return Operator(a.entries_ - b.entries_);
}

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("Operator *: dimension mismatch");
  return Operator(a.entries_ * b.entries_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.entries_); }

StateVector::StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw DimensionError("StateVector: empty");
}

StateVector StateVector::basis(Index dim, Index k) {
  if (k < 0 || k >= dim) throw DimensionError("StateVector::basis: index out of range");
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::normalized() const {
  const double n = amplitudes_.norm();
  if (n == 0.0) throw NumericalError("StateVector::normalized: zero vector");
  return StateVector(amplitudes_ / n);
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "DensityMatrix");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.projector());
}

bool DensityMatrix::is_hermitian(double tol) const {
  return max_abs(entries_ - entries_.adjoint()) <= tol;
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical(double tol, double pos_tol) const {
  if (!is_hermitian(tol)) return false;
  const Complex tr = trace();
  if (std::abs(tr - 1.0) > tol) return false;
  return min_eigenvalue() >= -pos_tol;
}

Matrix& BlockState::block(int a, int b) {
  return a == 0 ? (b == 0 ? b00 : b01) : (b == 0 ? b10 : b11);
}

const Matrix& BlockState::block(int a, int b) const {
  return a == 0 ? (b == 0 ? b00 : b01) : (b == 0 ? b10 : b11);
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Matrix out(ra * rb, ca * cb);
  for (Index i = 0; i < ra; ++i)
    for (Index j = 0; j < ca; ++j)
      for (Index k = 0; k < rb; ++k)
        for (Index l = 0; l < cb; ++l) out(i * rb + k, j * cb + l) = a(i, j) * b(k, l);
  return out;
}

Operator tensor(const Operator& a, const Operator& b) {
  return Operator(tensor(a.matrix(), b.matrix()));
}

Operator matrix_exponential(const Operator& m, double t) {
  return Operator(matrix_exponential(m.matrix(), t));
}

BlockState block_decompose(const Matrix& rho) {
  require_square(rho, "block_decompose");
  if (rho.rows() % 2 != 0) {
    throw DimensionError("block_decompose: dimension must be 2*d_sys");
  }
  const Index d = rho.rows() / 2;
  BlockState out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out.block(a, b) = rho(Eigen::seqN(a, d, 2), Eigen::seqN(b, d, 2));
  return out;
}

Matrix block_compose(const BlockState& blocks) {
  const Index d = blocks.b00.rows();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Matrix& m = blocks.block(a, b);
      if (m.rows() != d || m.cols() != d) {
        throw DimensionError("block_compose: blocks must share one square shape");
      }
    }
  Matrix rho(2 * d, 2 * d);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      rho(Eigen::seqN(a, d, 2), Eigen::seqN(b, d, 2)) = blocks.block(a, b);
  return rho;
}

Matrix trace_out_mode(const Matrix& rho) {
  const BlockState b = block_decompose(rho);
  return b.b00 + b.b11;
}

double trace_distance(const Matrix& rho1, const Matrix& rho2, double tol) {
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols()) {
    throw DimensionError("trace_distance: dimension mismatch");
  }
  const Matrix diff = rho1 - rho2;
  if (max_abs(diff - diff.adjoint()) > tol) {
    throw PreconditionError("trace_distance: difference is not Hermitian");
  }
  const Matrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2, double tol) {
  return trace_distance(rho1.matrix(), rho2.matrix(), tol);
}

Vector vectorize(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvectorize(const Vector& v, Index dim) {
  if (v.size() != dim * dim) throw DimensionError("unvectorize: size is not dim^2");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

}  // namespace qjh
