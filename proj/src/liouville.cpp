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

#include "qjh/liouville.hpp"

namespace qjh {

Superoperator::Superoperator(Index dim, Matrix entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.rows() != dim * dim || entries_.cols() != dim * dim) {
    throw DimensionError("Superoperator: entries must be dim^2 x dim^2");
  }
}

Superoperator Superoperator::identity(Index dim) {
  return Superoperator(dim, Matrix::Identity(dim * dim, dim * dim));
}

Matrix Superoperator::apply(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw DimensionError("Superoperator::apply: dimension mismatch");
  }
  const Vector out = entries_ * vectorize(rho);
  return unvectorize(out, dim_);
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.dim_ != b.dim_) throw DimensionError("Superoperator *: dimension mismatch");
  return Superoperator(a.dim_, a.entries_ * b.entries_);
}

Matrix apply_generator(const LindbladModel& m, const Matrix& rho) {
  const Matrix& h = m.H.matrix();
  if (rho.rows() != h.rows() || rho.cols() != h.cols()) {
    throw DimensionError("apply_generator: dimension mismatch");
  }
  Matrix out = -kI * (h * rho - rho * h);
  for (const auto& op : m.lindblad_ops) {
    const Matrix& l = op.matrix();
    const Matrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

Superoperator generator_superoperator(const LindbladModel& m) {
  const Index d = m.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix& h = m.H.matrix();
  // vec(A X B) = (B^T (x) A) vec(X)
  Matrix s = -kI * (tensor(id, h) - tensor(h.transpose(), id));
  for (const auto& op : m.lindblad_ops) {
    const Matrix& l = op.matrix();
    const Matrix ldl = l.adjoint() * l;
    s += tensor(l.conjugate(), l);
    s -= 0.5 * tensor(id, ldl);
    s -= 0.5 * tensor(ldl.transpose(), id);
  }
  return Superoperator(d, std::move(s));
}

Superoperator build_propagator(const LindbladModel& m, double t) {
  if (!(t >= 0.0)) throw PreconditionError("build_propagator: t must be >= 0");
  const Superoperator gen = generator_superoperator(m);
  return Superoperator(gen.dim(), matrix_exponential(gen.matrix(), t));
}

BlockState component_derivatives(const ModelParams& p, const BlockState& b) {
  const Index d = p.d_sys;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (b.block(i, j).rows() != d || b.block(i, j).cols() != d) {
        throw DimensionError("component_derivatives: blocks must be d_sys x d_sys");
      }
  const Matrix h0 = p.h0_matrix();
  const Matrix a = lowering_operator(d);
  const Matrix ad = a.adjoint();
  const double k = p.kappa;
  const double g1 = p.gamma1;
  const double big_g = p.G();
  auto comm = [&](const Matrix& x) -> Matrix { return -kI * (h0 * x - x * h0); };

  BlockState out;
  out.b00 = comm(b.b00) - kI * k * ad * b.b10 + kI * k * b.b01 * a + g1 * b.b11;
  out.b01 = comm(b.b01) - kI * k * ad * b.b11 + kI * k * b.b00 * ad - big_g * b.b01;
  out.b10 = comm(b.b10) - kI * k * a * b.b00 + kI * k * b.b11 * a - big_g * b.b10;
  out.b11 = comm(b.b11) - kI * k * a * b.b01 + kI * k * b.b10 * ad - g1 * b.b11;
  return out;
}

namespace {

Matrix no_jump_conjugate(const ModelParams& p, const Matrix& rho) {
  const ReducedModel r = build_reduced_model(p);
  const Matrix step = matrix_exponential(Matrix(-kI * r.h_eff.matrix()), p.dt);
  return step * rho * step.adjoint();
}

}  // namespace

BlockState step_unexcited_oracle(const ModelParams& p, const Matrix& rho00) {
  const Index d = p.d_sys;
  if (rho00.rows() != d || rho00.cols() != d) {
    throw DimensionError("step_unexcited_oracle: rho00 must be d_sys x d_sys");
  }
  const Matrix a = lowering_operator(d);
  const double big_g = p.G();
  BlockState out;
  out.b00 = no_jump_conjugate(p, rho00);
  out.b01 = (kI * p.kappa / big_g) * rho00 * a.adjoint();
  out.b10 = out.b01.adjoint();
  out.b11 = (2.0 * p.kappa * p.kappa / big_g * p.dt) * a * rho00 * a.adjoint();
  return out;
}

BlockState step_excited_oracle(const ModelParams& p, const Matrix& rho11) {
  const Index d = p.d_sys;
  if (rho11.rows() != d || rho11.cols() != d) {
    throw DimensionError("step_excited_oracle: rho11 must be d_sys x d_sys");
  }
  const Matrix a = lowering_operator(d);
  const double big_g = p.G();
  const double reabsorb = 2.0 * p.kappa * p.kappa / big_g;
  const Matrix evolved = no_jump_conjugate(p, rho11);
  BlockState out;
  out.b00 = p.gamma1 * p.dt * evolved + reabsorb * p.dt * a.adjoint() * rho11 * a;
  out.b01 = (-kI * p.kappa / big_g) * a.adjoint() * rho11;
  out.b10 = out.b01.adjoint();
  out.b11 = (1.0 - (p.gamma1 + reabsorb) * p.dt) * evolved;
  return out;
}

}  // namespace qjh
