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

#include "qjh/model.hpp"

#include <cmath>
#include <sstream>

namespace qjh {

SystemHamiltonian SystemHamiltonian::diagonal(std::vector<double> freqs) {
  SystemHamiltonian h;
  h.kind = Kind::Diagonal;
  h.frequencies = std::move(freqs);
  return h;
}

SystemHamiltonian SystemHamiltonian::explicit_(Matrix m) {
  SystemHamiltonian h;
  h.kind = Kind::Explicit;
  h.explicit_matrix = std::move(m);
  return h;
}

Matrix SystemHamiltonian::build(Index d_sys) const {
  switch (kind) {
    case Kind::Zero:
      return Matrix::Zero(d_sys, d_sys);
    case Kind::Diagonal: {
      if (static_cast<Index>(frequencies.size()) != d_sys) {
        throw PreconditionError("model.h0.values: diagonal needs d_sys frequencies");
      }
      Matrix h = Matrix::Zero(d_sys, d_sys);
      for (Index i = 0; i < d_sys; ++i) h(i, i) = frequencies[i];
      return h;
    }
    case Kind::Explicit: {
      if (explicit_matrix.rows() != d_sys || explicit_matrix.cols() != d_sys) {
        throw PreconditionError("model.h0.values: explicit H0 must be d_sys x d_sys");
      }
      if (!Operator(explicit_matrix).is_hermitian(1e-12)) {
        throw PreconditionError("model.h0.values: explicit H0 is not Hermitian");
      }
      return explicit_matrix;
    }
  }
  return Matrix::Zero(d_sys, d_sys);
}

Vector ModelParams::psi0() const {
  if (initial_state.size() == 0) {
    Vector v = Vector::Zero(d_sys);
    v(d_sys - 1) = 1.0;
    return v;
  }
  if (initial_state.size() != d_sys) {
    throw PreconditionError("model.psi0: length must equal d_sys");
  }
  const double n = initial_state.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw PreconditionError("model.psi0: zero or non-finite state");
  return initial_state / n;
}

void ModelParams::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw PreconditionError(field + ": " + why);
  };
  if (!std::isfinite(kappa) || kappa < 0.0) fail("model.kappa", "must be finite and >= 0");
  if (!std::isfinite(gamma1) || gamma1 <= 0.0) fail("model.gamma1", "must be finite and > 0");
  if (!std::isfinite(gamma2) || gamma2 <= 0.0) fail("model.gamma2", "must be finite and > 0");
  if (d_sys < 2) fail("model.d_sys", "must be >= 2");
  if (d_sys > 8) fail("model.d_sys", "must be <= 8 (dense superoperators up to 256x256)");
  if (!std::isfinite(dt) || dt <= 0.0) fail("model.dt", "must be finite and > 0");
  if (n_steps < 1) fail("model.n_steps", "must be >= 1");
  (void)h0_matrix();
  (void)psi0();
}

std::vector<std::string> ModelParams::regime_warnings(double margin) const {
  std::vector<std::string> out;
  auto note = [&](bool ok, const std::string& msg) {
    if (!ok) out.push_back(msg);
  };
  note(gamma2 >= margin * gamma1, "gamma2 >> gamma1 not satisfied");
  note(gamma1 >= margin * kappa, "gamma1 >> kappa not satisfied");
  note(dt * G() >= margin, "1/G << dt not satisfied");
  note(dt * gamma1 * margin <= 1.0 + 1e-12, "dt << 1/gamma1 not satisfied");
  const Vector psi = psi0();
  double n_mean = 0.0;
  for (Index k = 0; k < psi.size(); ++k) n_mean += static_cast<double>(k) * std::norm(psi(k));
  note(kappa * n_mean * margin <= gamma1, "kappa <a^dag a> << gamma1 not satisfied");
  return out;
}

void LindbladModel::validate(double tol) const {
  if (!H.is_hermitian(tol)) throw PreconditionError("LindbladModel: H is not Hermitian");
  for (const auto& l : lindblad_ops) {
    if (l.dim() != H.dim()) throw DimensionError("LindbladModel: operator dimension mismatch");
  }
}

Matrix lowering_operator(Index d) {
  Matrix a = Matrix::Zero(d, d);
  for (Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix mode_lowering() { return lowering_operator(2); }

Matrix pauli_z() {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

LindbladModel build_total_model(const ModelParams& p) {
  p.validate();
  const Index d = p.d_sys;
  const Matrix a = lowering_operator(d);
  const Matrix b = mode_lowering();
  const Matrix id_sys = Matrix::Identity(d, d);
  const Matrix id_mode = Matrix::Identity(2, 2);

  Matrix h = tensor(p.h0_matrix(), id_mode);
  h += p.kappa * (tensor(a.adjoint(), b) + tensor(a, b.adjoint()));

  LindbladModel m{Operator(std::move(h)), {}};
  m.lindblad_ops.emplace_back(std::sqrt(p.gamma1) * tensor(id_sys, b));
  m.lindblad_ops.emplace_back(std::sqrt(p.gamma2) * tensor(id_sys, pauli_z()));
  return m;
}

LindbladModel ReducedModel::generator() const {
  LindbladModel m{h0, {}};
  m.lindblad_ops.emplace_back(std::sqrt(jump_rate_prefactor) * jump_op.matrix());
  return m;
}

ReducedModel build_reduced_model(const ModelParams& p) {
  p.validate();
  const Index d = p.d_sys;
  const Matrix a = lowering_operator(d);
  const Matrix h0 = p.h0_matrix();
  const double rate = p.kappa * p.kappa / p.G();

  ReducedModel r;
  r.h0 = Operator(h0);
  r.h_eff = Operator(h0 - kI * rate * (a.adjoint() * a));
  r.jump_op = Operator(a);
  r.jump_rate_prefactor = 2.0 * rate;
  return r;
}

}  // namespace qjh
