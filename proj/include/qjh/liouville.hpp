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

#include "qjh/hilbert.hpp"
#include "qjh/model.hpp"

namespace qjh {

/// Linear map on operators of side `dim`, stored as a dim^2 x dim^2 matrix
/// acting on column-stacked operators (see vectorize()).
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(Index dim, Matrix entries);

  static Superoperator identity(Index dim);

  Index dim() const { return dim_; }
  const Matrix& matrix() const { return entries_; }

  Matrix apply(const Matrix& rho) const;

  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);

 private:
  Index dim_ = 0;
  Matrix entries_;
};

/// rho_dot = -i[H, rho] + sum_m (L rho L^dag - 1/2 {L^dag L, rho}),
/// evaluated directly on the operator.
Matrix apply_generator(const LindbladModel& m, const Matrix& rho);

/// Matrix form of the same generator under column stacking.
Superoperator generator_superoperator(const LindbladModel& m);

/// exp(L t) as a dense superoperator. Requires t >= 0.
Superoperator build_propagator(const LindbladModel& m, double t);

/// Block form of the total master equation: the four coupled equations
/// for rho00, rho01, rho10, rho11 with coherences damped at rate G.
BlockState component_derivatives(const ModelParams& p, const BlockState& b);

/// First-order state after one dt starting from rho00 (x) |0><0|:
///   rho00 -> e^{-i Heff dt} rho00 e^{i Heff^dag dt}
///   rho01 -> (i kappa / G) rho00 a^dag
///   rho11 -> (2 kappa^2 / G) a rho00 a^dag dt
BlockState step_unexcited_oracle(const ModelParams& p, const Matrix& rho00);

/// First-order state after one dt starting from rho11 (x) |1><1|:
///   rho00 -> gamma1 dt e^{-i Heff dt} rho11 e^{i Heff^dag dt}
///            + (2 kappa^2 / G) dt a^dag rho11 a
///   rho01 -> -(i kappa / G) a^dag rho11
///   rho11 -> (1 - (gamma1 + 2 kappa^2/G) dt) e^{-i Heff dt} rho11 e^{i Heff^dag dt}
BlockState step_excited_oracle(const ModelParams& p, const Matrix& rho11);

}  // namespace qjh
