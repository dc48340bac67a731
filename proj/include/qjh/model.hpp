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

#include <string>
#include <vector>

#include "qjh/hilbert.hpp"

namespace qjh {

/// How the bare system Hamiltonian H0 is specified.
struct SystemHamiltonian {
  enum class Kind { Zero, Diagonal, Explicit };

  Kind kind = Kind::Zero;
  std::vector<double> frequencies;  // Diagonal
  Matrix explicit_matrix;           // Explicit

  static SystemHamiltonian zero() { return {}; }
  static SystemHamiltonian diagonal(std::vector<double> freqs);
  static SystemHamiltonian explicit_(Matrix h);

  /// Throws PreconditionError when the description does not fit d_sys or H0 is
  /// not Hermitian.
  Matrix build(Index d_sys) const;
};

/// Physical and discretisation parameters of the photodetection model.
/// Units: hbar = 1; rates in 1/time, kappa in rad/time.
struct ModelParams {
  double kappa = 0.05;
  double gamma1 = 1.0;
  double gamma2 = 500.0;
  int d_sys = 2;
  SystemHamiltonian h0;
  double dt = 0.05;
  int n_steps = 8;
  Vector initial_state;  // length d_sys; empty means the top level |d_sys-1>

  /// Combined damping of output-mode coherences, gamma1/2 + 2*gamma2.
  double G() const { return gamma1 / 2.0 + 2.0 * gamma2; }
  double total_time() const { return n_steps * dt; }

  /// Normalised initial system state.
  Vector psi0() const;
  Matrix h0_matrix() const { return h0.build(d_sys); }

  /// Hard validation (signs, dimensions, finite values). kappa may be 0 to
  /// reach the decoupled limit; all other rates must be positive.
  void validate() const;

  /// Advisory checks of the rate hierarchy gamma2 >> gamma1 >> kappa,
  /// 1/G << dt << 1/gamma1 and kappa<n> << gamma1. Never throws.
  std::vector<std::string> regime_warnings(double margin = 10.0) const;
};

/// Hamiltonian plus ordered Lindblad operators of a Markovian generator.
struct LindbladModel {
  Operator H;
  std::vector<Operator> lindblad_ops;

  Index dim() const { return H.dim(); }
  void validate(double tol = kStructuralTol) const;
};

/// Lowering operator: qubit |0><1| for d = 2, truncated oscillator with
/// <n-1|a|n> = sqrt(n) otherwise (the two coincide at d = 2).
Matrix lowering_operator(Index d);

/// Output-mode operators (2-level).
Matrix mode_lowering();
Matrix pauli_z();

/// H = H0 (x) 1 + kappa (a^dag (x) b + a (x) b^dag) with Lindblad operators
/// sqrt(gamma1) 1 (x) b and sqrt(gamma2) 1 (x) sigma_z.
LindbladModel build_total_model(const ModelParams& p);

/// Adiabatically reduced system-only model.
struct ReducedModel {
  Operator h0;
  Operator h_eff;     // H0 - i (kappa^2/G) a^dag a, non-Hermitian
  Operator jump_op;   // a
  double jump_rate_prefactor = 0.0;  // 2 kappa^2 / G

  /// Generic Lindblad form of the reduced master equation: Hamiltonian H0,
  /// single Lindblad operator sqrt(2 kappa^2/G) a.
  LindbladModel generator() const;
};

ReducedModel build_reduced_model(const ModelParams& p);

}  // namespace qjh
