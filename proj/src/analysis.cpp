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

#include "qjh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qjh/liouville.hpp"
#include "qjh/trajectories.hpp"

namespace qjh {

double relative_error(double measured, double reference, double floor) {
  return std::abs(measured - reference) / std::max(reference, floor);
}

bool ComparisonReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const ComparisonEntry& e) { return !e.asserted || e.pass; });
}

bool SeriesReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const SeriesRow& r) { return !r.asserted || r.pass; });
}

namespace {

ComparisonEntry make_entry(std::string label, double parameter, double measured,
                           double reference, double band, bool asserted,
                           const BandConfig& cfg) {
  ComparisonEntry e;
  e.label = std::move(label);
  e.parameter = parameter;
  e.measured = measured;
  e.reference = reference;
  e.relative_error = relative_error(measured, reference, cfg.ratio_floor);
  e.band = band;
  e.asserted = asserted;
  e.pass = e.relative_error <= band;
  return e;
}

// Norm^2 of e^{-i Heff t} psi.
double no_jump_survival(const ModelParams& p, double t) {
  const ReducedModel r = build_reduced_model(p);
  return evolve_no_jump(r.h_eff, p.psi0(), t).squaredNorm();
}

// History with a photon first registered at time jump_step*dt and held for
// `ones` projections.
History photon_history(ProjectionConvention conv, int jump_step, int ones) {
  const int zeros = conv == ProjectionConvention::Literal ? jump_step : jump_step - 1;
  History h(zeros, 0);
  h.insert(h.end(), ones, 1);
  return h;
}

double first_order_terms(const ModelParams& p) {
  return 1.0 / (p.G() * p.dt) + p.gamma1 * p.dt;
}

}  // namespace

ComparisonReport compare_no_jump(const ModelParams& p, const BandConfig& cfg) {
  p.validate();
  ComparisonReport rep;
  rep.name = "no_jump";
  rep.params = p;
  const HistoryEvaluator eval(p);
  const History zeros(p.n_steps, 0);
  const double measured = eval.prefix_probabilities(zeros).back();
  const double t = p.n_steps * p.dt;
  const double reference = no_jump_survival(p, t);
  const double band =
      cfg.headroom * (first_order_terms(p) + p.kappa * p.kappa * t / p.G());
  rep.entries.push_back(make_entry("no_jump_history", p.n_steps, measured, reference, band, true, cfg));
  return rep;
}

ComparisonReport compare_one_jump(const ModelParams& p, int jump_step, int window_steps,
                                  const BandConfig& cfg) {
  p.validate();
  if (jump_step < 1 || jump_step > p.n_steps) {
    throw PreconditionError("compare_one_jump: jump_step must lie in [1, n_steps]");
  }
  if (window_steps < 1) throw PreconditionError("compare_one_jump: window shorter than one step");

  ComparisonReport rep;
  rep.name = "one_jump";
  rep.params = p;
  const ProjectionConvention conv = ProjectionConvention::Literal;
  const HistoryEvaluator eval(p, conv);
  const History h = photon_history(conv, jump_step, window_steps + 1);
  const std::vector<double> prefix = eval.prefix_probabilities(h);
  const std::size_t first = h.size() - window_steps - 1;  // index of the first 1
  const double registered = prefix[first];
  const double leaked = prefix.back();
  const double absorbed = registered - leaked;

  const double t = jump_step * p.dt;
  const ReducedModel r = build_reduced_model(p);
  const Vector evolved = evolve_no_jump(r.h_eff, p.psi0(), t);
  const double reference = r.jump_rate_prefactor * p.dt * apply_jump(r.jump_op, evolved).squaredNorm();

  const double leak_bound = std::exp(-p.gamma1 * window_steps * p.dt);
  const double band =
      cfg.headroom * (first_order_terms(p) + p.kappa * p.kappa * t / p.G()) + leak_bound;
  rep.entries.push_back(make_entry("one_jump_class", jump_step, absorbed, reference, band, true, cfg));
  rep.entries.push_back(make_entry("one_jump_fine", jump_step, registered, reference, band, false, cfg));

  ComparisonEntry leak;
  leak.label = "window_leakage";
  leak.parameter = window_steps;
  leak.measured = registered > 0.0 ? leaked / registered : 0.0;
  leak.reference = leak_bound;
  leak.relative_error = relative_error(leak.measured, leak.reference, cfg.ratio_floor);
  leak.band = leak_bound * (1.0 + cfg.headroom * first_order_terms(p));
  leak.asserted = false;
  leak.pass = leak.measured <= leak.band;
  rep.entries.push_back(leak);
  return rep;
}

ComparisonReport compare_post_jump_persistence(const ModelParams& p, int jump_step, int k_max,
                                               const BandConfig& cfg) {
  p.validate();
  if (jump_step < 1) throw PreconditionError("compare_post_jump_persistence: jump_step must be >= 1");
  if (k_max < 1) throw PreconditionError("compare_post_jump_persistence: k_max must be >= 1");

  ComparisonReport rep;
  rep.name = "post_jump_persistence";
  rep.params = p;
  const ProjectionConvention conv = ProjectionConvention::Literal;
  const HistoryEvaluator eval(p, conv);
  const History h = photon_history(conv, jump_step, k_max + 1);
  const std::vector<double> prefix = eval.prefix_probabilities(h);
  const std::size_t first = h.size() - k_max - 1;
  const double registered = prefix[first];
  if (!(registered > 0.0)) {
    throw PreconditionError("compare_post_jump_persistence: no photon can be registered from this state");
  }
  const double band = cfg.headroom * first_order_terms(p);
  for (int k = 1; k <= k_max; ++k) {
    const double measured = prefix[first + k] / registered;
    const double reference = std::pow(1.0 - p.gamma1 * p.dt, k);
    rep.entries.push_back(make_entry("persistence", k, measured, reference, band, true, cfg));
  }
  return rep;
}

ScalingFit decoherence_scaling(const ModelParams& base, SweepParameter parameter,
                               const std::vector<double>& values, ScalingPair pair) {
  if (values.size() < 4) throw DegenerateInputError("decoherence_scaling: need at least 4 sweep points");
  const int n = base.n_steps;
  if (n < 4) throw PreconditionError("decoherence_scaling: n_steps must be >= 4");
  const int mid = n / 2;

  History h(n, 0), hp(n, 0);
  hp[mid] = 1;
  if (pair == ScalingPair::LeadingEdge) {
    h[mid - 1] = 1;
    h[mid] = 1;
  }

  ScalingFit fit;
  fit.parameter = parameter;
  fit.pair = pair;
  for (double v : values) {
    ModelParams p = base;
    (parameter == SweepParameter::Gamma2 ? p.gamma2 : p.dt) = v;
    p.validate();
    const HistoryEvaluator eval(p);
    const Complex d = eval.functional(h, hp);
    const double ph = eval.probability(h);
    const double php = eval.probability(hp);
    ScalingPoint pt;
    pt.value = v;
    pt.g_dt = p.G() * p.dt;
    pt.ratio = ph > 0.0 && php > 0.0 ? std::norm(d) / (ph * php) : 0.0;
    if (!(pt.ratio > 0.0) || !std::isfinite(pt.ratio)) {
      throw DegenerateInputError("decoherence_scaling: off-diagonal ratio vanishes; nothing to fit");
    }
    pt.log_g_dt = std::log(pt.g_dt);
    pt.log_ratio = std::log(pt.ratio);
    fit.points.push_back(pt);
  }

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& pt : fit.points) {
    lo = std::min(lo, pt.g_dt);
    hi = std::max(hi, pt.g_dt);
  }
  if (hi < 30.0 * lo) throw DegenerateInputError("decoherence_scaling: sweep spans less than x30 in G dt");

  const double m = static_cast<double>(fit.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : fit.points) {
    sx += pt.log_g_dt;
    sy += pt.log_ratio;
    sxx += pt.log_g_dt * pt.log_g_dt;
    sxy += pt.log_g_dt * pt.log_ratio;
  }
  const double denom = m * sxx - sx * sx;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  double ss = 0.0;
  for (auto& pt : fit.points) {
    pt.residual = pt.log_ratio - (fit.intercept + fit.slope * pt.log_g_dt);
    ss += pt.residual * pt.residual;
  }
  fit.rms_residual = std::sqrt(ss / m);
  return fit;
}

std::vector<int> even_checkpoints(int total_steps, int n_checkpoints) {
  if (n_checkpoints < 1) throw PreconditionError("checkpoints: needs at least one checkpoint");
  std::vector<int> checkpoints;
  for (int k = 1; k <= n_checkpoints; ++k) {
    const int s = static_cast<int>(std::llround(static_cast<double>(total_steps) * k / n_checkpoints));
    if (s > 0 && (checkpoints.empty() || s > checkpoints.back())) checkpoints.push_back(s);
  }
  return checkpoints;
}

SeriesReport ensemble_consistency(const ModelParams& p, std::span<const TrajectoryRecord> records,
                                  const std::vector<int>& checkpoint_steps, double horizon) {
  if (records.empty()) throw PreconditionError("ensemble_consistency: no records");
  const LindbladModel reduced = build_reduced_model(p).generator();
  const Vector psi = p.psi0();
  const Matrix rho0 = psi * psi.adjoint();
  const double band = 3.0 / std::sqrt(static_cast<double>(records.size())) +
                      2.0 * p.kappa * p.kappa * p.dt * horizon / p.G();

  SeriesReport rep;
  rep.name = "unraveling_consistency";
  rep.parameter_name = "time";
  for (std::size_t c = 0; c < checkpoint_steps.size(); ++c) {
    const double t = checkpoint_steps[c] * p.dt;
    const Matrix exact = build_propagator(reduced, t).apply(rho0);
    const Matrix avg = ensemble_average(records, EnsembleWeighting::Sampled, static_cast<int>(c));
    SeriesRow row;
    row.parameter = t;
    row.measured = trace_distance(avg, exact, 1e-8);
    row.band = band;
    row.pass = row.measured <= band;
    rep.rows.push_back(row);
  }
  return rep;
}

SeriesReport unraveling_consistency(const ModelParams& p, int trajectories, double horizon,
                                    std::uint64_t seed, int n_checkpoints) {
  p.validate();
  if (trajectories < 100) throw PreconditionError("unraveling_consistency: needs at least 100 trajectories");
  const std::vector<int> checkpoints =
      even_checkpoints(steps_for_horizon(p, horizon), n_checkpoints);
  const TrajectorySampler sampler(p, horizon, checkpoints);
  const std::vector<TrajectoryRecord> records = sample_ensemble(sampler, seed, trajectories);
  return ensemble_consistency(p, records, checkpoints, horizon);
}

namespace {

std::vector<double> adiabatic_errors(const ModelParams& p, const std::vector<double>& times) {
  const LindbladModel total = build_total_model(p);
  const LindbladModel reduced = build_reduced_model(p).generator();
  const Vector psi = p.psi0();
  const Matrix sys0 = psi * psi.adjoint();
  const Matrix zero = Matrix::Zero(p.d_sys, p.d_sys);
  const Matrix full0 = block_compose(BlockState{sys0, zero, zero, zero});

  std::vector<double> out;
  for (double t : times) {
    const Matrix marginal = trace_out_mode(build_propagator(total, t).apply(full0));
    const Matrix normalized = marginal / marginal.trace();
    const Matrix red = build_propagator(reduced, t).apply(sys0);
    out.push_back(trace_distance(normalized, red, 1e-8));
  }
  return out;
}

}  // namespace

SeriesReport adiabatic_validity(const ModelParams& p, double horizon, const BandConfig& cfg,
                                int n_samples) {
  p.validate();
  const double t_valid = 10.0 / p.gamma1;
  if (!(horizon >= t_valid * (1.0 - 1e-12))) {
    throw PreconditionError("adiabatic_validity: horizon must be >= 10/gamma1");
  }
  if (n_samples < 2) throw PreconditionError("adiabatic_validity: needs at least 2 samples");

  std::vector<double> times;
  const double t0 = 1.0 / p.gamma1;
  for (int i = 0; i < n_samples; ++i) {
    times.push_back(t0 * std::pow(horizon / t0, static_cast<double>(i) / (n_samples - 1)));
  }
  const std::vector<double> errors = adiabatic_errors(p, times);
  ModelParams refined_params = p;
  refined_params.gamma2 *= 10.0;
  const std::vector<double> refined = adiabatic_errors(refined_params, times);

  SeriesReport rep;
  rep.name = "adiabatic_validity";
  rep.parameter_name = "time";
  const double band = cfg.headroom * p.kappa / p.gamma1;
  double worst = 0.0, worst_refined = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    SeriesRow row;
    row.parameter = times[i];
    row.measured = errors[i];
    row.band = band;
    row.asserted = times[i] >= t_valid * (1.0 - 1e-12);
    row.pass = row.measured <= band;
    if (row.asserted) {
      worst = std::max(worst, errors[i]);
      worst_refined = std::max(worst_refined, refined[i]);
    }
    rep.rows.push_back(row);
  }
  // Final row: worst asserted error with gamma2 x 10, banded by the base worst.
  SeriesRow shrink;
  shrink.parameter = refined_params.gamma2;
  shrink.measured = worst_refined;
  shrink.band = worst;
  shrink.pass = worst_refined < worst || (worst == 0.0 && worst_refined == 0.0);
  rep.rows.push_back(shrink);
  return rep;
}

}  // namespace qjh
