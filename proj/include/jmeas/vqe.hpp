/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "jmeas/estimator.hpp"
#include "jmeas/grouping.hpp"
#include "jmeas/random.hpp"
#include "jmeas/sim.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace jmeas {

/// Ry layer on every qubit, then `depth` repetitions of
/// [CNOT chain q0->q1->...->q_{n-1}, Ry layer].
struct AnsatzSpec {
  std::size_t num_qubits = 2;
  std::size_t depth = 1;

  std::size_t num_params() const { return num_qubits * (depth + 1); }
};

inline Circuit ansatz_circuit(const AnsatzSpec &spec,
                              const std::vector<double> &params) {
  if (params.size() != spec.num_params())
    throw std::invalid_argument("ansatz expects " +
                                std::to_string(spec.num_params()) +
                                " parameters, got " +
                                std::to_string(params.size()));
  Circuit c(spec.num_qubits);
  std::size_t k = 0;
  for (std::size_t q = 0; q < spec.num_qubits; ++q)
    c.add(Gate::ry(q, params[k++]));
  for (std::size_t layer = 0; layer < spec.depth; ++layer) {
    for (std::size_t q = 0; q + 1 < spec.num_qubits; ++q)
      c.add(Gate::cnot(q, q + 1));
    for (std::size_t q = 0; q < spec.num_qubits; ++q)
      c.add(Gate::ry(q, params[k++]));
  }
  return c;
}

/// Standard SPSA gains a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma.
struct SpsaConfig {
  std::size_t iterations = 40;
  /// When unset, a is calibrated so the first update moves about
  /// `target_step` radians per parameter.
  std::optional<double> a;
  double c = 0.2;
  /// When unset, iterations / 10.
  std::optional<double> A;
  double alpha = 0.602;
  double gamma = 0.101;
  double target_step = 0.2 * std::numbers::pi;
  std::size_t calibration_samples = 5;
  std::uint64_t seed = 0;
  /// Readout recalibration period in iterations when mitigating.
  std::size_t recalibration_interval = 10;

  void validate() const {
    if (iterations == 0)
      throw std::invalid_argument("SPSA needs at least one iteration");
    if (a && !(*a > 0.0))
      throw std::invalid_argument("SPSA gain a must be positive");
    if (!(c > 0.0))
      throw std::invalid_argument("SPSA gain c must be positive");
    if (A && !(*A >= 0.0))
      throw std::invalid_argument("SPSA stability constant must be >= 0");
    if (recalibration_interval == 0)
      throw std::invalid_argument("recalibration interval must be positive");
  }
};

struct VqeConfig {
  Method method = Method::TPBBell;
  AnsatzSpec ansatz;
  /// Shots per circuit; multiplied by group size in proportional mode.
  std::uint64_t shots = 8192;
  ShotMode shot_mode = ShotMode::Uniform;
  SpsaConfig spsa;
  std::optional<NoiseModel> noise;
  bool mitigate = false;
  /// Starting point; seeded uniform in [-pi, pi] when absent.
  std::optional<std::vector<double>> initial_params;
  std::size_t threads = 1;
};

struct VqeIteration {
  std::size_t iteration = 0;
  /// Parameters at which E+ and E- were evaluated.
  std::vector<double> params;
  double energy_plus = 0.0;
  double energy_minus = 0.0;
  /// Circuits executed so far, this iteration included.
  std::uint64_t circuits = 0;
};

struct VqeTrajectory {
  std::vector<VqeIteration> iterations;
  std::size_t groups = 0;
  double gain_a = 0.0;
  /// Circuits spent calibrating `a`; kept out of the per-iteration ledger.
  std::uint64_t gain_calibration_circuits = 0;
  std::vector<double> final_params;
  /// Noiseless <A> at final_params, computed exactly.
  double final_energy = 0.0;
};

namespace detail {

class EnergyEvaluator {
public:
  EnergyEvaluator(const Observable &obs, const VqeConfig &cfg)
      : obs_(obs), cfg_(cfg),
        grouping_(group_observable(obs, cfg.method, cfg.threads)),
        plan_(allocate_shots(grouping_, cfg.shots, cfg.shot_mode)) {}

  const GroupingResult &grouping() const { return grouping_; }

  void recalibrate(std::uint64_t seed) {
    calibration_ = calibrate(cfg_.noise.value_or(NoiseModel{}),
                             cfg_.ansatz.num_qubits, 8192, seed);
  }

  double operator()(const std::vector<double> &params,
                    std::uint64_t seed) const {
    const auto prep = ansatz_circuit(cfg_.ansatz, params);
    const auto state =
        apply_circuit(StateVector(cfg_.ansatz.num_qubits), prep, cfg_.noise);
    EstimateOptions opts;
    opts.noise = cfg_.noise;
    opts.mitigate = cfg_.mitigate;
    opts.calibration = calibration_;
    opts.seed = seed;
    opts.threads = cfg_.threads;
    return estimate(state, obs_, grouping_, plan_, opts).value;
  }

private:
  const Observable &obs_;
  const VqeConfig &cfg_;
  GroupingResult grouping_;
  ShotPlan plan_;
  std::optional<CalibrationMatrix> calibration_;
};

inline std::vector<double> rademacher(std::size_t n, Rng &rng) {
  std::vector<double> d(n);
  for (auto &v : d)
    v = (rng() & 1u) ? 1.0 : -1.0;
  return d;
}

inline std::vector<double> shifted(std::vector<double> theta,
                                   const std::vector<double> &delta,
                                   double scale) {
  for (std::size_t i = 0; i < theta.size(); ++i)
    theta[i] += scale * delta[i];
  return theta;
}

} // namespace detail

/// SPSA minimization of <A> over the ansatz parameters. Every energy is an
/// estimator run over the fixed grouping, so each SPSA iteration executes
/// exactly 2K circuits (K = number of groups).
inline VqeTrajectory run_vqe(const Observable &obs, const VqeConfig &cfg) {
  cfg.spsa.validate();
  if (cfg.method == Method::ALL)
    throw std::invalid_argument("ALL grouping has no measurement circuits");
  if (obs.num_qubits() != cfg.ansatz.num_qubits)
    throw std::invalid_argument("ansatz width does not match observable");
  const auto &spsa = cfg.spsa;
  const auto n = cfg.ansatz.num_params();

  detail::EnergyEvaluator energy(obs, cfg);
  const auto k_groups = static_cast<std::uint64_t>(energy.grouping().size());
  auto rng = make_rng(derive_seed(spsa.seed, {0}));

  std::vector<double> theta;
  if (cfg.initial_params) {
    theta = *cfg.initial_params;
    if (theta.size() != n)
      throw std::invalid_argument("initial parameter count mismatch");
  } else {
    std::uniform_real_distribution<double> unif(-std::numbers::pi,
                                                std::numbers::pi);
    theta.resize(n);
    for (auto &t : theta)
      t = unif(rng);
  }

  VqeTrajectory traj;
  traj.groups = energy.grouping().size();
  const double big_a = spsa.A.value_or(static_cast<double>(spsa.iterations) / 10.0);
  if (cfg.mitigate)
    energy.recalibrate(derive_seed(spsa.seed, {3, 0}));

  if (spsa.a) {
    traj.gain_a = *spsa.a;
  } else {
    double mean_grad = 0.0;
    const std::size_t samples = std::max<std::size_t>(1, spsa.calibration_samples);
    for (std::size_t s = 0; s < samples; ++s) {
      const auto delta = detail::rademacher(n, rng);
      const double ep = energy(detail::shifted(theta, delta, spsa.c),
                               derive_seed(spsa.seed, {4, s, 0}));
      const double em = energy(detail::shifted(theta, delta, -spsa.c),
                               derive_seed(spsa.seed, {4, s, 1}));
      mean_grad += std::abs(ep - em) / (2.0 * spsa.c);
      traj.gain_calibration_circuits += 2 * k_groups;
    }
    mean_grad /= static_cast<double>(samples);
    // Fallback keeps a finite gain when the landscape looks flat.
    traj.gain_a = mean_grad > 1e-12
                      ? spsa.target_step * std::pow(big_a + 1.0, spsa.alpha) /
                            mean_grad
                      : spsa.target_step;
  }

  std::uint64_t circuits = 0;
  for (std::size_t k = 0; k < spsa.iterations; ++k) {
    if (cfg.mitigate && k > 0 && k % spsa.recalibration_interval == 0)
      energy.recalibrate(derive_seed(spsa.seed, {3, k}));
    const double ak =
        traj.gain_a / std::pow(static_cast<double>(k) + 1.0 + big_a, spsa.alpha);
    const double ck = spsa.c / std::pow(static_cast<double>(k) + 1.0, spsa.gamma);
    const auto delta = detail::rademacher(n, rng);
    VqeIteration rec;
    rec.iteration = k;
    rec.params = theta;
    rec.energy_plus = energy(detail::shifted(theta, delta, ck),
                             derive_seed(spsa.seed, {1, k, 0}));
    rec.energy_minus = energy(detail::shifted(theta, delta, -ck),
                              derive_seed(spsa.seed, {1, k, 1}));
    circuits += 2 * k_groups;
    rec.circuits = circuits;
    const double g = (rec.energy_plus - rec.energy_minus) / (2.0 * ck);
    for (std::size_t i = 0; i < n; ++i)
      theta[i] -= ak * g / delta[i];
    traj.iterations.push_back(std::move(rec));
  }
  traj.final_params = theta;
  traj.final_energy = expectation_exact(
      apply_circuit(StateVector(cfg.ansatz.num_qubits),
                    ansatz_circuit(cfg.ansatz, theta), std::nullopt),
      obs);
  return traj;
}

} // namespace jmeas
