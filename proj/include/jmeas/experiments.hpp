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
#include "jmeas/parallel.hpp"
#include "jmeas/random.hpp"
#include "jmeas/sim.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace jmeas {

/// Squared analytic standard errors for one state.
struct VarianceSample {
  double ungrouped = 0.0;
  double grouped = 0.0;
};

struct VarianceExperiment {
  std::vector<VarianceSample> samples;
  double mean_ungrouped = 0.0;
  double mean_grouped = 0.0;
};

/// Draws `num_states` Haar-random states and, for each, the squared standard
/// errors of measuring every term separately with `shots_per_pauli` shots
/// versus measuring `grouping` with proportional allocation of the same
/// budget. State i uses derive_seed(seed, i), so results do not depend on
/// `threads`.
inline VarianceExperiment variance_experiment(const Observable &obs,
                                              const GroupingResult &grouping,
                                              std::size_t num_states,
                                              std::uint64_t shots_per_pauli,
                                              std::uint64_t seed,
                                              std::size_t threads = 1) {
  const auto plan =
      allocate_shots(grouping, shots_per_pauli, ShotMode::Proportional);
  VarianceExperiment out;
  out.samples.resize(num_states);
  parallel_for(num_states, threads, [&](std::size_t i) {
    const QuantumState psi =
        haar_random_state(obs.num_qubits(), derive_seed(seed, i));
    const double ng = standard_error_ungrouped(psi, obs, shots_per_pauli);
    const double g = standard_error_grouped(psi, obs, grouping, plan);
    out.samples[i] = {ng * ng, g * g};
  });
  for (const auto &s : out.samples) {
    out.mean_ungrouped += s.ungrouped;
    out.mean_grouped += s.grouped;
  }
  if (num_states > 0) {
    out.mean_ungrouped /= static_cast<double>(num_states);
    out.mean_grouped /= static_cast<double>(num_states);
  }
  return out;
}

struct SweepRow {
  Method method = Method::NoGrouping;
  double p2 = 0.0;
  bool mitigated = false;
  double value = 0.0;
  double standard_error = 0.0;
};

/// Prepares the state with `prep` under `base` noise with p2 replaced by each
/// sweep value, then estimates <obs> for every method, raw and mitigated.
/// Raw and mitigated rows share the same sampled counts.
inline std::vector<SweepRow>
noise_sweep(const Observable &obs, const Circuit &prep,
            const std::vector<Method> &methods, const std::vector<double> &p2s,
            const NoiseModel &base, std::uint64_t shots, std::uint64_t seed,
            std::uint64_t calibration_shots = 8192, std::size_t threads = 1) {
  std::vector<SweepRow> rows;
  for (std::size_t j = 0; j < p2s.size(); ++j) {
    NoiseModel noise = base;
    noise.p2 = p2s[j];
    noise.validate();
    const auto state = apply_circuit(StateVector(prep.width()), prep, noise);
    const auto cal = calibrate(noise, prep.width(), calibration_shots,
                               derive_seed(seed, {2, j}));
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const auto grouping = group_observable(obs, methods[m], threads);
      const auto plan = allocate_shots(grouping, shots, ShotMode::Proportional);
      for (bool mit : {false, true}) {
        EstimateOptions opts;
        opts.noise = noise;
        opts.mitigate = mit;
        opts.calibration = cal;
        opts.seed = derive_seed(seed, {1, j, m});
        opts.threads = threads;
        const auto rep = estimate(state, obs, grouping, plan, opts);
        rows.push_back({methods[m], p2s[j], mit, rep.value, rep.standard_error});
      }
    }
  }
  return rows;
}

} // namespace jmeas
