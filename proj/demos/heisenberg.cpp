/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
// Groups the two-qubit Heisenberg model, prints the measurement circuits,
// and estimates the singlet energy with and without grouping.

#include "jmeas/jmeas.hpp"

#include <cstdio>

int main() {
  using namespace jmeas;
  const auto obs = parse_observable("1 XX\n1 YY\n1 ZZ");
  const QuantumState singlet =
      apply_circuit(StateVector(2), singlet_circuit(), std::nullopt);

  for (auto m : {Method::NoGrouping, Method::TPBBell}) {
    const auto g = group_observable(obs, m);
    std::printf("%s: %zu group(s)\n", to_string(m).c_str(), g.size());
    for (const auto &grp : g.groups)
      std::printf("%s", dump(circuit_for(*grp.assignment, 2)).c_str());

    EstimateOptions opts;
    opts.noise = NoiseModel{0.001, 0.0, {0.01, 0.1}, {}};
    opts.mitigate = true;
    opts.seed = 7;
    const auto plan = allocate_shots(g, 2000, ShotMode::Proportional);
    const auto rep = estimate(singlet, obs, g, plan, opts);
    std::printf("  <H> = %.4f +- %.4f\n\n", rep.value, rep.standard_error);
  }
}
