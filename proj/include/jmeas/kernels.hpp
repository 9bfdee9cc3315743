/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Amplitude-level kernels shared by the simulator and the measurement
// catalog. Qubit q is bit q of a basis-state index.

#include "jmeas/circuit.hpp"
#include "jmeas/pauli.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>

namespace jmeas::kernels {

using amplitude = std::complex<double>;

/// Row-major 2x2 complex matrix.
struct Mat2 {
  amplitude m00, m01, m10, m11;
};

inline Mat2 matrix_of(const Gate &g) {
  using namespace std::complex_literals;
  const double r = 1.0 / std::numbers::sqrt2;
  switch (g.kind) {
  case GateKind::H:
    return {r, r, r, -r};
  case GateKind::Sdg:
    return {1.0, 0.0, 0.0, -1.0i};
  case GateKind::X:
    return {0.0, 1.0, 1.0, 0.0};
  case GateKind::Z:
    return {1.0, 0.0, 0.0, -1.0};
  case GateKind::Ry: {
    const double c = std::cos(g.params[0] / 2), s = std::sin(g.params[0] / 2);
    return {c, -s, s, c};
  }
  case GateKind::U2: {
    const double phi = g.params[0], lambda = g.params[1];
    return {r, -r * std::exp(1.0i * lambda), r * std::exp(1.0i * phi),
            r * std::exp(1.0i * (phi + lambda))};
  }
  default:
    throw std::invalid_argument("gate has no 2x2 matrix");
  }
}

inline Mat2 conj(const Mat2 &m) {
  return {std::conj(m.m00), std::conj(m.m01), std::conj(m.m10),
          std::conj(m.m11)};
}

/// Applies `m` to qubit `q` of a state over `bits` qubits.
inline void apply_1q(std::span<amplitude> psi, std::size_t q, const Mat2 &m) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < psi.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const amplitude a0 = psi[i];
      const amplitude a1 = psi[i + stride];
      psi[i] = m.m00 * a0 + m.m01 * a1;
      psi[i + stride] = m.m10 * a0 + m.m11 * a1;
    }
  }
}

inline void apply_cnot(std::span<amplitude> psi, std::size_t control,
                       std::size_t target) {
  const std::size_t cm = std::size_t{1} << control;
  const std::size_t tm = std::size_t{1} << target;
  for (std::size_t i = 0; i < psi.size(); ++i)
    if ((i & cm) && !(i & tm))
      std::swap(psi[i], psi[i | tm]);
}

/// Applies a unitary gate; MEASURE_ALL is a no-op here.
inline void apply_gate(std::span<amplitude> psi, const Gate &g) {
  switch (g.kind) {
  case GateKind::CNOT:
    apply_cnot(psi, g.qubits[0], g.qubits[1]);
    return;
  case GateKind::MeasureAll:
    return;
  default:
    apply_1q(psi, g.qubits[0], matrix_of(g));
  }
}

/// P|b> = i^{|x&z|} (-1)^{|z&b|} |b ^ x>, masks over at most 64 qubits.
struct PauliAction {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  amplitude phase{1.0, 0.0};

  explicit PauliAction(const PauliString &p) : x(p.x_mask()), z(p.z_mask()) {
    if (p.size() > 64)
      throw std::invalid_argument("Pauli action limited to 64 qubits");
    phase = phase_factor(std::popcount(x & z));
  }

  amplitude coefficient(std::uint64_t b) const {
    return (std::popcount(z & b) & 1) ? -phase : phase;
  }
};

/// <psi|P|psi> for a normalized statevector.
inline amplitude pauli_expectation(std::span<const amplitude> psi,
                                   const PauliString &p) {
  const PauliAction act(p);
  amplitude acc{0.0, 0.0};
  for (std::size_t b = 0; b < psi.size(); ++b)
    acc += std::conj(psi[b ^ act.x]) * act.coefficient(b) * psi[b];
  return acc;
}

} // namespace jmeas::kernels
