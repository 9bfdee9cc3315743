/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "jmeas/circuit.hpp"
#include "jmeas/kernels.hpp"
#include "jmeas/observable.hpp"
#include "jmeas/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace jmeas {

using kernels::amplitude;

inline constexpr std::size_t max_statevector_qubits = 16;
inline constexpr std::size_t max_density_qubits = 6;

class StateVector {
public:
  StateVector() = default;
  /// |0...0> on `n` qubits.
  explicit StateVector(std::size_t n) : n_(n) {
    if (n > max_statevector_qubits)
      throw std::invalid_argument("statevector limited to " +
                                  std::to_string(max_statevector_qubits) +
                                  " qubits");
    amps_.assign(std::size_t{1} << n, amplitude{});
    amps_[0] = 1.0;
  }
  StateVector(std::size_t n, std::vector<amplitude> amps)
      : n_(n), amps_(std::move(amps)) {
    if (n > max_statevector_qubits)
      throw std::invalid_argument("statevector limited to " +
                                  std::to_string(max_statevector_qubits) +
                                  " qubits");
    if (amps_.size() != (std::size_t{1} << n))
      throw std::invalid_argument("amplitude count does not match 2^n");
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const amplitude> amplitudes() const { return amps_; }
  std::span<amplitude> amplitudes() { return amps_; }
  amplitude operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double s = 0.0;
    for (auto a : amps_)
      s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    const double n = norm();
    if (n == 0.0)
      throw std::invalid_argument("cannot normalize the zero vector");
    for (auto &a : amps_)
      a /= n;
  }

  void apply(const Gate &g) { kernels::apply_gate(amps_, g); }

private:
  std::size_t n_ = 0;
  std::vector<amplitude> amps_;
};

/// rho stored column-major as a 2n-qubit vector: entry (r, c) lives at
/// r + (c << n), so a gate U on qubit q acts as U on bit q and conj(U) on
/// bit q + n.
class DensityMatrix {
public:
  DensityMatrix() = default;
  explicit DensityMatrix(std::size_t n) : n_(n) {
    check_width(n);
    data_.assign(std::size_t{1} << (2 * n), amplitude{});
    data_[0] = 1.0;
  }
  explicit DensityMatrix(const StateVector &psi) : n_(psi.num_qubits()) {
    check_width(n_);
    const auto d = psi.dim();
    data_.resize(d * d);
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t r = 0; r < d; ++r)
        data_[r + c * d] = psi[r] * std::conj(psi[c]);
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  amplitude operator()(std::size_t r, std::size_t c) const {
    return data_[r + (c << n_)];
  }
  amplitude &operator()(std::size_t r, std::size_t c) {
    return data_[r + (c << n_)];
  }

  amplitude trace() const {
    amplitude t{};
    for (std::size_t i = 0; i < dim(); ++i)
      t += (*this)(i, i);
    return t;
  }

  void apply(const Gate &g) {
    switch (g.kind) {
    case GateKind::MeasureAll:
      return;
    case GateKind::CNOT:
      kernels::apply_cnot(data_, g.qubits[0], g.qubits[1]);
      kernels::apply_cnot(data_, g.qubits[0] + n_, g.qubits[1] + n_);
      return;
    default: {
      const auto m = kernels::matrix_of(g);
      kernels::apply_1q(data_, g.qubits[0], m);
      kernels::apply_1q(data_, g.qubits[0] + n_, kernels::conj(m));
    }
    }
  }

  /// rho -> (1-p) rho + p Tr_S(rho) (x) I/2^|S| for the qubits in `mask`.
  void depolarize(std::uint64_t mask, double p) {
    if (p == 0.0 || mask == 0)
      return;
    const std::size_t d = dim();
    const double scale = 1.0 / static_cast<double>(std::uint64_t{1}
                                                   << std::popcount(mask));
    std::vector<amplitude> reduced(d * d, amplitude{});
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t r = 0; r < d; ++r)
        if ((r & mask) == (c & mask))
          reduced[(r & ~mask) + (c & ~mask) * d] += (*this)(r, c);
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t r = 0; r < d; ++r) {
        amplitude mixed{};
        if ((r & mask) == (c & mask))
          mixed = reduced[(r & ~mask) + (c & ~mask) * d] * scale;
        auto &e = (*this)(r, c);
        e = (1.0 - p) * e + p * mixed;
      }
  }

private:
  static void check_width(std::size_t n) {
    if (n > max_density_qubits)
      throw std::invalid_argument("density matrix limited to " +
                                  std::to_string(max_density_qubits) +
                                  " qubits");
  }

  std::size_t n_ = 0;
  std::vector<amplitude> data_;
};

using QuantumState = std::variant<StateVector, DensityMatrix>;

inline std::size_t num_qubits(const QuantumState &s) {
  return std::visit([](const auto &v) { return v.num_qubits(); }, s);
}

struct ReadoutError {
  double p1_given_0 = 0.0; ///< p(1|0)
  double p0_given_1 = 0.0; ///< p(0|1)

  bool none() const { return p1_given_0 == 0.0 && p0_given_1 == 0.0; }
};

/// Depolarizing probabilities after each 1q / 2q gate, plus readout
/// confusion. `readout_per_qubit`, when non-empty, overrides `readout`.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  ReadoutError readout;
  std::vector<ReadoutError> readout_per_qubit;

  ReadoutError readout_for(std::size_t q) const {
    return q < readout_per_qubit.size() ? readout_per_qubit[q] : readout;
  }

  void validate() const {
    auto check = [](double p, const char *what) {
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
    };
    check(p1, "p1");
    check(p2, "p2");
    check(readout.p1_given_0, "p(1|0)");
    check(readout.p0_given_1, "p(0|1)");
    for (const auto &r : readout_per_qubit) {
      check(r.p1_given_0, "p(1|0)");
      check(r.p0_given_1, "p(0|1)");
    }
  }
};

/// Outcome histogram over `width` bits; bit q of a key is qubit q. Values are
/// integral for sampled counts and real after mitigation.
class Counts {
public:
  Counts() = default;
  explicit Counts(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }
  const std::map<std::uint64_t, double> &entries() const { return entries_; }
  void add(std::uint64_t outcome, double weight = 1.0) {
    entries_[outcome] += weight;
  }
  double get(std::uint64_t outcome) const {
    const auto it = entries_.find(outcome);
    return it == entries_.end() ? 0.0 : it->second;
  }
  double total() const {
    double t = 0.0;
    for (const auto &[k, v] : entries_)
      t += v;
    return t;
  }

private:
  std::size_t width_ = 0;
  std::map<std::uint64_t, double> entries_;
};

/// Applies the circuit gate by gate. With a noise model the state is
/// promoted to a density matrix and every 1q (2q) gate is followed by a
/// depolarizing channel with p1 (p2) on the gate's qubits.
inline QuantumState apply_circuit(QuantumState state, const Circuit &c,
                                  const std::optional<NoiseModel> &noise = {}) {
  if (num_qubits(state) != c.width())
    throw std::invalid_argument("state has " +
                                std::to_string(num_qubits(state)) +
                                " qubits, circuit has " +
                                std::to_string(c.width()));
  const bool noisy = noise && (noise->p1 > 0.0 || noise->p2 > 0.0);
  if (noisy) {
    noise->validate();
    if (auto *sv = std::get_if<StateVector>(&state))
      state = DensityMatrix(*sv);
  }
  if (auto *sv = std::get_if<StateVector>(&state)) {
    for (const auto &g : c.gates())
      sv->apply(g);
    return state;
  }
  auto &rho = std::get<DensityMatrix>(state);
  for (const auto &g : c.gates()) {
    rho.apply(g);
    if (!noisy || g.kind == GateKind::MeasureAll)
      continue;
    std::uint64_t mask = std::uint64_t{1} << g.qubits[0];
    if (g.arity() == 2)
      mask |= std::uint64_t{1} << g.qubits[1];
    rho.depolarize(mask, g.arity() == 2 ? noise->p2 : noise->p1);
  }
  return state;
}

/// Computational-basis outcome probabilities.
inline std::vector<double> probabilities(const QuantumState &s) {
  if (const auto *sv = std::get_if<StateVector>(&s)) {
    std::vector<double> p(sv->dim());
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = std::norm((*sv)[i]);
    return p;
  }
  const auto &rho = std::get<DensityMatrix>(s);
  std::vector<double> p(rho.dim());
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = std::max(0.0, rho(i, i).real());
  return p;
}

/// Exact distribution after independent per-bit readout flips.
inline std::vector<double> apply_readout_confusion(std::vector<double> p,
                                                   const NoiseModel &noise) {
  const std::size_t n = std::countr_zero(p.size());
  for (std::size_t q = 0; q < n; ++q) {
    const auto r = noise.readout_for(q);
    if (r.none())
      continue;
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i & bit)
        continue;
      const double p0 = p[i], p1 = p[i | bit];
      p[i] = p0 * (1.0 - r.p1_given_0) + p1 * r.p0_given_1;
      p[i | bit] = p0 * r.p1_given_0 + p1 * (1.0 - r.p0_given_1);
    }
  }
  return p;
}

/// Draws `shots` computational-basis outcomes and applies readout flips.
/// Deterministic for a given seed.
inline Counts sample(const QuantumState &state, std::uint64_t shots,
                     const std::optional<NoiseModel> &noise,
                     std::uint64_t seed) {
  if (shots == 0)
    throw std::invalid_argument("shots must be positive");
  const auto n = num_qubits(state);
  const auto p = probabilities(state);
  std::vector<double> cumulative(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    cumulative[i] = (acc += p[i]);
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ReadoutError> readout(n);
  bool flips = false;
  if (noise) {
    noise->validate();
    for (std::size_t q = 0; q < n; ++q) {
      readout[q] = noise->readout_for(q);
      flips = flips || !readout[q].none();
    }
  }
  Counts counts(n);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = unif(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::uint64_t outcome = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                 static_cast<std::ptrdiff_t>(p.size()) - 1));
    if (flips) {
      for (std::size_t q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        const double flip =
            (outcome & bit) ? readout[q].p0_given_1 : readout[q].p1_given_0;
        if (flip > 0.0 && unif(rng) < flip)
          outcome ^= bit;
      }
    }
    counts.add(outcome);
  }
  return counts;
}

inline amplitude pauli_expectation(const QuantumState &s,
                                   const PauliString &p) {
  if (p.size() != num_qubits(s))
    throw std::invalid_argument("Pauli string width does not match state");
  if (const auto *sv = std::get_if<StateVector>(&s))
    return kernels::pauli_expectation(sv->amplitudes(), p);
  const auto &rho = std::get<DensityMatrix>(s);
  const kernels::PauliAction act(p);
  amplitude acc{};
  for (std::size_t c = 0; c < rho.dim(); ++c)
    acc += act.coefficient(c) * rho(c, c ^ act.x);
  return acc;
}

/// <A> = sum_i a_i <P_i>, evaluated by applying each Pauli to the state.
inline double expectation_exact(const QuantumState &s, const Observable &obs) {
  if (!obs.empty() && obs.num_qubits() != num_qubits(s))
    throw std::invalid_argument("observable width does not match state");
  double e = 0.0;
  for (const auto &t : obs.terms())
    e += t.coefficient * pauli_expectation(s, t.pauli).real();
  return e;
}

struct Covariance {
  double value = 0.0;
  /// Set when P and Q anticommute; value is then Re<PQ> - <P><Q>, the
  /// symmetrized covariance.
  bool symmetrized = false;
};

/// <PQ> - <P><Q> with PQ formed by Pauli multiplication.
inline Covariance covariance_exact(const QuantumState &s, const PauliString &p,
                                   const PauliString &q) {
  const auto [phase, r] = multiply(p, q);
  const double pq = (phase_factor(phase) * pauli_expectation(s, r)).real();
  const double ep = pauli_expectation(s, p).real();
  const double eq = pauli_expectation(s, q).real();
  return {pq - ep * eq, !commute(p, q)};
}

/// Normalized vector of i.i.d. complex Gaussians: the first column of a
/// Haar-random unitary.
inline StateVector haar_random_state(std::size_t n, std::uint64_t seed) {
  if (n == 0)
    throw std::invalid_argument("need at least one qubit");
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  std::vector<amplitude> amps(std::size_t{1} << n);
  for (auto &a : amps) {
    const double re = normal(rng);
    const double im = normal(rng);
    a = {re, im};
  }
  StateVector psi(n, std::move(amps));
  psi.normalize();
  return psi;
}

/// (|01> - |10>)/sqrt(2) from |00>: the ground state of XX + YY + ZZ.
inline Circuit singlet_circuit() {
  Circuit c(2);
  c.add(Gate::h(0)).add(Gate::x(1)).add(Gate::cnot(0, 1)).add(Gate::z(0));
  return c;
}

} // namespace jmeas
