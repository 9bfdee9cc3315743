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
#include "jmeas/pauli.hpp"
#include "jmeas/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jmeas {

enum class KindId : std::uint8_t {
  TpbX,
  TpbY,
  TpbZ,
  Bell,
  OmegaXX,
  OmegaYY,
  OmegaZZ,
  Chi
};

inline constexpr std::array<KindId, 8> all_kind_ids{
    KindId::TpbX,    KindId::TpbY,    KindId::TpbZ,    KindId::Bell,
    KindId::OmegaXX, KindId::OmegaYY, KindId::OmegaZZ, KindId::Chi};

/// A joint measurement on `arity` qubits: the Pauli tuples it measures and
/// the basis change that maps each of them to a signed Z-string.
struct MeasurementKind {
  KindId id = KindId::TpbZ;
  std::string name;
  std::size_t arity = 1;
  /// Measurable tuples, identity excluded.
  std::vector<PauliString> measurable;
  /// Basis change on `arity` qubits, applied before computational readout.
  Circuit circuit_template;

  /// True iff `tuple` (length = arity) is the identity or measurable.
  bool measures(const PauliString &tuple) const {
    if (tuple.size() != arity)
      return false;
    if (tuple.is_identity())
      return true;
    return std::find(measurable.begin(), measurable.end(), tuple) !=
           measurable.end();
  }

  bool is_tpb() const { return arity == 1; }
};

namespace detail {

inline MeasurementKind make_kind(KindId id, std::string name,
                                 std::vector<std::string_view> words,
                                 std::vector<Gate> gates) {
  MeasurementKind k;
  k.id = id;
  k.name = std::move(name);
  k.arity = words.front().size();
  for (auto w : words)
    k.measurable.push_back(PauliString::from_string(w));
  k.circuit_template = Circuit(k.arity);
  for (const auto &g : gates)
    k.circuit_template.add(g);
  return k;
}

inline std::vector<MeasurementKind> build_catalog() {
  constexpr double half_pi = std::numbers::pi / 2;
  std::vector<MeasurementKind> kinds;
  kinds.push_back(make_kind(KindId::TpbX, "TPB-X", {"X"}, {Gate::h(0)}));
  kinds.push_back(
      make_kind(KindId::TpbY, "TPB-Y", {"Y"}, {Gate::sdg(0), Gate::h(0)}));
  kinds.push_back(make_kind(KindId::TpbZ, "TPB-Z", {"Z"}, {}));
  // Inverse of Bell-state preparation.
  kinds.push_back(make_kind(KindId::Bell, "Bell", {"XX", "YY", "ZZ"},
                            {Gate::cnot(0, 1), Gate::h(0)}));
  // The omega and chi kinds reduce to the Bell circuit after a single-qubit
  // Clifford that permutes Pauli axes: Y<->Z on qubit 1 for omega-XX, X<->Z
  // for omega-YY, X<->Y for omega-ZZ, and the cycle X->Y->Z->X of
  // U2(0, pi/2) on qubit 0 for chi.
  kinds.push_back(make_kind(
      KindId::OmegaXX, "OmegaXX", {"XX", "YZ", "ZY"},
      {Gate::h(1), Gate::sdg(1), Gate::h(1), Gate::cnot(0, 1), Gate::h(0)}));
  kinds.push_back(make_kind(KindId::OmegaYY, "OmegaYY", {"YY", "XZ", "ZX"},
                            {Gate::h(1), Gate::cnot(0, 1), Gate::h(0)}));
  kinds.push_back(make_kind(KindId::OmegaZZ, "OmegaZZ", {"ZZ", "XY", "YX"},
                            {Gate::sdg(1), Gate::cnot(0, 1), Gate::h(0)}));
  kinds.push_back(
      make_kind(KindId::Chi, "Chi", {"XY", "YZ", "ZX"},
                {Gate::u2(0, 0.0, half_pi), Gate::cnot(0, 1), Gate::h(0)}));
  return kinds;
}

} // namespace detail

/// Built-in kinds, indexed by KindId.
inline const std::vector<MeasurementKind> &builtin_kinds() {
  static const std::vector<MeasurementKind> kinds = detail::build_catalog();
  return kinds;
}

inline const MeasurementKind &kind(KindId id) {
  return builtin_kinds()[static_cast<std::size_t>(id)];
}

inline std::optional<KindId> kind_from_name(std::string_view name) {
  std::string key;
  for (char c : name)
    if (c != '-' && c != '_')
      key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto id : all_kind_ids) {
    std::string k;
    for (char c : kind(id).name)
      if (c != '-')
        k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (k == key)
      return id;
  }
  return std::nullopt;
}

/// Ordered measurement set for a selector: `TPB`, `TPB+Bell`, `TPB+2Q`, or a
/// comma-separated list of kind names where `TPB` expands to TPB-X,Y,Z.
/// Order matters to the greedy assignment, so TPB kinds are listed where the
/// selector puts them (last for the named sets).
inline std::vector<KindId> catalog(std::string_view selector) {
  auto lower = [](std::string_view s) {
    std::string out;
    for (char c : s)
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  const std::vector<KindId> tpb{KindId::TpbX, KindId::TpbY, KindId::TpbZ};
  const auto sel = lower(selector);
  if (sel == "tpb")
    return tpb;
  if (sel == "tpb+bell")
    return {KindId::Bell, KindId::TpbX, KindId::TpbY, KindId::TpbZ};
  if (sel == "tpb+2q")
    return {KindId::Bell,    KindId::OmegaXX, KindId::OmegaYY,
            KindId::OmegaZZ, KindId::Chi,     KindId::TpbX,
            KindId::TpbY,    KindId::TpbZ};

  std::vector<KindId> out;
  std::size_t start = 0;
  while (start <= selector.size()) {
    auto end = selector.find(',', start);
    if (end == std::string_view::npos)
      end = selector.size();
    auto item = selector.substr(start, end - start);
    while (!item.empty() && item.front() == ' ')
      item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ')
      item.remove_suffix(1);
    if (lower(item) == "tpb") {
      out.insert(out.end(), tpb.begin(), tpb.end());
    } else if (auto id = kind_from_name(item)) {
      out.push_back(*id);
    } else {
      throw std::invalid_argument("unknown measurement selector '" +
                                  std::string(item) + "'");
    }
    start = end + 1;
  }
  if (out.empty())
    throw std::invalid_argument("empty measurement selector");
  return out;
}

inline PauliString restrict_to(const PauliString &p,
                               std::span<const std::size_t> positions) {
  PauliString r(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] >= p.size())
      throw std::out_of_range("position outside Pauli string");
    r.set(i, p.op(positions[i]));
  }
  return r;
}

/// True iff `p` restricted to `positions` is the identity or measured by `k`.
inline bool compatible_at(const MeasurementKind &k, const PauliString &p,
                          std::span<const std::size_t> positions) {
  if (positions.size() != k.arity)
    throw std::invalid_argument("measurement " + k.name + " has arity " +
                                std::to_string(k.arity) + ", got " +
                                std::to_string(positions.size()) +
                                " positions");
  if (k.arity == 2 && positions[0] == positions[1])
    throw std::invalid_argument("positions must be distinct");
  if (k.arity == 1) {
    const auto op = p.op(positions[0]);
    return op == PauliOp::I || k.measurable.front().op(0) == op;
  }
  return k.measures(restrict_to(p, positions));
}

inline bool compatible_at(KindId id, const PauliString &p,
                          std::span<const std::size_t> positions) {
  return compatible_at(kind(id), p, positions);
}

namespace detail {

using LocalMatrix = Eigen::MatrixXcd;

inline LocalMatrix template_unitary(const Circuit &c) {
  const std::size_t dim = std::size_t{1} << c.width();
  LocalMatrix u(dim, dim);
  std::vector<kernels::amplitude> col(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    std::fill(col.begin(), col.end(), kernels::amplitude{});
    col[b] = 1.0;
    for (const auto &g : c.gates())
      kernels::apply_gate(col, g);
    for (std::size_t r = 0; r < dim; ++r)
      u(r, b) = col[r];
  }
  return u;
}

inline LocalMatrix pauli_matrix(const PauliString &p) {
  const std::size_t dim = std::size_t{1} << p.size();
  const kernels::PauliAction act(p);
  LocalMatrix m = LocalMatrix::Zero(dim, dim);
  for (std::size_t b = 0; b < dim; ++b)
    m(b ^ act.x, b) = act.coefficient(b);
  return m;
}

} // namespace detail

/// Eigenvalue of a measured tuple as a function of outcome bits:
/// sign * (-1)^{parity(bits & mask)}.
struct Readout {
  int sign = 1;
  std::uint64_t mask = 0;

  int eigenvalue(std::uint64_t bits) const {
    return (std::popcount(bits & mask) & 1) ? -sign : sign;
  }
};

/// Conjugates `tuple` by the template unitary and reads off the signed
/// Z-string. Returns nullopt when the result is not diagonal to `tol`.
inline std::optional<Readout> derive_readout(const MeasurementKind &k,
                                             const PauliString &tuple,
                                             double tol = 1e-12) {
  if (tuple.size() != k.arity)
    return std::nullopt;
  const auto u = detail::template_unitary(k.circuit_template);
  const detail::LocalMatrix d = u * detail::pauli_matrix(tuple) * u.adjoint();
  const auto dim = d.rows();
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if (r != c && std::abs(d(r, c)) > tol)
        return std::nullopt;
  Readout out;
  const auto d0 = d(0, 0);
  if (std::abs(std::abs(d0.real()) - 1.0) > tol || std::abs(d0.imag()) > tol)
    return std::nullopt;
  out.sign = d0.real() > 0 ? 1 : -1;
  for (std::size_t i = 0; i < k.arity; ++i)
    if (d(Eigen::Index{1} << i, Eigen::Index{1} << i).real() * out.sign < 0)
      out.mask |= std::uint64_t{1} << i;
  for (Eigen::Index b = 0; b < dim; ++b) {
    const double expect = out.eigenvalue(static_cast<std::uint64_t>(b));
    if (std::abs(d(b, b) - kernels::amplitude(expect, 0.0)) > tol)
      return std::nullopt;
  }
  return out;
}

/// Readout for a tuple the kind measures; throws std::invalid_argument if
/// the tuple is not measurable.
inline Readout readout(const MeasurementKind &k, const PauliString &tuple) {
  if (!k.measures(tuple))
    throw std::invalid_argument(tuple.str() + " is not measurable by " +
                                k.name);
  if (tuple.is_identity())
    return {};
  auto r = derive_readout(k, tuple);
  if (!r)
    throw std::logic_error("template of " + k.name + " does not diagonalize " +
                           tuple.str());
  return *r;
}

/// Eigenvalue (+1/-1) of `tuple` given outcome bits; bit i of `bits`
/// belongs to the kind's i-th position.
inline int eigenvalue_sign(const MeasurementKind &k, const PauliString &tuple,
                           std::uint64_t bits) {
  return readout(k, tuple).eigenvalue(bits);
}

inline int eigenvalue_sign(KindId id, std::string_view tuple,
                           std::uint64_t bits) {
  return eigenvalue_sign(kind(id), PauliString::from_string(tuple), bits);
}

/// Checks that every measurable tuple is mapped to a signed Z-string and
/// that the readout reproduces <psi|P|psi> on `num_states` random states.
inline bool verify_diagonalization(const MeasurementKind &k,
                                   std::size_t num_states = 100,
                                   std::uint64_t seed = 2019) {
  if (k.circuit_template.width() != k.arity)
    return false;
  const auto u = detail::template_unitary(k.circuit_template);
  const std::size_t dim = std::size_t{1} << k.arity;
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::vector<kernels::amplitude>> states;
  for (std::size_t s = 0; s < num_states; ++s) {
    std::vector<kernels::amplitude> psi(dim);
    double norm = 0.0;
    for (auto &a : psi) {
      a = {normal(rng), normal(rng)};
      norm += std::norm(a);
    }
    for (auto &a : psi)
      a /= std::sqrt(norm);
    states.push_back(std::move(psi));
  }
  for (const auto &tuple : k.measurable) {
    const auto r = derive_readout(k, tuple);
    if (!r)
      return false;
    for (const auto &psi : states) {
      const Eigen::Map<const Eigen::VectorXcd> v(psi.data(),
                                                 static_cast<Eigen::Index>(dim));
      const Eigen::VectorXcd rotated = u * v;
      double sampled = 0.0;
      for (std::size_t b = 0; b < dim; ++b)
        sampled += std::norm(rotated(static_cast<Eigen::Index>(b))) *
                   r->eigenvalue(b);
      const double exact = kernels::pauli_expectation(psi, tuple).real();
      if (std::abs(sampled - exact) > 1e-10)
        return false;
    }
  }
  return true;
}

/// One kind placed on specific qubits; positions[i] carries outcome bit i.
struct Placement {
  KindId kind = KindId::TpbZ;
  std::vector<std::size_t> positions;

  friend bool operator==(const Placement &, const Placement &) = default;
};

/// Disjoint placements of measurement kinds over the qubits of a circuit.
class MeasurementAssignment {
public:
  const std::vector<Placement> &placements() const { return placements_; }
  bool empty() const { return placements_.empty(); }

  bool covers(std::size_t q) const { return find(q) != nullptr; }

  const Placement *find(std::size_t q) const {
    for (const auto &p : placements_)
      if (std::find(p.positions.begin(), p.positions.end(), q) !=
          p.positions.end())
        return &p;
    return nullptr;
  }

  void add(Placement p) {
    const auto &k = kind(p.kind);
    if (p.positions.size() != k.arity)
      throw std::invalid_argument("placement of " + k.name + " needs " +
                                  std::to_string(k.arity) + " positions");
    for (std::size_t i = 0; i < p.positions.size(); ++i) {
      if (covers(p.positions[i]))
        throw std::invalid_argument("placements overlap at qubit " +
                                    std::to_string(p.positions[i]));
      for (std::size_t j = 0; j < i; ++j)
        if (p.positions[i] == p.positions[j])
          throw std::invalid_argument("placement positions must be distinct");
    }
    placements_.push_back(std::move(p));
  }

  /// True iff every placement measures the restriction of `p`, and every
  /// non-identity position of `p` is covered.
  bool measures(const PauliString &p) const {
    for (const auto &pl : placements_)
      if (!compatible_at(pl.kind, p, pl.positions))
        return false;
    for (std::size_t q = 0; q < p.size(); ++q)
      if (p.op(q) != PauliOp::I && !covers(q))
        return false;
    return true;
  }

  friend bool operator==(const MeasurementAssignment &,
                         const MeasurementAssignment &) = default;

private:
  std::vector<Placement> placements_;
};

/// Basis-change circuit for an assignment followed by MEASURE_ALL. Qubits not
/// covered by any placement are read in the Z basis.
inline Circuit circuit_for(const std::vector<Placement> &placements,
                           std::size_t width) {
  std::vector<bool> used(width, false);
  Circuit c(width);
  for (const auto &pl : placements) {
    const auto &k = kind(pl.kind);
    if (pl.positions.size() != k.arity)
      throw std::invalid_argument("placement arity mismatch for " + k.name);
    for (auto q : pl.positions) {
      if (q >= width)
        throw std::out_of_range("placement qubit " + std::to_string(q) +
                                " outside width " + std::to_string(width));
      if (used[q])
        throw std::invalid_argument("placements overlap at qubit " +
                                    std::to_string(q));
      used[q] = true;
    }
    for (auto g : k.circuit_template.gates()) {
      for (std::size_t i = 0; i < g.arity(); ++i)
        g.qubits[i] = pl.positions[g.qubits[i]];
      c.add(g);
    }
  }
  c.add(Gate::measure_all());
  return c;
}

inline Circuit circuit_for(const MeasurementAssignment &a, std::size_t width) {
  return circuit_for(a.placements(), width);
}

/// Readout of a full Pauli string under an assignment, expressed over the
/// global outcome bits (bit q = qubit q). Requires a.measures(p).
inline Readout global_readout(const MeasurementAssignment &a,
                              const PauliString &p) {
  if (p.size() > 64)
    throw std::invalid_argument("global readout limited to 64 qubits");
  if (!a.measures(p))
    throw std::invalid_argument(p.str() +
                                " is not measured by the assignment");
  Readout out;
  for (const auto &pl : a.placements()) {
    const auto local = restrict_to(p, pl.positions);
    if (local.is_identity())
      continue;
    const auto r = readout(kind(pl.kind), local);
    out.sign *= r.sign;
    for (std::size_t i = 0; i < pl.positions.size(); ++i)
      if ((r.mask >> i) & 1u)
        out.mask |= std::uint64_t{1} << pl.positions[i];
  }
  return out;
}

} // namespace jmeas
