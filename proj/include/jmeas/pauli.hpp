/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jmeas {

/// Single-qubit Pauli operator. The underlying value is the (x, z) symplectic
/// pair packed as `x | z << 1`, so I=0, X=1, Z=2, Y=3.
enum class PauliOp : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline char to_char(PauliOp op) {
  switch (op) {
  case PauliOp::I:
    return 'I';
  case PauliOp::X:
    return 'X';
  case PauliOp::Y:
    return 'Y';
  case PauliOp::Z:
    return 'Z';
  }
  return '?';
}

inline bool pauli_from_char(char c, PauliOp &out) {
  switch (c) {
  case 'I':
    out = PauliOp::I;
    return true;
  case 'X':
    out = PauliOp::X;
    return true;
  case 'Y':
    out = PauliOp::Y;
    return true;
  case 'Z':
    out = PauliOp::Z;
    return true;
  default:
    return false;
  }
}

/// Tensor product of single-qubit Paulis on N qubits, stored as two packed
/// bit-vectors. Position 0 is the leftmost character of the text form.
class PauliString {
public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  PauliString() = default;
  explicit PauliString(std::size_t num_qubits)
      : n_(num_qubits), x_(word_count(num_qubits), 0),
        z_(word_count(num_qubits), 0) {}

  /// Parses a word over {I,X,Y,Z}; throws std::invalid_argument otherwise.
  static PauliString from_string(std::string_view word) {
    PauliString p(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) {
      PauliOp op;
      if (!pauli_from_char(word[i], op))
        throw std::invalid_argument("invalid Pauli character '" +
                                    std::string(1, word[i]) + "'");
      p.set(i, op);
    }
    return p;
  }

  /// Builds a string directly from packed words; bits past `num_qubits` must
  /// be zero.
  static PauliString from_words(std::size_t num_qubits,
                                std::vector<word_type> x,
                                std::vector<word_type> z) {
    PauliString p;
    p.n_ = num_qubits;
    p.x_ = std::move(x);
    p.z_ = std::move(z);
    if (p.x_.size() != word_count(num_qubits) || p.z_.size() != p.x_.size())
      throw std::invalid_argument("word count does not match qubit count");
    return p;
  }

  std::size_t size() const { return n_; }
  std::size_t num_words() const { return x_.size(); }

  PauliOp op(std::size_t q) const {
    const auto w = q / word_bits;
    const auto b = q % word_bits;
    const unsigned xb = (x_[w] >> b) & 1u;
    const unsigned zb = (z_[w] >> b) & 1u;
    return static_cast<PauliOp>(xb | (zb << 1));
  }
  PauliOp operator[](std::size_t q) const { return op(q); }

  void set(std::size_t q, PauliOp op) {
    const auto w = q / word_bits;
    const word_type mask = word_type{1} << (q % word_bits);
    const auto v = static_cast<unsigned>(op);
    x_[w] = (v & 1u) ? (x_[w] | mask) : (x_[w] & ~mask);
    z_[w] = (v & 2u) ? (z_[w] | mask) : (z_[w] & ~mask);
  }

  const std::vector<word_type> &x_words() const { return x_; }
  const std::vector<word_type> &z_words() const { return z_; }

  /// Number of non-identity positions.
  std::size_t weight() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < x_.size(); ++i)
      w += std::popcount(x_[i] | z_[i]);
    return w;
  }

  bool is_identity() const { return weight() == 0; }

  /// x / z masks as a single integer; only valid for size() <= 64.
  std::uint64_t x_mask() const { return x_.empty() ? 0 : x_[0]; }
  std::uint64_t z_mask() const { return z_.empty() ? 0 : z_[0]; }

  std::string str() const {
    std::string s(n_, 'I');
    for (std::size_t q = 0; q < n_; ++q)
      s[q] = to_char(op(q));
    return s;
  }

  friend bool operator==(const PauliString &, const PauliString &) = default;

private:
  static std::size_t word_count(std::size_t n) {
    return (n + word_bits - 1) / word_bits;
  }

  std::size_t n_ = 0;
  std::vector<word_type> x_;
  std::vector<word_type> z_;
};

namespace detail {
inline void require_same_length(const PauliString &p, const PauliString &q) {
  if (p.size() != q.size())
    throw std::invalid_argument("Pauli strings differ in length: " +
                                std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()));
}
} // namespace detail

/// True iff at every position the two strings agree or one is the identity,
/// i.e. a single tensor-product basis measures both.
inline bool qubitwise_compatible(const PauliString &p, const PauliString &q) {
  detail::require_same_length(p, q);
  const auto &px = p.x_words(), &pz = p.z_words();
  const auto &qx = q.x_words(), &qz = q.z_words();
  for (std::size_t w = 0; w < px.size(); ++w) {
    const auto differ = (px[w] ^ qx[w]) | (pz[w] ^ qz[w]);
    const auto both = (px[w] | pz[w]) & (qx[w] | qz[w]);
    if (differ & both)
      return false;
  }
  return true;
}

/// True iff the two strings commute: the number of positions where both are
/// non-identity and differ is even.
inline bool commute(const PauliString &p, const PauliString &q) {
  detail::require_same_length(p, q);
  const auto &px = p.x_words(), &pz = p.z_words();
  const auto &qx = q.x_words(), &qz = q.z_words();
  unsigned parity = 0;
  for (std::size_t w = 0; w < px.size(); ++w)
    parity ^= std::popcount((px[w] & qz[w]) ^ (pz[w] & qx[w])) & 1u;
  return parity == 0;
}

/// Product p*q = i^phase * r. Returns (phase mod 4, r).
inline std::pair<int, PauliString> multiply(const PauliString &p,
                                            const PauliString &q) {
  detail::require_same_length(p, q);
  // With P = i^{x.z} X^x Z^z per qubit:
  // (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{z1.x2} X^{x1^x2} Z^{z1^z2}.
  std::vector<PauliString::word_type> rxs(p.num_words()), rzs(p.num_words());
  long exponent = 0;
  const auto &px = p.x_words(), &pz = p.z_words();
  const auto &qx = q.x_words(), &qz = q.z_words();
  for (std::size_t w = 0; w < px.size(); ++w) {
    const auto rx = px[w] ^ qx[w];
    const auto rz = pz[w] ^ qz[w];
    exponent += std::popcount(px[w] & pz[w]);
    exponent += std::popcount(qx[w] & qz[w]);
    exponent += 2 * std::popcount(pz[w] & qx[w]);
    exponent -= std::popcount(rx & rz);
    rxs[w] = rx;
    rzs[w] = rz;
  }
  const int phase = static_cast<int>(((exponent % 4) + 4) % 4);
  return {phase, PauliString::from_words(p.size(), std::move(rxs),
                                         std::move(rzs))};
}

inline std::complex<double> phase_factor(int phase) {
  switch (((phase % 4) + 4) % 4) {
  case 0:
    return {1.0, 0.0};
  case 1:
    return {0.0, 1.0};
  case 2:
    return {-1.0, 0.0};
  default:
    return {0.0, -1.0};
  }
}

struct PauliStringHash {
  std::size_t operator()(const PauliString &p) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(p.size());
    auto mix = [&h](std::uint64_t v) {
      h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    };
    for (auto w : p.x_words())
      mix(w);
    for (auto w : p.z_words())
      mix(w);
    return h;
  }
};

} // namespace jmeas
