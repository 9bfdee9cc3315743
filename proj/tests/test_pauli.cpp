/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "jmeas/pauli.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <complex>
#include <random>
#include <string>
#include <vector>

using namespace jmeas;

namespace {

using CMat = Eigen::MatrixXcd;

CMat single(char c) {
  const std::complex<double> i(0, 1);
  CMat m(2, 2);
  switch (c) {
  case 'X':
    m << 0, 1, 1, 0;
    break;
  case 'Y':
    m << 0, -i, i, 0;
    break;
  case 'Z':
    m << 1, 0, 0, -1;
    break;
  default:
    m << 1, 0, 0, 1;
  }
  return m;
}

// Dense matrix with character k acting on bit k of the basis index.
CMat dense(const std::string &w) {
  CMat out = CMat::Identity(1, 1);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const CMat s = single(w[k]);
    CMat next(out.rows() * 2, out.cols() * 2);
    // kron(s, out): qubit k becomes the most significant so far.
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) =
            s(a, b) * out;
    out = next;
  }
  return out;
}

std::vector<std::string> all_words(std::size_t n) {
  std::vector<std::string> out{""};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> next;
    for (const auto &w : out)
      for (char c : std::string("IXYZ"))
        next.push_back(w + c);
    out = next;
  }
  return out;
}

bool qwc_oracle(const std::string &a, const std::string &b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != 'I' && b[k] != 'I' && a[k] != b[k])
      return false;
  return true;
}

} // namespace

TEST(Pauli, ParseAndPrintRoundTrip) {
  for (const auto &w : all_words(3))
    EXPECT_EQ(PauliString::from_string(w).str(), w);
  const auto p = PauliString::from_string("XIYZ");
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.op(0), PauliOp::X);
  EXPECT_EQ(p.op(1), PauliOp::I);
  EXPECT_EQ(p.op(2), PauliOp::Y);
  EXPECT_EQ(p.op(3), PauliOp::Z);
  EXPECT_EQ(p.weight(), 3u);
}

TEST(Pauli, RejectsBadCharacters) {
  EXPECT_THROW(PauliString::from_string("XQ"), std::invalid_argument);
  EXPECT_THROW(PauliString::from_string("xz"), std::invalid_argument);
}

TEST(Pauli, LongStringsSpanWords) {
  std::string w(130, 'I');
  w[0] = 'X';
  w[64] = 'Y';
  w[129] = 'Z';
  const auto p = PauliString::from_string(w);
  EXPECT_EQ(p.num_words(), 3u);
  EXPECT_EQ(p.str(), w);
  EXPECT_EQ(p.weight(), 3u);
  std::string v(130, 'I');
  v[64] = 'X';
  EXPECT_FALSE(commute(p, PauliString::from_string(v)));
  EXPECT_FALSE(qubitwise_compatible(p, PauliString::from_string(v)));
}

TEST(Pauli, KnownCommutationExamples) {
  auto P = [](const char *s) { return PauliString::from_string(s); };
  EXPECT_TRUE(commute(P("XX"), P("YY")));
  EXPECT_TRUE(commute(P("XX"), P("ZZ")));
  EXPECT_FALSE(commute(P("XI"), P("ZI")));
  EXPECT_FALSE(qubitwise_compatible(P("XX"), P("YY")));
  EXPECT_TRUE(qubitwise_compatible(P("XI"), P("XZ")));
  EXPECT_TRUE(qubitwise_compatible(P("IIII"), P("XYZX")));
}

TEST(Pauli, LengthMismatchThrows) {
  const auto a = PauliString::from_string("XX");
  const auto b = PauliString::from_string("XXX");
  EXPECT_THROW(commute(a, b), std::invalid_argument);
  EXPECT_THROW(qubitwise_compatible(a, b), std::invalid_argument);
  EXPECT_THROW(multiply(a, b), std::invalid_argument);
}

// Exhaustive over N <= 3 against the per-position definition.
TEST(Pauli, QubitwiseCompatibleExhaustive) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto words = all_words(n);
    for (const auto &a : words)
      for (const auto &b : words)
        ASSERT_EQ(qubitwise_compatible(PauliString::from_string(a),
                                       PauliString::from_string(b)),
                  qwc_oracle(a, b))
            << a << " " << b;
  }
}

// Commutation against dense matrices: [P, Q] == 0.
TEST(Pauli, CommuteMatchesMatrixCommutator) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto words = all_words(n);
    std::vector<CMat> mats;
    for (const auto &w : words)
      mats.push_back(dense(w));
    for (std::size_t i = 0; i < words.size(); ++i)
      for (std::size_t j = 0; j < words.size(); ++j) {
        const bool oracle =
            (mats[i] * mats[j] - mats[j] * mats[i]).norm() < 1e-12;
        ASSERT_EQ(commute(PauliString::from_string(words[i]),
                          PauliString::from_string(words[j])),
                  oracle)
            << words[i] << " " << words[j];
      }
  }
}

TEST(Pauli, CommuteMatchesMatrixCommutatorRandomN4) {
  std::mt19937_64 rng(7);
  const std::string ops = "IXYZ";
  for (int t = 0; t < 300; ++t) {
    std::string a, b;
    for (int k = 0; k < 4; ++k) {
      a += ops[rng() % 4];
      b += ops[rng() % 4];
    }
    const CMat pa = dense(a), pb = dense(b);
    const bool oracle = (pa * pb - pb * pa).norm() < 1e-12;
    ASSERT_EQ(commute(PauliString::from_string(a), PauliString::from_string(b)),
              oracle)
        << a << " " << b;
  }
}

// Property: qubit-wise compatibility implies commutation.
TEST(Pauli, QwcImpliesCommute) {
  const auto words = all_words(3);
  for (const auto &a : words)
    for (const auto &b : words) {
      const auto pa = PauliString::from_string(a);
      const auto pb = PauliString::from_string(b);
      if (qubitwise_compatible(pa, pb))
        ASSERT_TRUE(commute(pa, pb)) << a << " " << b;
    }
}

TEST(Pauli, MultiplyMatchesMatrixProduct) {
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto words = all_words(n);
    for (const auto &a : words)
      for (const auto &b : words) {
        const auto [phase, r] =
            multiply(PauliString::from_string(a), PauliString::from_string(b));
        const CMat expect = dense(a) * dense(b);
        const CMat got = phase_factor(phase) * dense(r.str());
        ASSERT_LT((expect - got).norm(), 1e-12) << a << " * " << b;
      }
  }
}

TEST(Pauli, MultiplyExamples) {
  auto [ph, r] =
      multiply(PauliString::from_string("X"), PauliString::from_string("Y"));
  EXPECT_EQ(r.str(), "Z");
  EXPECT_EQ(ph, 1); // XY = iZ
  auto [ph2, r2] =
      multiply(PauliString::from_string("XX"), PauliString::from_string("YY"));
  EXPECT_EQ(r2.str(), "ZZ");
  EXPECT_EQ(ph2, 2); // XX YY = -ZZ
}

TEST(Pauli, HashAndEquality) {
  PauliStringHash h;
  const auto a = PauliString::from_string("XYZ");
  const auto b = PauliString::from_string("XYZ");
  EXPECT_EQ(a, b);
  EXPECT_EQ(h(a), h(b));
  EXPECT_NE(a, PauliString::from_string("XYI"));
}
