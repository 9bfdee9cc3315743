/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "jmeas/observable.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>

using namespace jmeas;

TEST(Observable, ParsesHeisenberg) {
  const auto obs = parse_observable("1.0 XX\n1.0 YY\n1.0 ZZ");
  ASSERT_EQ(obs.size(), 3u);
  EXPECT_EQ(obs.num_qubits(), 2u);
  EXPECT_EQ(obs[0].pauli.str(), "XX");
  EXPECT_EQ(obs[1].pauli.str(), "YY");
  EXPECT_EQ(obs[2].pauli.str(), "ZZ");
  for (const auto &t : obs.terms())
    EXPECT_EQ(t.coefficient, 1.0);
}

TEST(Observable, MergesDuplicates) {
  const auto obs = parse_observable("2.0 XI\n-1.0 XI");
  ASSERT_EQ(obs.size(), 1u);
  EXPECT_EQ(obs[0].coefficient, 1.0);
  EXPECT_EQ(obs[0].pauli.str(), "XI");
}

TEST(Observable, ThreeQubitParseKeepsOrder) {
  const auto obs = parse_observable("0.5 XYZ\n0.5 IIZ");
  ASSERT_EQ(obs.size(), 2u);
  EXPECT_EQ(obs.num_qubits(), 3u);
  EXPECT_EQ(obs[0].pauli.str(), "XYZ");
  EXPECT_EQ(obs[1].pauli.str(), "IIZ");
}

TEST(Observable, CommentsAndBlankLines) {
  const auto obs = parse_observable("# header\n\n  -0.25   ZI  # trailing\n+3e-1 IZ\n");
  ASSERT_EQ(obs.size(), 2u);
  EXPECT_EQ(obs[0].coefficient, -0.25);
  EXPECT_EQ(obs[1].coefficient, 0.3);
}

TEST(Observable, ParseErrors) {
  EXPECT_THROW(parse_observable(""), ParseError);
  EXPECT_THROW(parse_observable("# only a comment\n"), ParseError);
  EXPECT_THROW(parse_observable("1.0x XX"), ParseError);
  EXPECT_THROW(parse_observable("abc XX"), ParseError);
  EXPECT_THROW(parse_observable("1.0 XA"), ParseError);
  EXPECT_THROW(parse_observable("1.0 XX\n1.0 XXX"), ParseError);
  EXPECT_THROW(parse_observable("1.0"), ParseError);
  EXPECT_THROW(parse_observable("1.0 XX YY"), ParseError);
  EXPECT_THROW(parse_observable("nan XX"), ParseError);
  try {
    parse_observable("1.0 XX\n\n1.0 XQ");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Observable, AddTermValidates) {
  Observable obs;
  obs.add_term(1.0, "XY");
  EXPECT_THROW(obs.add_term(1.0, "XYZ"), std::invalid_argument);
  EXPECT_THROW(obs.add_term(std::numeric_limits<double>::infinity(), "XX"),
               std::invalid_argument);
}

// parse(serialize(obs)) == obs on random canonical observables.
TEST(Observable, SerializeRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  const std::string ops = "IXYZ";
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 6;
    Observable obs;
    const std::size_t terms = 1 + rng() % 12;
    for (std::size_t k = 0; k < terms; ++k) {
      std::string w;
      for (std::size_t q = 0; q < n; ++q)
        w += ops[rng() % 4];
      obs.add_term(coef(rng), w);
    }
    ASSERT_EQ(parse_observable(serialize(obs)), obs) << serialize(obs);
  }
}

TEST(Observable, ShortestRoundTripFormatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.0), "-2");
  const double v = 0.1 + 0.2;
  double back = 0;
  const auto s = format_double(v);
  back = std::stod(s);
  EXPECT_EQ(back, v);
}

TEST(Observable, LegacyFormat) {
  const auto obs = parse_observable_legacy("IIZZ\n(-0.81+0j)\nXXII\n0.5\n"
                                           "IIZZ\n(0.01-0j)\n");
  ASSERT_EQ(obs.size(), 2u);
  EXPECT_EQ(obs[0].pauli.str(), "IIZZ");
  EXPECT_NEAR(obs[0].coefficient, -0.80, 1e-15);
  EXPECT_EQ(obs[1].coefficient, 0.5);
  EXPECT_THROW(parse_observable_legacy("XX\n(1+0.5j)\n"), ParseError);
  EXPECT_THROW(parse_observable_legacy("XX\n"), ParseError);
  EXPECT_THROW(parse_observable_legacy(""), ParseError);
  EXPECT_THROW(parse_observable_legacy("XX\n(1+0j\n"), ParseError);
}
