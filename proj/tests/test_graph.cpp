/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "jmeas/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <random>
#include <string>

using namespace jmeas;

namespace {

Observable random_observable(std::mt19937_64 &rng, std::size_t n_qubits,
                             std::size_t n_terms) {
  const std::string ops = "IXYZ";
  Observable obs;
  // Only 4^N distinct words exist.
  if (n_qubits < 32)
    n_terms = std::min(n_terms, std::size_t{1} << (2 * n_qubits));
  while (obs.size() < n_terms) {
    std::string w;
    for (std::size_t q = 0; q < n_qubits; ++q)
      w += ops[rng() % 4];
    obs.add_term(1.0, w);
  }
  return obs;
}

PauliGraph random_graph(std::mt19937_64 &rng, std::size_t n, double density) {
  PauliGraph g(n, GraphMode::TPB);
  std::bernoulli_distribution edge(density);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (edge(rng))
        g.add_edge(u, v);
  return g;
}

// Exhaustive subset enumeration.
std::size_t clique_oracle(const PauliGraph &g) {
  const auto n = g.size();
  std::size_t best = 0;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    const auto size = static_cast<std::size_t>(std::popcount(s));
    if (size <= best)
      continue;
    bool ok = true;
    for (std::size_t u = 0; u < n && ok; ++u)
      for (std::size_t v = u + 1; v < n && ok; ++v)
        if (((s >> u) & 1) && ((s >> v) & 1) && !g.adjacent(u, v))
          ok = false;
    if (ok)
      best = size;
  }
  return best;
}

} // namespace

TEST(Graph, HeisenbergGraphs) {
  const auto obs = parse_observable("1 XX\n1 YY\n1 ZZ");
  const auto tpb = build_pauli_graph(obs, GraphMode::TPB);
  EXPECT_EQ(tpb.edge_count(), 3u);
  const auto all = build_pauli_graph(obs, GraphMode::ALL);
  EXPECT_EQ(all.edge_count(), 0u);
  const auto disjoint = build_pauli_graph(parse_observable("1 XI\n1 IZ"),
                                          GraphMode::TPB);
  EXPECT_EQ(disjoint.edge_count(), 0u);
}

TEST(Graph, EdgesFollowPredicates) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto obs = random_observable(rng, 1 + rng() % 5, 1 + rng() % 30);
    for (auto mode : {GraphMode::TPB, GraphMode::ALL}) {
      const auto g = build_pauli_graph(obs, mode, 1 + t % 3);
      for (std::size_t u = 0; u < obs.size(); ++u) {
        EXPECT_FALSE(g.adjacent(u, u));
        for (std::size_t v = 0; v < obs.size(); ++v) {
          if (u == v)
            continue;
          const bool joint =
              mode == GraphMode::TPB
                  ? qubitwise_compatible(obs[u].pauli, obs[v].pauli)
                  : commute(obs[u].pauli, obs[v].pauli);
          ASSERT_EQ(g.adjacent(u, v), !joint);
          ASSERT_EQ(g.adjacent(u, v), g.adjacent(v, u));
        }
      }
    }
  }
}

TEST(Graph, DegreeOrderBreaksTiesByIndex) {
  PauliGraph g(5, GraphMode::TPB);
  g.add_edge(3, 4);
  g.add_edge(1, 4);
  // degrees: 0:0 1:1 2:0 3:1 4:2
  EXPECT_EQ(degree_order(g), (std::vector<std::size_t>{4, 1, 3, 0, 2}));
}

TEST(Graph, LdfcIsProperColoring) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto g = random_graph(rng, 1 + rng() % 40, 0.1 + 0.8 * (t % 5) / 5.0);
    const auto color = ldfc_colors(g);
    for (std::size_t u = 0; u < g.size(); ++u)
      for (std::size_t v = 0; v < g.size(); ++v)
        if (g.adjacent(u, v))
          ASSERT_NE(color[u], color[v]);
  }
}

TEST(Graph, LdfcSmallCases) {
  PauliGraph k3(3, GraphMode::TPB);
  k3.add_edge(0, 1);
  k3.add_edge(1, 2);
  k3.add_edge(0, 2);
  const auto c = ldfc_colors(k3);
  EXPECT_EQ(*std::max_element(c.begin(), c.end()), 2u);
  const auto e = ldfc_colors(PauliGraph(3, GraphMode::TPB));
  EXPECT_EQ(e, (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Graph, MaxCliqueSmallCases) {
  PauliGraph k3(3, GraphMode::TPB);
  k3.add_edge(0, 1);
  k3.add_edge(1, 2);
  k3.add_edge(0, 2);
  const auto r = max_clique(k3);
  EXPECT_EQ(r.size, 3u);
  EXPECT_TRUE(r.exact);
  const auto e = max_clique(PauliGraph(3, GraphMode::TPB));
  EXPECT_EQ(e.size, 1u);
  EXPECT_TRUE(e.exact);
  EXPECT_EQ(max_clique(PauliGraph(0, GraphMode::TPB)).size, 0u);
}

TEST(Graph, MaxCliqueMatchesExhaustiveOracle) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 60; ++t) {
    const auto g = random_graph(rng, 1 + rng() % 16, 0.2 + 0.7 * (t % 4) / 4.0);
    const auto r = max_clique(g);
    ASSERT_TRUE(r.exact);
    ASSERT_EQ(r.size, clique_oracle(g));
    ASSERT_EQ(r.members.size(), r.size);
    for (auto u : r.members)
      for (auto v : r.members)
        if (u != v)
          ASSERT_TRUE(g.adjacent(u, v));
  }
}

TEST(Graph, CliqueNeverExceedsColoring) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_graph(rng, 10 + rng() % 60, 0.5);
    const auto color = ldfc_colors(g);
    const auto k = *std::max_element(color.begin(), color.end()) + 1;
    EXPECT_LE(max_clique(g).size, k);
  }
}

TEST(Graph, CliqueTimeLimitReportsInexact) {
  std::mt19937_64 rng(17);
  const auto g = random_graph(rng, 400, 0.9);
  const auto r = max_clique(g, std::chrono::milliseconds(1));
  EXPECT_FALSE(r.exact);
  EXPECT_GE(r.size, 1u);
  for (auto u : r.members)
    for (auto v : r.members)
      if (u != v)
        ASSERT_TRUE(g.adjacent(u, v));
}
