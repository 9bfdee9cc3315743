/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "jmeas/grouping.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>

using namespace jmeas;

namespace {

const Observable &heisenberg() {
  static const auto obs = parse_observable("1 XX\n1 YY\n1 ZZ");
  return obs;
}

Observable random_observable(std::mt19937_64 &rng, std::size_t n_qubits,
                             std::size_t n_terms) {
  const std::string ops = "IXYZ";
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Observable obs;
  // Only 4^N distinct words exist.
  if (n_qubits < 32)
    n_terms = std::min(n_terms, std::size_t{1} << (2 * n_qubits));
  while (obs.size() < n_terms) {
    std::string w;
    for (std::size_t q = 0; q < n_qubits; ++q)
      w += ops[rng() % 4];
    obs.add_term(coef(rng), w);
  }
  return obs;
}

} // namespace

TEST(Grouping, HeisenbergCounts) {
  EXPECT_EQ(group_observable(heisenberg(), Method::NoGrouping).size(), 3u);
  EXPECT_EQ(group_observable(heisenberg(), Method::TPB).size(), 3u);
  EXPECT_EQ(group_observable(heisenberg(), Method::TPBBell).size(), 1u);
  EXPECT_EQ(group_observable(heisenberg(), Method::TPB2Q).size(), 1u);
  EXPECT_EQ(group_observable(heisenberg(), Method::ALL).size(), 1u);
}

TEST(Grouping, HeisenbergBellGroup) {
  const auto r = group_observable(heisenberg(), Method::TPBBell);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.groups[0].members, (std::vector<std::size_t>{0, 1, 2}));
  ASSERT_TRUE(r.groups[0].assignment);
  ASSERT_EQ(r.groups[0].assignment->placements().size(), 1u);
  EXPECT_EQ(r.groups[0].assignment->placements()[0],
            (Placement{KindId::Bell, {0, 1}}));
  EXPECT_EQ(validate(heisenberg(), r), "");
}

TEST(Grouping, GreedyWithTpbOnlyOnHeisenberg) {
  EXPECT_EQ(greedy_group(heisenberg(), catalog("TPB")).size(), 3u);
}

TEST(Grouping, GreedySplitsWhenBellCannotMeasure) {
  const auto obs = parse_observable("1 XX\n1 YY\n1 ZX");
  const auto r = greedy_group(obs, catalog("TPB+Bell"));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r.groups[0].members, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.groups[1].members, (std::vector<std::size_t>{2}));
  EXPECT_EQ(validate(obs, r), "");
}

TEST(Grouping, AssignMeasurementsExamples) {
  auto P = [](const char *s) { return PauliString::from_string(s); };
  const auto bell = assign_measurements(P("XX"), P("YY"), catalog("TPB+Bell"), {});
  ASSERT_TRUE(bell);
  ASSERT_EQ(bell->placements().size(), 1u);
  EXPECT_EQ(bell->placements()[0], (Placement{KindId::Bell, {0, 1}}));

  auto tpb = assign_measurements(P("XI"), P("XZ"), catalog("TPB"), {});
  ASSERT_TRUE(tpb);
  complete_with_tpb(*tpb, P("XI"));
  EXPECT_EQ(tpb->find(0)->kind, KindId::TpbX);
  EXPECT_EQ(tpb->find(1)->kind, KindId::TpbZ);

  EXPECT_FALSE(assign_measurements(P("XX"), P("ZX"), catalog("TPB+Bell"), {}));
}

TEST(Grouping, AssignMeasurementsRespectsExistingPlacements) {
  auto P = [](const char *s) { return PauliString::from_string(s); };
  MeasurementAssignment mi;
  mi.add({KindId::Bell, {0, 1}});
  EXPECT_FALSE(assign_measurements(P("XXI"), P("XZI"), catalog("TPB+Bell"), mi));
  const auto ok = assign_measurements(P("XXI"), P("ZZY"), catalog("TPB+Bell"), mi);
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->find(2)->kind, KindId::TpbY);
}

TEST(Grouping, OrderedTuplesMatter) {
  // XZ and ZX both sit in OmegaYY; ZY needs OmegaXX, YZ and ZY both OmegaXX.
  auto P = [](const char *s) { return PauliString::from_string(s); };
  const auto r = assign_measurements(P("XZ"), P("ZX"), catalog("TPB+2Q"), {});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->placements()[0], (Placement{KindId::OmegaYY, {0, 1}}));
  // Chi measures XY and YZ at (0,1); ZX too.
  const auto c = assign_measurements(P("XY"), P("ZX"), catalog("TPB+2Q"), {});
  ASSERT_TRUE(c);
  EXPECT_EQ(c->placements()[0], (Placement{KindId::Chi, {0, 1}}));
  // YX and XZ: chi at (1,0) reads XY and ZX.
  const auto rev = assign_measurements(P("YX"), P("XZ"), catalog("Chi"), {});
  ASSERT_TRUE(rev);
  EXPECT_EQ(rev->placements()[0], (Placement{KindId::Chi, {1, 0}}));
}

TEST(Grouping, NoGroupingIsSingletons) {
  std::mt19937_64 rng(1);
  const auto obs = random_observable(rng, 4, 20);
  const auto r = no_grouping(obs);
  ASSERT_EQ(r.size(), obs.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    EXPECT_EQ(r.groups[i].members, (std::vector<std::size_t>{i}));
  EXPECT_EQ(validate(obs, r), "");
}

// Every method yields a valid partition with fully covered members.
TEST(Grouping, AllMethodsValidOnRandomObservables) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 80; ++t) {
    const auto obs = random_observable(rng, 1 + rng() % 6, 1 + rng() % 40);
    for (auto m : all_methods) {
      const auto r = group_observable(obs, m);
      ASSERT_EQ(validate(obs, r), "") << to_string(m) << "\n" << serialize(obs);
      ASSERT_EQ(r.method, m);
      if (m != Method::ALL)
        for (const auto &g : r.groups)
          ASSERT_TRUE(g.assignment);
    }
  }
}

TEST(Grouping, LdfcGroupsHaveNoInternalEdges) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 30; ++t) {
    const auto obs = random_observable(rng, 2 + rng() % 5, 5 + rng() % 40);
    for (auto mode : {GraphMode::TPB, GraphMode::ALL}) {
      const auto g = build_pauli_graph(obs, mode);
      const auto r = ldfc_coloring(g, obs);
      for (const auto &grp : r.groups)
        for (auto u : grp.members)
          for (auto v : grp.members)
            ASSERT_FALSE(g.adjacent(u, v));
    }
  }
}

TEST(Grouping, GreedyTpbOnlyIsQubitwiseCompatible) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    const auto obs = random_observable(rng, 2 + rng() % 5, 5 + rng() % 40);
    const auto r = greedy_group(obs, catalog("TPB"));
    EXPECT_LE(r.size(), obs.size());
    for (const auto &grp : r.groups)
      for (auto u : grp.members)
        for (auto v : grp.members)
          ASSERT_TRUE(qubitwise_compatible(obs[u].pauli, obs[v].pauli));
  }
}

TEST(Grouping, EntangledMethodsNeverWorseThanClique) {
  // Groups must still be jointly measurable, so K >= clique of the
  // commutation-incompatibility graph.
  std::mt19937_64 rng(24);
  for (int t = 0; t < 20; ++t) {
    const auto obs = random_observable(rng, 2 + rng() % 4, 5 + rng() % 30);
    const auto clique = max_clique(build_pauli_graph(obs, GraphMode::ALL));
    for (auto m : all_methods)
      EXPECT_GE(group_observable(obs, m).size(), clique.size);
  }
}

TEST(Grouping, DeterministicAndThreadIndependent) {
  std::mt19937_64 rng(25);
  const auto obs = random_observable(rng, 6, 60);
  for (auto m : all_methods) {
    const auto a = group_observable(obs, m, 1);
    const auto b = group_observable(obs, m, 4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a.groups[k].members, b.groups[k].members);
      EXPECT_EQ(a.groups[k].assignment, b.groups[k].assignment);
    }
  }
}

TEST(Grouping, MethodNames) {
  for (auto m : all_methods)
    EXPECT_EQ(method_from_name(to_string(m)), m);
  EXPECT_FALSE(method_from_name("bogus"));
}

TEST(Grouping, ValidateCatchesBrokenGroupings) {
  GroupingResult r;
  r.groups.push_back({{0, 1}, std::nullopt});
  EXPECT_NE(validate(parse_observable("1 XI\n1 ZI"), r), "");
  GroupingResult missing;
  missing.groups.push_back({{0}, std::nullopt});
  EXPECT_NE(validate(heisenberg(), missing), "");
}
