/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "jmeas/report.hpp"

#include <gtest/gtest.h>

using namespace jmeas;

TEST(Report, GroupingJson) {
  const auto obs = parse_observable("1 XX\n1 YY\n1 ZZ");
  const auto r = group_observable(obs, Method::TPBBell);
  const auto j = to_json(r, 2, true);
  EXPECT_EQ(j["method"], "TPB+Bell");
  EXPECT_EQ(j["groups"], 1);
  EXPECT_EQ(j["detail"][0]["members"], json::parse("[0,1,2]"));
  EXPECT_EQ(j["detail"][0]["placements"][0]["kind"], "Bell");
  EXPECT_EQ(j["detail"][0]["placements"][0]["positions"], json::parse("[0,1]"));
  EXPECT_EQ(j["detail"][0]["circuit"], "CNOT 0 1\nH 0\nMEASURE_ALL\n");
  const auto all = to_json(group_observable(obs, Method::ALL), 2, true);
  EXPECT_FALSE(all["detail"][0].contains("placements"));
}

TEST(Report, EstimateJsonAndHeader) {
  EstimateReport rep;
  rep.value = -3;
  rep.per_group.push_back({0, -3.0, 0.0, 6000, {-1, -1, -1}});
  const auto j = to_json(rep);
  EXPECT_EQ(j["value"], -3.0);
  EXPECT_EQ(j["per_group"][0]["shots"], 6000);
  const auto h = report_header(json{{"seed", 7}});
  EXPECT_EQ(h["version"], version);
  EXPECT_EQ(h["config"]["seed"], 7);
  EXPECT_EQ(h.dump(), report_header(json{{"seed", 7}}).dump());
}
