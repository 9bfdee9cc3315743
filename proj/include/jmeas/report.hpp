/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "jmeas/estimator.hpp"
#include "jmeas/grouping.hpp"
#include "jmeas/measurements.hpp"
#include "jmeas/version.hpp"

#include <json.hpp>

#include <cstddef>
#include <string>

namespace jmeas {

using json = nlohmann::ordered_json;

/// Report envelope: every report carries the tool version and the config
/// that produced it. No timestamps, so re-runs are byte-identical.
inline json report_header(const json &config) {
  return json{{"tool", "jmeas"}, {"version", version}, {"config", config}};
}

inline json to_json(const Placement &p) {
  return json{{"kind", kind(p.kind).name}, {"positions", p.positions}};
}

/// Groups with members and placements; circuits are included when
/// `with_circuits` is set and the group has an assignment.
inline json to_json(const GroupingResult &r, std::size_t width,
                    bool with_circuits = false) {
  json groups = json::array();
  for (const auto &g : r.groups) {
    json jg{{"members", g.members}};
    if (g.assignment) {
      json pl = json::array();
      for (const auto &p : g.assignment->placements())
        pl.push_back(to_json(p));
      jg["placements"] = std::move(pl);
      if (with_circuits)
        jg["circuit"] = dump(circuit_for(*g.assignment, width));
    }
    groups.push_back(std::move(jg));
  }
  return json{{"method", to_string(r.method)},
              {"groups", r.size()},
              {"detail", std::move(groups)}};
}

inline json to_json(const EstimateReport &r) {
  json groups = json::array();
  for (const auto &g : r.per_group)
    groups.push_back(json{{"group", g.group},
                          {"estimate", g.estimate},
                          {"variance", g.variance},
                          {"shots", g.shots},
                          {"member_expectations", g.member_expectations}});
  return json{{"value", r.value},
              {"standard_error", r.standard_error},
              {"mitigated", r.mitigated},
              {"per_group", std::move(groups)}};
}

} // namespace jmeas
