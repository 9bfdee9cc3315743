/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "jmeas/graph.hpp"
#include "jmeas/measurements.hpp"
#include "jmeas/observable.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jmeas {

enum class Method { NoGrouping, TPB, TPBBell, TPB2Q, ALL };

inline constexpr std::array<Method, 5> all_methods{
    Method::NoGrouping, Method::TPB, Method::TPBBell, Method::TPB2Q,
    Method::ALL};

inline std::string to_string(Method m) {
  switch (m) {
  case Method::NoGrouping:
    return "No-grouping";
  case Method::TPB:
    return "TPB";
  case Method::TPBBell:
    return "TPB+Bell";
  case Method::TPB2Q:
    return "TPB+2Q";
  case Method::ALL:
    return "ALL";
  }
  return "?";
}

inline std::optional<Method> method_from_name(std::string_view name) {
  std::string key;
  for (char c : name)
    if (c != '-' && c != '_' && c != ' ')
      key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "nogrouping" || key == "none")
    return Method::NoGrouping;
  if (key == "tpb")
    return Method::TPB;
  if (key == "tpb+bell" || key == "bell")
    return Method::TPBBell;
  if (key == "tpb+2q" || key == "2q")
    return Method::TPB2Q;
  if (key == "all")
    return Method::ALL;
  return std::nullopt;
}

/// One jointly measured set of terms. `assignment` is absent for ALL-mode
/// groups, which are counted but not turned into circuits.
struct Group {
  std::vector<std::size_t> members;
  std::optional<MeasurementAssignment> assignment;
};

struct GroupingResult {
  Method method = Method::NoGrouping;
  std::vector<Group> groups;

  std::size_t size() const { return groups.size(); }
};

/// Single-qubit TPB kind measuring `op`; the identity is read in Z.
inline KindId tpb_kind(PauliOp op) {
  switch (op) {
  case PauliOp::X:
    return KindId::TpbX;
  case PauliOp::Y:
    return KindId::TpbY;
  default:
    return KindId::TpbZ;
  }
}

/// Adds TPB placements for every qubit of `reference` not yet covered.
inline void complete_with_tpb(MeasurementAssignment &a,
                              const PauliString &reference) {
  for (std::size_t q = 0; q < reference.size(); ++q)
    if (!a.covers(q))
      a.add({tpb_kind(reference.op(q)), {q}});
}

/// Per-qubit TPB basis shared by qubit-wise compatible strings.
inline MeasurementAssignment tpb_assignment(const Observable &obs,
                                            const std::vector<std::size_t> &members) {
  PauliString basis(obs.num_qubits());
  for (auto i : members) {
    const auto &p = obs[i].pauli;
    for (std::size_t q = 0; q < p.size(); ++q) {
      const auto op = p.op(q);
      if (op == PauliOp::I)
        continue;
      if (basis.op(q) != PauliOp::I && basis.op(q) != op)
        throw std::invalid_argument("group members are not qubit-wise "
                                    "compatible at qubit " +
                                    std::to_string(q));
      basis.set(q, op);
    }
  }
  MeasurementAssignment a;
  complete_with_tpb(a, basis);
  return a;
}

/// Color classes of a largest-degree-first coloring. For TPB graphs each
/// class gets its per-qubit basis; ALL-mode groups carry no assignment.
inline GroupingResult ldfc_coloring(const PauliGraph &g, const Observable &obs) {
  if (g.size() != obs.size())
    throw std::invalid_argument("graph and observable sizes differ");
  const auto color = ldfc_colors(g);
  std::size_t k = 0;
  for (auto c : color)
    k = std::max(k, c + 1);
  GroupingResult r;
  r.method = g.mode() == GraphMode::TPB ? Method::TPB : Method::ALL;
  r.groups.resize(k);
  for (std::size_t v = 0; v < color.size(); ++v)
    r.groups[color[v]].members.push_back(v);
  if (g.mode() == GraphMode::TPB)
    for (auto &grp : r.groups)
      grp.assignment = tpb_assignment(obs, grp.members);
  return r;
}

/// Greedy assignment of measurements for merging `vj` into the group led by
/// `vi` whose current assignment is `mi`. Returns the extended assignment, or
/// nullopt when the pair cannot be measured jointly under `kinds`.
///
/// Positions where vi and vj carry the same operator are left uncovered; the
/// caller fills them with TPB placements when the group is finalized.
inline std::optional<MeasurementAssignment>
assign_measurements(const PauliString &vi, const PauliString &vj,
                    const std::vector<KindId> &kinds,
                    const MeasurementAssignment &mi) {
  detail::require_same_length(vi, vj);
  for (const auto &pl : mi.placements())
    if (!compatible_at(pl.kind, vj, pl.positions))
      return std::nullopt;

  std::vector<std::size_t> uncovered;
  for (std::size_t q = 0; q < vi.size(); ++q)
    if (!mi.covers(q) && vi.op(q) != vj.op(q))
      uncovered.push_back(q);

  MeasurementAssignment out = mi;
  std::array<std::size_t, 2> pos{};
  while (!uncovered.empty()) {
    bool placed = false;
    for (auto id : kinds) {
      const auto &k = kind(id);
      const std::span<const std::size_t> p(pos.data(), k.arity);
      if (k.arity == 1) {
        for (auto a : uncovered) {
          pos[0] = a;
          if (compatible_at(k, vi, p) && compatible_at(k, vj, p)) {
            placed = true;
            break;
          }
        }
      } else {
        for (auto a : uncovered) {
          for (auto b : uncovered) {
            if (a == b)
              continue;
            pos = {a, b};
            if (compatible_at(k, vi, p) && compatible_at(k, vj, p)) {
              placed = true;
              break;
            }
          }
          if (placed)
            break;
        }
      }
      if (placed) {
        out.add({id, std::vector<std::size_t>(p.begin(), p.end())});
        std::erase_if(uncovered, [&](std::size_t q) {
          return std::find(p.begin(), p.end(), q) != p.end();
        });
        break;
      }
    }
    if (!placed)
      return std::nullopt;
  }
  return out;
}

/// Greedy grouping with the ordered measurement set `kinds`: terms are
/// visited by descending degree in the TPB Pauli graph and every later term
/// that assign_measurements accepts is merged into the current group.
inline GroupingResult greedy_group(const Observable &obs,
                                   const std::vector<KindId> &kinds,
                                   std::size_t threads = 1) {
  if (kinds.empty())
    throw std::invalid_argument("measurement set is empty");
  const auto g = build_pauli_graph(obs, GraphMode::TPB, threads);
  const auto order = degree_order(g);
  std::vector<char> merged(obs.size(), 0);
  GroupingResult r;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto vi = order[i];
    if (merged[vi])
      continue;
    merged[vi] = 1;
    Group grp;
    grp.members.push_back(vi);
    MeasurementAssignment mi;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto vj = order[j];
      if (merged[vj])
        continue;
      if (auto next =
              assign_measurements(obs[vi].pauli, obs[vj].pauli, kinds, mi)) {
        mi = std::move(*next);
        merged[vj] = 1;
        grp.members.push_back(vj);
      }
    }
    complete_with_tpb(mi, obs[vi].pauli);
    std::sort(grp.members.begin(), grp.members.end());
    grp.assignment = std::move(mi);
    r.groups.push_back(std::move(grp));
  }
  return r;
}

/// Every term in its own group, measured in its own TPB basis.
inline GroupingResult no_grouping(const Observable &obs) {
  GroupingResult r;
  r.method = Method::NoGrouping;
  for (std::size_t i = 0; i < obs.size(); ++i)
    r.groups.push_back({{i}, tpb_assignment(obs, {i})});
  return r;
}

inline GroupingResult group_observable(const Observable &obs, Method method,
                                       std::size_t threads = 1) {
  switch (method) {
  case Method::NoGrouping:
    return no_grouping(obs);
  case Method::TPB:
    return ldfc_coloring(build_pauli_graph(obs, GraphMode::TPB, threads), obs);
  case Method::ALL:
    return ldfc_coloring(build_pauli_graph(obs, GraphMode::ALL, threads), obs);
  case Method::TPBBell: {
    auto r = greedy_group(obs, catalog("TPB+Bell"), threads);
    r.method = method;
    return r;
  }
  case Method::TPB2Q: {
    auto r = greedy_group(obs, catalog("TPB+2Q"), threads);
    r.method = method;
    return r;
  }
  }
  throw std::invalid_argument("unknown grouping method");
}

/// Empty string when `r` is a valid grouping of `obs`: groups partition the
/// terms, and every member is measured by its group's assignment (or, for
/// ALL-mode groups, members pairwise commute). Otherwise a description of
/// the first violation.
inline std::string validate(const Observable &obs, const GroupingResult &r) {
  std::vector<int> seen(obs.size(), 0);
  for (std::size_t k = 0; k < r.groups.size(); ++k) {
    const auto &grp = r.groups[k];
    if (grp.members.empty())
      return "group " + std::to_string(k) + " is empty";
    for (auto i : grp.members) {
      if (i >= obs.size())
        return "group " + std::to_string(k) + " has out-of-range member";
      if (seen[i]++)
        return "term " + std::to_string(i) + " appears twice";
      if (grp.assignment && !grp.assignment->measures(obs[i].pauli))
        return "term " + std::to_string(i) + " (" + obs[i].pauli.str() +
               ") not measured by group " + std::to_string(k);
    }
    if (!grp.assignment)
      for (auto i : grp.members)
        for (auto j : grp.members)
          if (!commute(obs[i].pauli, obs[j].pauli))
            return "group " + std::to_string(k) + " has anticommuting members";
  }
  for (std::size_t i = 0; i < obs.size(); ++i)
    if (!seen[i])
      return "term " + std::to_string(i) + " is not in any group";
  return {};
}

} // namespace jmeas
