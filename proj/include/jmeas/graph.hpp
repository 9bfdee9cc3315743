/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "jmeas/observable.hpp"
#include "jmeas/parallel.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace jmeas {

/// TPB: edges join strings that are not qubit-wise compatible.
/// ALL: edges join strings that do not commute (extended Pauli graph).
enum class GraphMode { TPB, ALL };

/// Fixed-size bitset over vertex indices.
class VertexSet {
public:
  VertexSet() = default;
  explicit VertexSet(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t capacity() const { return n_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) {
    words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_)
      c += std::popcount(w);
    return c;
  }
  bool none() const {
    for (auto w : words_)
      if (w)
        return false;
    return true;
  }

  VertexSet &operator&=(const VertexSet &o) {
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] &= o.words_[i];
    return *this;
  }
  friend VertexSet operator&(VertexSet a, const VertexSet &b) {
    a &= b;
    return a;
  }
  VertexSet &subtract(const VertexSet &o) {
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] &= ~o.words_[i];
    return *this;
  }

  /// Lowest set index, or capacity() when empty.
  std::size_t first() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w])
        return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return n_;
  }

  /// Calls fn(i) for every set bit in ascending order.
  template <class Fn> void for_each(Fn &&fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      auto bits = words_[w];
      while (bits) {
        const auto b = static_cast<std::size_t>(std::countr_zero(bits));
        fn(w * 64 + b);
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const VertexSet &, const VertexSet &) = default;

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Incompatibility graph over the terms of an observable.
class PauliGraph {
public:
  PauliGraph() = default;
  PauliGraph(std::size_t n, GraphMode mode)
      : mode_(mode), rows_(n, VertexSet(n)) {}

  std::size_t size() const { return rows_.size(); }
  GraphMode mode() const { return mode_; }

  bool adjacent(std::size_t u, std::size_t v) const {
    return rows_[u].test(v);
  }
  const VertexSet &neighbors(std::size_t u) const { return rows_[u]; }
  std::size_t degree(std::size_t u) const { return rows_[u].count(); }

  void add_edge(std::size_t u, std::size_t v) {
    if (u == v)
      return;
    rows_[u].set(v);
    rows_[v].set(u);
  }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto &r : rows_)
      e += r.count();
    return e / 2;
  }

  /// Builds the graph; rows are computed independently so `threads` only
  /// affects speed.
  static PauliGraph build(const Observable &obs, GraphMode mode,
                          std::size_t threads = 1) {
    const auto n = obs.size();
    PauliGraph g(n, mode);
    parallel_for(n, threads, [&](std::size_t u) {
      const auto &pu = obs[u].pauli;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == u)
          continue;
        const auto &pv = obs[v].pauli;
        const bool joint = mode == GraphMode::TPB ? qubitwise_compatible(pu, pv)
                                                  : commute(pu, pv);
        if (!joint)
          g.rows_[u].set(v);
      }
    });
    return g;
  }

private:
  GraphMode mode_ = GraphMode::TPB;
  std::vector<VertexSet> rows_;
};

inline PauliGraph build_pauli_graph(const Observable &obs, GraphMode mode,
                                    std::size_t threads = 1) {
  return PauliGraph::build(obs, mode, threads);
}

/// Vertices by descending degree, ties by ascending index.
inline std::vector<std::size_t> degree_order(const PauliGraph &g) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> deg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    deg[i] = g.degree(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });
  return order;
}

/// Largest-degree-first greedy coloring. Returns color[v], colors 0..K-1.
inline std::vector<std::size_t> ldfc_colors(const PauliGraph &g) {
  constexpr auto uncolored = static_cast<std::size_t>(-1);
  std::vector<std::size_t> color(g.size(), uncolored);
  std::vector<char> taken;
  for (auto v : degree_order(g)) {
    taken.assign(g.size() + 1, 0);
    g.neighbors(v).for_each([&](std::size_t u) {
      if (color[u] != uncolored)
        taken[color[u]] = 1;
    });
    std::size_t c = 0;
    while (taken[c])
      ++c;
    color[v] = c;
  }
  return color;
}

struct CliqueResult {
  std::size_t size = 0;
  bool exact = true;
  std::vector<std::size_t> members;
};

namespace detail {

/// Branch and bound with a greedy-coloring bound (MCQ style) on a vertex
/// renumbering sorted by descending degree.
class CliqueSearch {
public:
  CliqueSearch(const PauliGraph &g, std::chrono::duration<double> limit)
      : n_(g.size()), deadline_(std::chrono::steady_clock::now() +
                                std::chrono::duration_cast<
                                    std::chrono::steady_clock::duration>(limit)) {
    order_ = degree_order(g);
    std::vector<std::size_t> rank(n_);
    for (std::size_t i = 0; i < n_; ++i)
      rank[order_[i]] = i;
    adj_.assign(n_, VertexSet(n_));
    for (std::size_t i = 0; i < n_; ++i)
      g.neighbors(order_[i]).for_each(
          [&](std::size_t u) { adj_[i].set(rank[u]); });
  }

  CliqueResult run() {
    if (n_ == 0)
      return {0, true, {}};
    seed_greedy();
    VertexSet all(n_);
    for (std::size_t i = 0; i < n_; ++i)
      all.set(i);
    std::vector<std::size_t> current;
    expand(current, all);
    CliqueResult r;
    r.size = best_.size();
    r.exact = !timed_out_;
    for (auto v : best_)
      r.members.push_back(order_[v]);
    std::sort(r.members.begin(), r.members.end());
    return r;
  }

private:
  void seed_greedy() {
    VertexSet cand(n_);
    for (std::size_t i = 0; i < n_; ++i)
      cand.set(i);
    std::vector<std::size_t> clique;
    while (!cand.none()) {
      const std::size_t pick = cand.first();
      clique.push_back(pick);
      cand &= adj_[pick];
    }
    best_ = clique;
  }

  bool out_of_time() {
    if (timed_out_)
      return true;
    if ((++steps_ & 0x3ff) == 0 &&
        std::chrono::steady_clock::now() > deadline_)
      timed_out_ = true;
    return timed_out_;
  }

  void expand(std::vector<std::size_t> &current, VertexSet cand) {
    // Greedy color classes over cand; vertices listed with their color bound.
    std::vector<std::size_t> verts;
    std::vector<std::size_t> bounds;
    {
      VertexSet uncolored = cand;
      std::size_t color = 0;
      while (!uncolored.none()) {
        ++color;
        VertexSet q = uncolored;
        while (!q.none()) {
          const std::size_t v = q.first();
          uncolored.reset(v);
          q.reset(v);
          q.subtract(adj_[v]);
          verts.push_back(v);
          bounds.push_back(color);
        }
      }
    }
    for (std::size_t k = verts.size(); k-- > 0;) {
      if (out_of_time())
        return;
      if (current.size() + bounds[k] <= best_.size())
        return;
      const auto v = verts[k];
      current.push_back(v);
      VertexSet next = cand & adj_[v];
      if (next.none()) {
        if (current.size() > best_.size())
          best_ = current;
      } else {
        expand(current, std::move(next));
      }
      current.pop_back();
      cand.reset(v);
    }
  }

  std::size_t n_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<std::size_t> order_;
  std::vector<VertexSet> adj_;
  std::vector<std::size_t> best_;
  std::uint64_t steps_ = 0;
  bool timed_out_ = false;
};

} // namespace detail

/// Maximum clique by branch and bound. If `time_limit` expires the best
/// clique found so far is returned with exact == false.
inline CliqueResult max_clique(const PauliGraph &g,
                               std::chrono::duration<double> time_limit =
                                   std::chrono::hours(1)) {
  return detail::CliqueSearch(g, time_limit).run();
}

} // namespace jmeas
