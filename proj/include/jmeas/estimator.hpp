/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "jmeas/grouping.hpp"
#include "jmeas/measurements.hpp"
#include "jmeas/parallel.hpp"
#include "jmeas/random.hpp"
#include "jmeas/sim.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jmeas {

enum class ShotMode { Proportional, Uniform };

/// Shots per group. Proportional: S_k = |s_k| * S. Uniform: S_k = S.
struct ShotPlan {
  std::vector<std::uint64_t> shots;
  std::uint64_t base = 0;
  ShotMode mode = ShotMode::Proportional;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto s : shots)
      t += s;
    return t;
  }
};

inline ShotPlan allocate_shots(const GroupingResult &grouping,
                               std::uint64_t base, ShotMode mode) {
  if (base == 0)
    throw std::invalid_argument("base shots must be positive");
  ShotPlan plan;
  plan.base = base;
  plan.mode = mode;
  for (const auto &g : grouping.groups)
    plan.shots.push_back(mode == ShotMode::Proportional
                             ? base * g.members.size()
                             : base);
  return plan;
}

// ---------------------------------------------------------------------------
// Analytic standard errors

/// sqrt(sum_k Var(sum_{i in s_k} a_i P_i) / S_k).
inline double standard_error_grouped(const QuantumState &state,
                                     const Observable &obs,
                                     const GroupingResult &grouping,
                                     const ShotPlan &plan) {
  if (plan.shots.size() != grouping.groups.size())
    throw std::invalid_argument("shot plan and grouping sizes differ");
  double total = 0.0;
  for (std::size_t k = 0; k < grouping.groups.size(); ++k) {
    const auto &members = grouping.groups[k].members;
    double var = 0.0;
    for (auto i : members)
      for (auto j : members)
        var += obs[i].coefficient * obs[j].coefficient *
               covariance_exact(state, obs[i].pauli, obs[j].pauli).value;
    total += std::max(0.0, var) / static_cast<double>(plan.shots[k]);
  }
  return std::sqrt(total);
}

/// sqrt((1/S) sum_i a_i^2 Var(P_i)), every term measured on its own.
inline double standard_error_ungrouped(const QuantumState &state,
                                       const Observable &obs,
                                       std::uint64_t shots) {
  if (shots == 0)
    throw std::invalid_argument("shots must be positive");
  double total = 0.0;
  for (const auto &t : obs.terms())
    total += t.coefficient * t.coefficient *
             std::max(0.0, covariance_exact(state, t.pauli, t.pauli).value);
  return std::sqrt(total / static_cast<double>(shots));
}

// ---------------------------------------------------------------------------
// Readout calibration and mitigation

/// Column-stochastic confusion matrix: entry (o, b) is the probability of
/// reading o after preparing basis state b on `num_qubits` qubits.
struct CalibrationMatrix {
  std::size_t num_qubits = 0;
  Eigen::MatrixXd matrix;

  static CalibrationMatrix identity(std::size_t m) {
    return {m, Eigen::MatrixXd::Identity(Eigen::Index{1} << m,
                                         Eigen::Index{1} << m)};
  }
};

inline constexpr std::size_t max_calibration_qubits = 6;

namespace detail {

inline Circuit preparation_circuit(std::size_t m, std::uint64_t basis) {
  Circuit c(m);
  for (std::size_t q = 0; q < m; ++q)
    if ((basis >> q) & 1u)
      c.add(Gate::x(q));
  return c;
}

inline void check_calibration_width(std::size_t m) {
  if (m == 0 || m > max_calibration_qubits)
    throw std::invalid_argument("calibration supports 1.." +
                                std::to_string(max_calibration_qubits) +
                                " qubits");
}

} // namespace detail

/// Prepares every basis state with X gates (noisy under `noise`), samples
/// `shots` readouts, and stores the empirical outcome distribution as the
/// column for that state.
inline CalibrationMatrix calibrate(const NoiseModel &noise, std::size_t m,
                                   std::uint64_t shots, std::uint64_t seed) {
  detail::check_calibration_width(m);
  const auto dim = std::size_t{1} << m;
  CalibrationMatrix cal{m, Eigen::MatrixXd::Zero(dim, dim)};
  for (std::size_t b = 0; b < dim; ++b) {
    const auto prepared = apply_circuit(StateVector(m),
                                        detail::preparation_circuit(m, b), noise);
    const auto counts = sample(prepared, shots, noise, derive_seed(seed, b));
    for (const auto &[o, c] : counts.entries())
      cal.matrix(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(b)) =
          c / static_cast<double>(shots);
  }
  return cal;
}

/// The shots -> infinity limit of calibrate().
inline CalibrationMatrix calibrate_exact(const NoiseModel &noise,
                                         std::size_t m) {
  detail::check_calibration_width(m);
  const auto dim = std::size_t{1} << m;
  CalibrationMatrix cal{m, Eigen::MatrixXd::Zero(dim, dim)};
  for (std::size_t b = 0; b < dim; ++b) {
    const auto prepared = apply_circuit(StateVector(m),
                                        detail::preparation_circuit(m, b), noise);
    const auto p = apply_readout_confusion(probabilities(prepared), noise);
    for (std::size_t o = 0; o < dim; ++o)
      cal.matrix(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(b)) =
          p[o];
  }
  return cal;
}

/// Thrown when a calibration matrix cannot be inverted reliably.
class CalibrationError : public std::runtime_error {
public:
  CalibrationError(const std::string &what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition_number() const { return condition_; }

private:
  double condition_;
};

inline double condition_number(const Eigen::MatrixXd &a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) == 0.0)
    return std::numeric_limits<double>::infinity();
  return s(0) / s(s.size() - 1);
}

/// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd &a, const Eigen::VectorXd &b,
                            double tol = 1e-12, int max_iter = 500) {
  const auto n = a.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);

  auto solve_passive = [&](Eigen::VectorXd &s) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)])
        idx.push_back(j);
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
      sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
    s.setZero(n);
    for (std::size_t k = 0; k < idx.size(); ++k)
      s(idx[k]) = z(static_cast<Eigen::Index>(k));
  };

  Eigen::VectorXd w = a.transpose() * (b - a * x);
  for (int outer = 0; outer < max_iter; ++outer) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    if (best < 0)
      break;
    passive[static_cast<std::size_t>(best)] = true;
    Eigen::VectorXd s;
    for (int inner = 0; inner < max_iter; ++inner) {
      solve_passive(s);
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && s(j) <= tol)
          alpha = std::min(alpha, x(j) / (x(j) - s(j)));
      if (!std::isfinite(alpha))
        break;
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
    }
    x = s;
    w = a.transpose() * (b - a * x);
  }
  return x;
}

/// Readout-corrected quasi-counts: solves cal * x = counts by non-negative
/// least squares and rescales x to the original shot total.
inline Counts mitigate(const Counts &counts, const CalibrationMatrix &cal,
                       double max_condition = 1e12) {
  if (counts.width() != cal.num_qubits)
    throw std::invalid_argument("counts width " +
                                std::to_string(counts.width()) +
                                " does not match calibration width " +
                                std::to_string(cal.num_qubits));
  const double total = counts.total();
  if (!(total > 0.0))
    throw std::invalid_argument("cannot mitigate empty counts");
  const double cond = condition_number(cal.matrix);
  if (!(cond < max_condition))
    throw CalibrationError("calibration matrix is ill-conditioned (cond = " +
                               std::to_string(cond) + ")",
                           cond);
  const auto dim = cal.matrix.rows();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  for (const auto &[o, c] : counts.entries())
    b(static_cast<Eigen::Index>(o)) = c / total;
  Eigen::VectorXd x = nnls(cal.matrix, b);
  const double sum = x.sum();
  if (!(sum > 0.0))
    throw CalibrationError("mitigation produced an empty distribution", cond);
  Counts out(counts.width());
  for (Eigen::Index i = 0; i < dim; ++i)
    if (x(i) > 0.0)
      out.add(static_cast<std::uint64_t>(i), x(i) / sum * total);
  return out;
}

/// Per-qubit 2x2 confusion matrices, for widths beyond the full-matrix
/// limit. Columns are prepared 0 / 1.
struct TensorCalibration {
  std::vector<Eigen::Matrix2d> qubits;
};

/// Calibrates each qubit from the all-zeros and all-ones preparations.
inline TensorCalibration calibrate_tensor(const NoiseModel &noise,
                                          std::size_t m, std::uint64_t shots,
                                          std::uint64_t seed) {
  if (m == 0 || m > max_statevector_qubits)
    throw std::invalid_argument("tensor calibration width out of range");
  TensorCalibration cal;
  cal.qubits.assign(m, Eigen::Matrix2d::Zero());
  for (std::uint64_t col = 0; col < 2; ++col) {
    const std::uint64_t basis = col ? (std::uint64_t{1} << m) - 1 : 0;
    const auto prepared = apply_circuit(
        StateVector(m), detail::preparation_circuit(m, basis), noise);
    const auto counts = sample(prepared, shots, noise, derive_seed(seed, col));
    for (const auto &[o, c] : counts.entries()) {
      for (std::size_t q = 0; q < m; ++q)
        cal.qubits[q]((o >> q) & 1u, static_cast<Eigen::Index>(col)) +=
            c / static_cast<double>(shots);
    }
  }
  return cal;
}

/// Applies each qubit's inverse confusion in turn, clips negative
/// quasi-probabilities and rescales to the shot total.
inline Counts mitigate(const Counts &counts, const TensorCalibration &cal) {
  const auto m = counts.width();
  if (cal.qubits.size() != m)
    throw std::invalid_argument("tensor calibration width mismatch");
  const double total = counts.total();
  if (!(total > 0.0))
    throw std::invalid_argument("cannot mitigate empty counts");
  std::vector<double> v(std::size_t{1} << m, 0.0);
  for (const auto &[o, c] : counts.entries())
    v[o] = c / total;
  for (std::size_t q = 0; q < m; ++q) {
    const double cond = condition_number(cal.qubits[q]);
    if (!(cond < 1e12))
      throw CalibrationError("qubit " + std::to_string(q) +
                                 " calibration is singular",
                             cond);
    const Eigen::Matrix2d inv = cal.qubits[q].inverse();
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i & bit)
        continue;
      const double a = v[i], b = v[i | bit];
      v[i] = inv(0, 0) * a + inv(0, 1) * b;
      v[i | bit] = inv(1, 0) * a + inv(1, 1) * b;
    }
  }
  double sum = 0.0;
  for (auto &x : v)
    sum += (x = std::max(0.0, x));
  if (!(sum > 0.0))
    throw CalibrationError("mitigation produced an empty distribution", 0.0);
  Counts out(m);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > 0.0)
      out.add(i, v[i] / sum * total);
  return out;
}

// ---------------------------------------------------------------------------
// Sampled estimation

enum class MitigationMode { Full, Tensor };

struct EstimateOptions {
  std::optional<NoiseModel> noise;
  bool mitigate = false;
  MitigationMode mitigation_mode = MitigationMode::Full;
  /// Shots per prepared basis state when calibrating internally.
  std::uint64_t calibration_shots = 8192;
  /// Reused instead of calibrating when present (full mode only).
  std::optional<CalibrationMatrix> calibration;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct GroupEstimate {
  std::size_t group = 0;
  /// Sample mean of sum_{i in group} a_i P_i.
  double estimate = 0.0;
  /// Per-shot sample variance of the group sum.
  double variance = 0.0;
  std::uint64_t shots = 0;
  /// Sampled <P_i> per member, same order as the group's members.
  std::vector<double> member_expectations;
};

struct EstimateReport {
  double value = 0.0;
  double standard_error = 0.0;
  std::vector<GroupEstimate> per_group;
  bool mitigated = false;
};

namespace detail {

inline GroupEstimate summarize_group(const Observable &obs, const Group &grp,
                                     const Counts &counts,
                                     std::uint64_t shots) {
  std::vector<Readout> readouts;
  for (auto i : grp.members)
    readouts.push_back(global_readout(*grp.assignment, obs[i].pauli));
  GroupEstimate ge;
  ge.shots = shots;
  ge.member_expectations.assign(grp.members.size(), 0.0);
  const double w_total = counts.total();
  double mean = 0.0;
  for (const auto &[o, w] : counts.entries()) {
    double f = 0.0;
    for (std::size_t m = 0; m < readouts.size(); ++m) {
      const int ev = readouts[m].eigenvalue(o);
      f += obs[grp.members[m]].coefficient * ev;
      ge.member_expectations[m] += w * ev;
    }
    mean += w * f;
  }
  mean /= w_total;
  for (auto &e : ge.member_expectations)
    e /= w_total;
  double ss = 0.0;
  for (const auto &[o, w] : counts.entries()) {
    double f = 0.0;
    for (std::size_t m = 0; m < readouts.size(); ++m)
      f += obs[grp.members[m]].coefficient * readouts[m].eigenvalue(o);
    ss += w * (f - mean) * (f - mean);
  }
  ge.estimate = mean;
  ge.variance = w_total > 1.0 ? ss / (w_total - 1.0) : 0.0;
  return ge;
}

} // namespace detail

/// Runs each group's measurement circuit on `state`, samples its planned
/// shots, optionally mitigates readout errors, and combines the per-shot
/// group sums into an estimate of <A> with its sampled standard error.
inline EstimateReport estimate(const QuantumState &state, const Observable &obs,
                               const GroupingResult &grouping,
                               const ShotPlan &plan,
                               const EstimateOptions &opts = {}) {
  if (plan.shots.size() != grouping.groups.size())
    throw std::invalid_argument("shot plan has " +
                                std::to_string(plan.shots.size()) +
                                " entries for " +
                                std::to_string(grouping.groups.size()) +
                                " groups");
  const auto width = num_qubits(state);
  if (obs.num_qubits() != width)
    throw std::invalid_argument("observable width does not match state");
  for (const auto &g : grouping.groups)
    if (!g.assignment)
      throw std::invalid_argument(
          "grouping has no measurement assignment (ALL mode counts only)");

  const NoiseModel noise = opts.noise.value_or(NoiseModel{});
  std::optional<CalibrationMatrix> full_cal;
  std::optional<TensorCalibration> tensor_cal;
  if (opts.mitigate) {
    if (opts.mitigation_mode == MitigationMode::Full)
      full_cal = opts.calibration
                     ? *opts.calibration
                     : calibrate(noise, width, opts.calibration_shots,
                                 derive_seed(opts.seed, {2}));
    else
      tensor_cal = calibrate_tensor(noise, width, opts.calibration_shots,
                                    derive_seed(opts.seed, {2}));
  }

  EstimateReport report;
  report.mitigated = opts.mitigate;
  report.per_group.resize(grouping.groups.size());
  parallel_for(grouping.groups.size(), opts.threads, [&](std::size_t k) {
    const auto &grp = grouping.groups[k];
    const auto circuit = circuit_for(*grp.assignment, width);
    const auto rotated = apply_circuit(state, circuit, opts.noise);
    auto counts = sample(rotated, plan.shots[k], opts.noise,
                         derive_seed(opts.seed, {1, k}));
    if (full_cal)
      counts = mitigate(counts, *full_cal);
    else if (tensor_cal)
      counts = mitigate(counts, *tensor_cal);
    report.per_group[k] =
        detail::summarize_group(obs, grp, counts, plan.shots[k]);
    report.per_group[k].group = k;
  });
  double var = 0.0;
  for (const auto &g : report.per_group) {
    report.value += g.estimate;
    var += g.variance / static_cast<double>(g.shots);
  }
  report.standard_error = std::sqrt(var);
  return report;
}

} // namespace jmeas
