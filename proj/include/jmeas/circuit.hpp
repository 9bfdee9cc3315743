/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "jmeas/observable.hpp"

#include <array>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jmeas {

enum class GateKind { H, Sdg, X, Z, Ry, U2, CNOT, MeasureAll };

struct Gate {
  GateKind kind = GateKind::H;
  std::array<std::size_t, 2> qubits{0, 0};
  /// Ry: params[0] = theta. U2: params[0] = phi, params[1] = lambda.
  std::array<double, 2> params{0.0, 0.0};

  std::size_t arity() const {
    switch (kind) {
    case GateKind::CNOT:
      return 2;
    case GateKind::MeasureAll:
      return 0;
    default:
      return 1;
    }
  }

  static Gate h(std::size_t q) { return {GateKind::H, {q, 0}, {}}; }
  static Gate sdg(std::size_t q) { return {GateKind::Sdg, {q, 0}, {}}; }
  static Gate x(std::size_t q) { return {GateKind::X, {q, 0}, {}}; }
  static Gate z(std::size_t q) { return {GateKind::Z, {q, 0}, {}}; }
  static Gate ry(std::size_t q, double theta) {
    return {GateKind::Ry, {q, 0}, {theta, 0.0}};
  }
  static Gate u2(std::size_t q, double phi, double lambda) {
    return {GateKind::U2, {q, 0}, {phi, lambda}};
  }
  static Gate cnot(std::size_t control, std::size_t target) {
    return {GateKind::CNOT, {control, target}, {}};
  }
  static Gate measure_all() { return {GateKind::MeasureAll, {0, 0}, {}}; }

  friend bool operator==(const Gate &, const Gate &) = default;
};

/// Ordered gate list on `width` qubits; MEASURE_ALL may only appear last.
class Circuit {
public:
  Circuit() = default;
  explicit Circuit(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }
  const std::vector<Gate> &gates() const { return gates_; }
  bool measured() const {
    return !gates_.empty() && gates_.back().kind == GateKind::MeasureAll;
  }

  Circuit &add(const Gate &g) {
    if (measured())
      throw std::invalid_argument("no gates may follow MEASURE_ALL");
    if (g.kind != GateKind::MeasureAll) {
      for (std::size_t i = 0; i < g.arity(); ++i)
        if (g.qubits[i] >= width_)
          throw std::out_of_range("gate qubit " + std::to_string(g.qubits[i]) +
                                  " outside circuit width " +
                                  std::to_string(width_));
      if (g.arity() == 2 && g.qubits[0] == g.qubits[1])
        throw std::invalid_argument("two-qubit gate on a single qubit");
    }
    gates_.push_back(g);
    return *this;
  }

  std::size_t count(GateKind kind) const {
    std::size_t c = 0;
    for (const auto &g : gates_)
      c += g.kind == kind;
    return c;
  }

  friend bool operator==(const Circuit &, const Circuit &) = default;

private:
  std::size_t width_ = 0;
  std::vector<Gate> gates_;
};

inline std::string to_string(const Gate &g) {
  const auto q0 = std::to_string(g.qubits[0]);
  switch (g.kind) {
  case GateKind::H:
    return "H " + q0;
  case GateKind::Sdg:
    return "SDG " + q0;
  case GateKind::X:
    return "X " + q0;
  case GateKind::Z:
    return "Z " + q0;
  case GateKind::Ry:
    return "RY " + format_double(g.params[0]) + " " + q0;
  case GateKind::U2:
    return "U2 " + format_double(g.params[0]) + " " +
           format_double(g.params[1]) + " " + q0;
  case GateKind::CNOT:
    return "CNOT " + q0 + " " + std::to_string(g.qubits[1]);
  case GateKind::MeasureAll:
    return "MEASURE_ALL";
  }
  return "?";
}

/// Line-per-gate text dump: `H 0`, `CNOT 0 1`, `U2 <phi> <lambda> <q>`, ...
inline std::string dump(const Circuit &c) {
  std::string out;
  for (const auto &g : c.gates()) {
    out += to_string(g);
    out += '\n';
  }
  return out;
}

/// Inverse of dump(); the width is supplied by the caller.
inline Circuit parse_circuit(const std::string &text, std::size_t width) {
  Circuit c(width);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name))
      continue;
    auto need = [&](auto &v) {
      if (!(ls >> v))
        throw ParseError(line_no, "missing operand for " + name);
    };
    std::size_t a = 0, b = 0;
    double p = 0.0, l = 0.0;
    if (name == "H" || name == "SDG" || name == "X" || name == "Z") {
      need(a);
      const GateKind k = name == "H"     ? GateKind::H
                         : name == "SDG" ? GateKind::Sdg
                         : name == "X"   ? GateKind::X
                                         : GateKind::Z;
      c.add({k, {a, 0}, {}});
    } else if (name == "RY") {
      need(p);
      need(a);
      c.add(Gate::ry(a, p));
    } else if (name == "U2") {
      need(p);
      need(l);
      need(a);
      c.add(Gate::u2(a, p, l));
    } else if (name == "CNOT") {
      need(a);
      need(b);
      c.add(Gate::cnot(a, b));
    } else if (name == "MEASURE_ALL") {
      c.add(Gate::measure_all());
    } else {
      throw ParseError(line_no, "unknown gate '" + name + "'");
    }
  }
  return c;
}

} // namespace jmeas
