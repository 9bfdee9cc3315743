/*******************************************************************************
 * Copyright (c) 2026 The jmeas Authors.                                       *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "jmeas/pauli.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

namespace jmeas {

/// Thrown for malformed Hamiltonian text. `line()` is 1-based, 0 when the
/// error concerns the document as a whole.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string &what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

struct Term {
  double coefficient = 0.0;
  PauliString pauli;
};

/// A = sum_i a_i P_i with real coefficients and distinct strings of a common
/// length. Term order is preserved from construction.
class Observable {
public:
  Observable() = default;
  explicit Observable(std::size_t num_qubits) : n_(num_qubits) {}

  /// Appends a term, merging it into an existing equal string.
  void add_term(double coefficient, PauliString pauli) {
    if (!std::isfinite(coefficient))
      throw std::invalid_argument("coefficient is not finite");
    if (terms_.empty() && n_ == 0)
      n_ = pauli.size();
    if (pauli.size() != n_)
      throw std::invalid_argument("term has " + std::to_string(pauli.size()) +
                                  " qubits, observable has " +
                                  std::to_string(n_));
    if (auto it = index_.find(pauli); it != index_.end()) {
      terms_[it->second].coefficient += coefficient;
      return;
    }
    index_.emplace(pauli, terms_.size());
    terms_.push_back({coefficient, std::move(pauli)});
  }

  void add_term(double coefficient, std::string_view word) {
    add_term(coefficient, PauliString::from_string(word));
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<Term> &terms() const { return terms_; }
  const Term &operator[](std::size_t i) const { return terms_[i]; }

  friend bool operator==(const Observable &a, const Observable &b) {
    if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size())
      return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].coefficient != b.terms_[i].coefficient ||
          !(a.terms_[i].pauli == b.terms_[i].pauli))
        return false;
    return true;
  }

private:
  std::size_t n_ = 0;
  std::vector<Term> terms_;
  std::unordered_map<PauliString, std::size_t, PauliStringHash> index_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline bool parse_double(std::string_view tok, double &out) {
  if (!tok.empty() && tok.front() == '+')
    tok.remove_prefix(1);
  const auto *end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

template <class Fn> void for_each_line(std::string_view text, Fn &&fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty())
      fn(line_no, line);
  }
}

inline void add_parsed_term(Observable &obs, std::size_t line_no,
                            double coefficient, std::string_view word) {
  if (!std::isfinite(coefficient))
    throw ParseError(line_no, "coefficient is not finite");
  for (char c : word) {
    PauliOp op;
    if (!pauli_from_char(c, op))
      throw ParseError(line_no,
                       "invalid character '" + std::string(1, c) + "'");
  }
  if (!obs.empty() && word.size() != obs.num_qubits())
    throw ParseError(line_no, "Pauli word of length " +
                                  std::to_string(word.size()) +
                                  " differs from previous length " +
                                  std::to_string(obs.num_qubits()));
  obs.add_term(coefficient, word);
}

} // namespace detail

/// Parses the native text format: one `<coefficient> <pauli-word>` per line,
/// `#` starts a comment, blank lines are ignored. Terms keep file order and
/// repeated words are merged by summing coefficients.
inline Observable parse_observable(std::string_view text) {
  Observable obs;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos)
      throw ParseError(line_no, "expected '<coefficient> <pauli-word>'");
    const auto coef_tok = line.substr(0, sep);
    const auto word = detail::trim(line.substr(sep));
    if (word.find_first_of(" \t") != std::string_view::npos)
      throw ParseError(line_no, "trailing tokens after Pauli word");
    double coefficient = 0.0;
    if (!detail::parse_double(coef_tok, coefficient))
      throw ParseError(line_no, "malformed coefficient '" +
                                    std::string(coef_tok) + "'");
    detail::add_parsed_term(obs, line_no, coefficient, word);
  });
  if (obs.empty())
    throw ParseError(0, "no terms in input");
  return obs;
}

/// Parses the legacy two-line-per-term layout used by published molecular
/// Hamiltonian files: a Pauli word on one line, its coefficient on the next.
/// Coefficients may be written as Python complex literals such as
/// `(-0.81+0j)`; a non-negligible imaginary part is rejected.
inline Observable parse_observable_legacy(std::string_view text) {
  Observable obs;
  std::string pending_word;
  std::size_t pending_line = 0;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (pending_word.empty()) {
      pending_word = std::string(line);
      pending_line = line_no;
      return;
    }
    auto tok = line;
    double re = 0.0, im = 0.0;
    if (tok.front() == '(') {
      if (tok.back() != ')')
        throw ParseError(line_no, "unbalanced parenthesis in coefficient");
      tok = tok.substr(1, tok.size() - 2);
    }
    if (!tok.empty() && (tok.back() == 'j' || tok.back() == 'J')) {
      // split "a+bj" / "a-bj" at the last sign not following an exponent
      const auto body = tok.substr(0, tok.size() - 1);
      std::size_t split = std::string_view::npos;
      for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' &&
            body[i - 1] != 'E') {
          split = i;
          break;
        }
      }
      if (split == std::string_view::npos) {
        if (!detail::parse_double(body, im))
          throw ParseError(line_no, "malformed complex coefficient");
      } else if (!detail::parse_double(body.substr(0, split), re) ||
                 !detail::parse_double(body.substr(split), im)) {
        throw ParseError(line_no, "malformed complex coefficient");
      }
    } else if (!detail::parse_double(tok, re)) {
      throw ParseError(line_no,
                       "malformed coefficient '" + std::string(line) + "'");
    }
    if (std::abs(im) > 1e-12)
      throw ParseError(line_no, "coefficient has a non-zero imaginary part");
    detail::add_parsed_term(obs, pending_line, re, pending_word);
    pending_word.clear();
  });
  if (!pending_word.empty())
    throw ParseError(pending_line, "Pauli word without a coefficient");
  if (obs.empty())
    throw ParseError(0, "no terms in input");
  return obs;
}

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc())
    return std::to_string(v);
  return std::string(buf, ptr);
}

/// One `<coefficient> <word>` line per term, in term order.
inline std::string serialize(const Observable &obs) {
  std::string out;
  for (const auto &t : obs.terms()) {
    out += format_double(t.coefficient);
    out += ' ';
    out += t.pauli.str();
    out += '\n';
  }
  return out;
}

} // namespace jmeas
