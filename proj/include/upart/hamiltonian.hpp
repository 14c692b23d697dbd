// Copyright 2026 The upart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "upart/error.hpp"
#include "upart/pauli.hpp"

namespace upart {

/// Coefficients with magnitude below this are dropped after merging.
inline constexpr double kDropTolerance = 1e-12;

struct Term {
  double coeff = 0.0;
  PauliString op;

  friend bool operator==(const Term&, const Term&) = default;
};

/**
 * H = identity_offset * I + sum_j coeff_j * op_j with real coefficients.
 *
 * Construction canonicalizes: Hermitian signs are folded into the
 * coefficient, identical operators are merged, identity contributions move
 * to identity_offset, tiny coefficients are dropped and terms are sorted by
 * descending |coeff| (ties by symplectic order).
 */
class PauliHamiltonian {
 public:
  PauliHamiltonian() = default;

  PauliHamiltonian(std::size_t n_qubits, std::vector<Term> raw_terms, double identity_offset = 0.0)
      : n_(n_qubits) {
    std::unordered_map<PauliString, std::vector<double>> buckets;
    std::vector<double> offsets{identity_offset};
    for (auto& t : raw_terms) {
      if (t.op.n_qubits() != n_) {
        throw InputError("term '" + t.op.word() + "' has " + std::to_string(t.op.n_qubits()) +
                         " qubits, expected " + std::to_string(n_));
      }
      if (!is_hermitian_selfinverse(t.op)) {
        throw InputError("term '" + t.op.str() + "' has an imaginary phase");
      }
      const double c = t.op.phase_exp() == 2 ? -t.coeff : t.coeff;
      if (t.op.is_identity_operator()) {
        offsets.push_back(c);
      } else {
        buckets[t.op.unsigned_copy()].push_back(c);
      }
    }
    offset_ = ordered_sum(offsets);
    terms_.reserve(buckets.size());
    for (auto& [op, parts] : buckets) {
      const double c = ordered_sum(parts);
      if (std::abs(c) >= kDropTolerance) terms_.push_back({c, op});
    }
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
      const double ma = std::abs(a.coeff);
      const double mb = std::abs(b.coeff);
      if (ma != mb) return ma > mb;
      return PauliString::symplectic_less(a.op, b.op);
    });
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i].op, i);
  }

  [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
  [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
  [[nodiscard]] const Term& term(std::size_t i) const { return terms_.at(i); }
  [[nodiscard]] double identity_offset() const noexcept { return offset_; }

  /// Index of the term with the same tensor factors as `op`, if present.
  [[nodiscard]] std::optional<std::size_t> find(const PauliString& op) const {
    auto it = index_.find(op.unsigned_copy());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const PauliHamiltonian& a, const PauliHamiltonian& b) {
    return a.n_ == b.n_ && a.offset_ == b.offset_ && a.terms_ == b.terms_;
  }

 private:
  // Sum in a fixed order so that merging does not depend on input order.
  static double ordered_sum(std::vector<double>& parts) {
    std::sort(parts.begin(), parts.end());
    double s = 0.0;
    for (double v : parts) s += v;
    return s;
  }

  std::size_t n_ = 0;
  std::vector<Term> terms_;
  double offset_ = 0.0;
  std::unordered_map<PauliString, std::size_t> index_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view token, std::size_t line_no) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line_no) + ": malformed number '" + std::string(token) + "'");
  }
  return v;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/**
 * Reads lines of the form "coefficient pauli_word". Blank lines and '#'
 * comments are skipped. Words may carry a "+" or "-" prefix; "+i"/"-i"
 * prefixes are rejected because coefficients are real.
 */
inline PauliHamiltonian parse_hamiltonian(std::istream& in) {
  std::vector<Term> terms;
  std::optional<std::size_t> n;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto sep = view.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      throw InputError("line " + std::to_string(line_no) + ": expected 'coefficient pauli_word'");
    }
    const double c = detail::parse_double(view.substr(0, sep), line_no);
    const auto word = detail::trim(view.substr(sep));
    if (word.find_first_of(" \t") != std::string_view::npos) {
      throw InputError("line " + std::to_string(line_no) + ": trailing tokens after Pauli word");
    }
    PauliString op;
    try {
      op = PauliString::from_text(word);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!is_hermitian_selfinverse(op)) {
      throw InputError("line " + std::to_string(line_no) + ": imaginary phase prefix in '" +
                       std::string(word) + "'");
    }
    if (n && *n != op.n_qubits()) {
      throw InputError("line " + std::to_string(line_no) + ": word length " +
                       std::to_string(op.n_qubits()) + " differs from " + std::to_string(*n));
    }
    n = op.n_qubits();
    terms.push_back({c, std::move(op)});
  }
  return PauliHamiltonian(n.value_or(0), std::move(terms));
}

inline PauliHamiltonian parse_hamiltonian(const std::string& text) {
  std::istringstream in(text);
  return parse_hamiltonian(in);
}

/// One line per term, 17 significant digits; the identity offset is written
/// as an all-I line when nonzero.
inline std::string serialize(const PauliHamiltonian& h) {
  std::string out;
  if (h.identity_offset() != 0.0) {
    out += detail::format_double(h.identity_offset()) + " " + std::string(h.n_qubits(), 'I') + "\n";
  }
  for (const auto& t : h.terms()) {
    out += detail::format_double(t.coeff) + " " + t.op.word() + "\n";
  }
  return out;
}

/// Sum of |coeff| over non-identity terms.
inline double l1_norm(const PauliHamiltonian& h) {
  double s = 0.0;
  for (const auto& t : h.terms()) s += std::abs(t.coeff);
  return s;
}

}  // namespace upart
