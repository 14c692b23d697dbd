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
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "upart/error.hpp"
#include "upart/hamiltonian.hpp"
#include "upart/partition.hpp"
#include "upart/pauli.hpp"

namespace upart {

/**
 * One- and two-body integrals of
 *   H = sum h_pq a+_p a_q + 1/2 sum h_pqrs a+_p a+_q a_r a_s
 * over N spin orbitals. Every write fills the whole symmetry orbit
 * (h_pq = h_qp; h_pqrs = h_sqrp = h_prqs = h_qpsr and compositions).
 */
class IntegralTable {
 public:
  /// Largest orbital count accepted (dense two-body storage).
  static constexpr std::size_t kMaxOrbitals = 64;
  static constexpr double kConflictTolerance = 1e-10;

  IntegralTable() = default;

  explicit IntegralTable(std::size_t n_orbitals) : n_(n_orbitals) {
    if (n_orbitals == 0 || n_orbitals > kMaxOrbitals) {
      throw InputError("orbital count must be in [1, " + std::to_string(kMaxOrbitals) + "]");
    }
    h1_.assign(n_ * n_, 0.0);
    h2_.assign(n_ * n_ * n_ * n_, 0.0);
    set1_.assign(h1_.size(), 0);
    set2_.assign(h2_.size(), 0);
  }

  [[nodiscard]] std::size_t n_orbitals() const noexcept { return n_; }

  [[nodiscard]] double one_body(std::size_t p, std::size_t q) const { return h1_[idx(p, q)]; }
  [[nodiscard]] double two_body(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return h2_[idx(p, q, r, s)];
  }

  void set_one_body(std::size_t p, std::size_t q, double v) {
    check(p);
    check(q);
    write(h1_, set1_, idx(p, q), v, "one-body");
    write(h1_, set1_, idx(q, p), v, "one-body");
  }

  void set_two_body(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v) {
    for (auto i : {p, q, r, s}) check(i);
    for (const auto& [a, b, c, d] : orbit({p, q, r, s})) write(h2_, set2_, idx(a, b, c, d), v, "two-body");
  }

  /// The (at most eight) index tuples related to pqrs by the integral symmetries.
  static std::vector<std::array<std::size_t, 4>> orbit(std::array<std::size_t, 4> t) {
    std::vector<std::array<std::size_t, 4>> out{t};
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto [p, q, r, s] = out[i];
      for (const std::array<std::size_t, 4>& next :
           {std::array<std::size_t, 4>{s, q, r, p}, std::array<std::size_t, 4>{p, r, q, s},
            std::array<std::size_t, 4>{q, p, s, r}}) {
        if (std::find(out.begin(), out.end(), next) == out.end()) out.push_back(next);
      }
    }
    return out;
  }

 private:
  void check(std::size_t i) const {
    if (i >= n_) throw InputError("orbital index " + std::to_string(i) + " out of range for N=" + std::to_string(n_));
  }
  [[nodiscard]] std::size_t idx(std::size_t p, std::size_t q) const { return p * n_ + q; }
  [[nodiscard]] std::size_t idx(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return ((p * n_ + q) * n_ + r) * n_ + s;
  }
  static void write(std::vector<double>& data, std::vector<char>& flags, std::size_t i, double v, const char* what) {
    if (flags[i] && std::abs(data[i] - v) > kConflictTolerance) {
      throw InputError(std::string(what) + " integral conflicts with a symmetric image (" +
                       detail::format_double(data[i]) + " vs " + detail::format_double(v) + ")");
    }
    data[i] = v;
    flags[i] = 1;
  }

  std::size_t n_ = 0;
  std::vector<double> h1_;
  std::vector<double> h2_;
  std::vector<char> set1_;
  std::vector<char> set2_;
};

/**
 * Lines "norb N", "1 p q value" and "2 p q r s value"; '#' starts a comment.
 * The "norb" line must precede every integral line.
 */
inline IntegralTable parse_integrals(std::istream& in) {
  std::optional<IntegralTable> table;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> InputError {
    return InputError("line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    auto index = [&](const std::string& tok) -> std::size_t {
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw fail("malformed index '" + tok + "'");
      return v;
    };
    if (kind == "norb") {
      if (table) throw fail("duplicate norb line");
      if (tokens.size() != 1) throw fail("expected 'norb N'");
      table.emplace(index(tokens[0]));
      continue;
    }
    if (!table) throw fail("integral before 'norb' line");
    try {
      if (kind == "1") {
        if (tokens.size() != 3) throw fail("expected '1 p q value'");
        table->set_one_body(index(tokens[0]), index(tokens[1]), detail::parse_double(tokens[2], line_no));
      } else if (kind == "2") {
        if (tokens.size() != 5) throw fail("expected '2 p q r s value'");
        table->set_two_body(index(tokens[0]), index(tokens[1]), index(tokens[2]), index(tokens[3]),
                            detail::parse_double(tokens[4], line_no));
      } else {
        throw fail("unknown record '" + kind + "'");
      }
    } catch (const InputError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw fail(msg);
    }
  }
  if (!table) throw InputError("missing 'norb' line");
  return std::move(*table);
}

inline IntegralTable parse_integrals(const std::string& text) {
  std::istringstream in(text);
  return parse_integrals(in);
}

using MajoranaIndexSet = std::vector<std::uint32_t>;

/**
 * offset * I + sum_A c_A m_A over 2N Majorana modes, with A strictly sorted.
 * For |A| = 2 the monomial is i g_a g_b; for |A| = 4 it is g_a g_b g_c g_d.
 * Both are Hermitian, so every coefficient is real.
 */
struct MajoranaPolynomial {
  std::size_t n_modes = 0;
  std::map<MajoranaIndexSet, double> monomials;
  double identity_offset = 0.0;

  /// Adds c * (i^(|A|=2) g_{a1} g_{a2} ...) for an arbitrary ordering of distinct indices.
  void add(std::vector<std::uint32_t> indices, double c) {
    for (auto i : indices)
      if (i >= n_modes) throw InputError("Majorana index " + std::to_string(i) + " out of range");
    // Bubble sort keeps track of the permutation parity.
    bool odd = false;
    for (std::size_t a = 0; a < indices.size(); ++a)
      for (std::size_t b = 0; b + 1 < indices.size() - a; ++b)
        if (indices[b] > indices[b + 1]) {
          std::swap(indices[b], indices[b + 1]);
          odd = !odd;
        }
    for (std::size_t a = 1; a < indices.size(); ++a)
      if (indices[a] == indices[a - 1]) throw InputError("repeated Majorana index");
    monomials[indices] += odd ? -c : c;
  }

  /// Drops monomials with |c| below tol.
  void prune(double tol = kDropTolerance) {
    std::erase_if(monomials, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
  }
};

/// True when every monomial is i g_even g_odd or g_e g_e' g_o g_o'.
inline bool is_electronic_form(const MajoranaPolynomial& mp) {
  for (const auto& [a, c] : mp.monomials) {
    std::size_t even = 0;
    for (auto i : a) even += (i % 2 == 0);
    const bool quad_ok = a.size() == 2 && even == 1;
    const bool quart_ok = a.size() == 4 && even == 2;
    if (!quad_ok && !quart_ok) return false;
  }
  return true;
}

/// Majorana form of the electronic Hamiltonian given by t.
inline MajoranaPolynomial to_majorana(const IntegralTable& t) {
  const std::size_t n = t.n_orbitals();
  MajoranaPolynomial mp;
  mp.n_modes = 2 * n;
  double offset = 0.0;
  for (std::size_t p = 0; p < n; ++p) offset += 0.5 * t.one_body(p, p);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (p != q) offset += 0.125 * (t.two_body(p, q, q, p) - t.two_body(p, q, p, q));
  mp.identity_offset = offset;
  const auto u = [](std::size_t v) { return static_cast<std::uint32_t>(v); };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double c = 0.5 * t.one_body(p, q);
      for (std::size_t r = 0; r < n; ++r)
        if (r != p && r != q) c += 0.25 * (t.two_body(p, r, r, q) - t.two_body(p, q, r, r));
      if (c != 0.0) mp.add({u(2 * p), u(2 * q + 1)}, c);
    }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          if (r == s) continue;
          const double h = t.two_body(p, q, r, s);
          if (h == 0.0) continue;
          mp.add({u(2 * p), u(2 * q), u(2 * r + 1), u(2 * s + 1)}, -0.125 * h);
        }
    }
  mp.prune();
  return mp;
}

/// Jordan-Wigner image of a single mode: g_2p = X_p Z_{p-1}..Z_0, g_2p+1 = Y_p Z_{p-1}..Z_0.
inline PauliString jordan_wigner_mode(std::size_t mode, std::size_t n_qubits) {
  const std::size_t p = mode / 2;
  if (p >= n_qubits) throw InputError("mode out of range");
  PauliString out(n_qubits);
  for (std::size_t k = 0; k < p; ++k) out.set(k, 'Z');
  out.set(p, mode % 2 == 0 ? 'X' : 'Y');
  return out;
}

/// Signed Pauli image of one monomial including the factor i on quadratics.
inline PauliString jordan_wigner_monomial(const MajoranaIndexSet& a, std::size_t n_qubits) {
  PauliString acc(n_qubits);
  for (auto i : a) acc = acc * jordan_wigner_mode(i, n_qubits);
  if (a.size() % 4 == 2) acc.set_phase_exp(acc.phase_exp() + 1);
  if (!is_hermitian_selfinverse(acc)) {
    throw ValidationError("Jordan-Wigner image of a monomial has an imaginary phase");
  }
  return acc;
}

inline PauliHamiltonian jordan_wigner(const MajoranaPolynomial& mp) {
  if (mp.n_modes % 2 != 0) throw InputError("Majorana mode count must be even");
  for (const auto& [a, c] : mp.monomials)
    if (a.size() % 2 != 0) throw InputError("odd-parity Majorana monomial");
  const std::size_t n = mp.n_modes / 2;
  std::vector<Term> terms;
  terms.reserve(mp.monomials.size());
  for (const auto& [a, c] : mp.monomials) terms.push_back({c, jordan_wigner_monomial(a, n)});
  return PauliHamiltonian(n, std::move(terms), mp.identity_offset);
}

struct MajoranaPartition {
  PauliHamiltonian hamiltonian;
  AnticommutingPartition partition;
};

/**
 * Quartic monomials g_2p g_2q g_2r+1 g_2s+1 (p<q, r<s) go to S(q,r,s), with
 * S(1,r,s) and S(2,r,s) merged. Quadratics T_p = {i g_2p g_2q+1} join the
 * first non-empty S(p,r,s) with p >= 3; the members with q in {r,s} join the
 * next such set with disjoint (r',s') or form their own set.
 */
inline MajoranaPartition majorana_partition(const MajoranaPolynomial& mp) {
  if (!is_electronic_form(mp)) throw InputError("polynomial is not of electronic-structure form");
  using Key = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;
  std::map<Key, std::vector<MajoranaIndexSet>> quartic;
  std::map<std::uint32_t, std::map<std::uint32_t, MajoranaIndexSet>> quadratic;  // p -> q -> monomial
  for (const auto& [a, c] : mp.monomials) {
    std::vector<std::uint32_t> evens, odds;
    for (auto i : a) (i % 2 == 0 ? evens : odds).push_back(i / 2);
    if (a.size() == 2) {
      quadratic[evens[0]][odds[0]] = a;
      continue;
    }
    std::uint32_t q = evens[1];
    if (q == 1) q = 2;
    quartic[{q, odds[0], odds[1]}].push_back(a);
  }

  std::vector<std::vector<MajoranaIndexSet>> groups;
  std::map<Key, std::size_t> group_of;
  for (auto& [key, members] : quartic) {
    group_of[key] = groups.size();
    groups.push_back(members);
  }
  for (const auto& [p, members] : quadratic) {
    std::vector<Key> hosts;
    if (p >= 3)
      for (const auto& [key, ms] : quartic)
        if (std::get<0>(key) == p) hosts.push_back(key);
    if (hosts.empty()) {
      std::vector<MajoranaIndexSet> t;
      for (const auto& [q, m] : members) t.push_back(m);
      groups.push_back(std::move(t));
      continue;
    }
    const auto [hp, r, s] = hosts.front();
    std::vector<MajoranaIndexSet> excluded;
    auto& host = groups[group_of[hosts.front()]];
    for (const auto& [q, m] : members) (q == r || q == s ? excluded : host).push_back(m);
    if (excluded.empty()) continue;
    std::optional<Key> second;
    for (std::size_t k = 1; k < hosts.size() && !second; ++k) {
      const auto [_, r2, s2] = hosts[k];
      if (r2 != r && r2 != s && s2 != r && s2 != s) second = hosts[k];
    }
    if (second) {
      auto& g = groups[group_of[*second]];
      g.insert(g.end(), excluded.begin(), excluded.end());
    } else {
      groups.push_back(std::move(excluded));
    }
  }

  MajoranaPartition out{jordan_wigner(mp), {}};
  const std::size_t n = mp.n_modes / 2;
  std::vector<std::vector<std::size_t>> sets;
  for (const auto& g : groups) {
    std::vector<std::size_t> set;
    for (const auto& a : g)
      if (auto j = out.hamiltonian.find(jordan_wigner_monomial(a, n))) set.push_back(*j);
    if (!set.empty()) sets.push_back(std::move(set));
  }
  out.partition = make_partition(out.hamiltonian, std::move(sets));
  return out;
}

}  // namespace upart
