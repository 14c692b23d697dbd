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
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "upart/error.hpp"
#include "upart/hamiltonian.hpp"
#include "upart/partition.hpp"
#include "upart/pauli.hpp"
#include "upart/rotation.hpp"

namespace upart {

struct NoncontextualCheck {
  bool noncontextual = true;
  /// (a, b, c) with a~b and b~c commuting but a, c anticommuting.
  std::optional<std::array<std::size_t, 3>> violation;
};

/**
 * Z = terms commuting with every other term; T = the rest. The Hamiltonian is
 * noncontextual iff commutation is transitive on T.
 */
inline NoncontextualCheck check_noncontextual(const PauliHamiltonian& h) {
  const auto g = compatibility_graph(h);
  const std::size_t m = h.size();
  using Word = CompatibilityGraph::Word;
  std::vector<Word> t_mask(g.words(), 0);
  for (std::size_t j = 0; j < m; ++j)
    if (g.degree(j) + 1 < m) t_mask[j / 64] |= Word{1} << (j % 64);
  auto in_t = [&](std::size_t j) { return (t_mask[j / 64] >> (j % 64)) & 1u; };
  for (std::size_t a = 0; a < m; ++a) {
    if (!in_t(a)) continue;
    for (std::size_t c = a + 1; c < m; ++c) {
      if (!in_t(c) || g.has_edge(a, c)) continue;
      const auto ra = g.row(a);
      const auto rc = g.row(c);
      for (std::size_t w = 0; w < g.words(); ++w) {
        const Word both = ra[w] & rc[w] & t_mask[w];
        if (both) {
          const std::size_t b = w * 64 + static_cast<std::size_t>(std::countr_zero(both));
          return {false, std::array<std::size_t, 3>{a, b, c}};
        }
      }
    }
  }
  return {};
}

inline bool is_noncontextual(const PauliHamiltonian& h) { return check_noncontextual(h).noncontextual; }

struct NoncontextualStructure {
  std::vector<std::size_t> z_terms;
  /// Commutation classes of T; cliques[0] is a largest one.
  std::vector<std::vector<std::size_t>> cliques;
  /// One element per clique where available; hitting_sets[j] contains cliques[0][j].
  std::vector<std::vector<std::size_t>> hitting_sets;
};

namespace detail {
inline std::string describe_violation(const PauliHamiltonian& h, const std::array<std::size_t, 3>& t) {
  return "contextual: terms " + h.term(t[0]).op.word() + " ~ " + h.term(t[1]).op.word() + " ~ " +
         h.term(t[2]).op.word() + " break transitivity (first and last anticommute)";
}
}  // namespace detail

inline NoncontextualStructure decompose(const PauliHamiltonian& h) {
  const auto check = check_noncontextual(h);
  if (!check.noncontextual) throw ValidationError(detail::describe_violation(h, *check.violation));
  const auto g = compatibility_graph(h);
  const std::size_t m = h.size();
  NoncontextualStructure out;
  std::vector<int> clique_of(m, -1);
  for (std::size_t j = 0; j < m; ++j) {
    if (g.degree(j) + 1 == m) {
      out.z_terms.push_back(j);
      continue;
    }
    if (clique_of[j] >= 0) continue;
    clique_of[j] = static_cast<int>(out.cliques.size());
    std::vector<std::size_t> clique{j};
    for (std::size_t k = j + 1; k < m; ++k)
      if (g.has_edge(j, k) && g.degree(k) + 1 < m) {
        clique_of[k] = clique_of[j];
        clique.push_back(k);
      }
    out.cliques.push_back(std::move(clique));
  }
  if (out.cliques.empty()) return out;
  std::size_t largest = 0;
  for (std::size_t c = 1; c < out.cliques.size(); ++c)
    if (out.cliques[c].size() > out.cliques[largest].size()) largest = c;
  std::rotate(out.cliques.begin(), out.cliques.begin() + static_cast<std::ptrdiff_t>(largest),
              out.cliques.begin() + static_cast<std::ptrdiff_t>(largest) + 1);
  const std::size_t rows = out.cliques.front().size();
  out.hitting_sets.resize(rows);
  for (std::size_t j = 0; j < rows; ++j)
    for (const auto& clique : out.cliques)
      if (j < clique.size()) out.hitting_sets[j].push_back(clique[j]);
  return out;
}

struct NoncontextualReduction {
  /// Terms Z and C_1, pairwise commuting; the identity offset is carried over.
  PauliHamiltonian hamiltonian;
  /// plans[j] maps the normalized sum over hitting_sets[j] onto cliques[0][j].
  std::vector<RotationPlan> plans;
  std::vector<double> gammas;
  NoncontextualStructure structure;
};

inline NoncontextualReduction reduce_to_commuting(const PauliHamiltonian& h) {
  NoncontextualReduction out;
  out.structure = decompose(h);
  std::vector<Term> terms;
  for (auto j : out.structure.z_terms) terms.push_back(h.term(j));
  for (std::size_t j = 0; j < out.structure.hitting_sets.size(); ++j) {
    const auto& d = out.structure.hitting_sets[j];
    const std::size_t target = out.structure.cliques.front()[j];
    const auto part = make_partition(h, {d});
    std::vector<PauliString> ops;
    std::size_t sink = 0;
    for (std::size_t k = 0; k < part.sets[0].size(); ++k) {
      ops.push_back(h.term(part.sets[0][k]).op);
      if (part.sets[0][k] == target) sink = k;
    }
    RotationPlan plan = build_sequence_plan(ops, part.betas[0], sink);
    plan.set_index = j;
    out.gammas.push_back(part.gammas[0]);
    terms.push_back({part.gammas[0], plan.sink});
    out.plans.push_back(std::move(plan));
  }
  out.hamiltonian = PauliHamiltonian(h.n_qubits(), std::move(terms), h.identity_offset());
  return out;
}

/**
 * Random noncontextual Hamiltonian built clique-first: region R1 (the first
 * r1 qubits) carries a random pairwise anticommuting family A_i, region R2 the
 * remaining qubits carries random Z-strings g. Clique i holds A_i (x) g for a
 * few g; the universally commuting terms are I (x) g.
 */
inline PauliHamiltonian random_noncontextual(std::size_t n_qubits, std::size_t r1, std::uint64_t seed) {
  if (r1 == 0 || r1 >= n_qubits) throw InputError("need 0 < r1 < n_qubits");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(0.1, 1.0);
  std::bernoulli_distribution coin(0.5);
  // Majorana-like family on R1, then random qubit order and per-qubit letter relabeling.
  std::vector<PauliString> family;
  for (std::size_t mode = 0; mode < 2 * r1; ++mode) {
    PauliString s(n_qubits);
    for (std::size_t k = 0; k < mode / 2; ++k) s.set(k, 'Z');
    s.set(mode / 2, mode % 2 == 0 ? 'X' : 'Y');
    family.push_back(s);
  }
  std::vector<std::size_t> perm(r1);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::array<char, 3>> relabel(r1, {'X', 'Y', 'Z'});
  for (auto& r : relabel) std::shuffle(r.begin(), r.end(), rng);
  auto remap = [&](const PauliString& s) {
    PauliString out(n_qubits);
    for (std::size_t q = 0; q < r1; ++q) {
      const char c = s.letter(q);
      if (c != 'I') out.set(perm[q], relabel[perm[q]][c == 'X' ? 0 : c == 'Y' ? 1 : 2]);
    }
    return out;
  };
  std::shuffle(family.begin(), family.end(), rng);
  std::uniform_int_distribution<std::size_t> n_cliques(1, family.size());
  family.resize(n_cliques(rng));
  auto random_z = [&]() {
    PauliString g(n_qubits);
    for (std::size_t q = r1; q < n_qubits; ++q)
      if (coin(rng)) g.set(q, 'Z');
    return g;
  };
  std::uniform_int_distribution<std::size_t> clique_size(1, 4);
  std::vector<Term> terms;
  for (const auto& a : family) {
    const PauliString base = remap(a);
    const std::size_t size = clique_size(rng);
    for (std::size_t k = 0; k < size; ++k) {
      const double c = coin(rng) ? coeff(rng) : -coeff(rng);
      terms.push_back({c, base * random_z()});
    }
  }
  std::uniform_int_distribution<std::size_t> n_z(0, 3);
  for (std::size_t k = n_z(rng); k > 0; --k) {
    PauliString g = random_z();
    if (!g.is_identity_operator()) terms.push_back({coeff(rng), g});
  }
  return PauliHamiltonian(n_qubits, std::move(terms));
}

}  // namespace upart
