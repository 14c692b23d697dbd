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
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "upart/error.hpp"
#include "upart/hamiltonian.hpp"
#include "upart/partition.hpp"
#include "upart/pauli.hpp"

namespace upart {

/// Simple undirected graph.
struct GraphSpec {
  std::size_t n_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  /// Throws on self-loops, duplicates or out-of-range endpoints.
  void validate() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : edges) {
      if (a >= n_vertices || b >= n_vertices) throw InputError("edge endpoint out of range");
      if (a == b) throw InputError("self-loop at vertex " + std::to_string(a));
      if (!seen.insert(std::minmax(a, b)).second) {
        throw InputError("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
      }
    }
  }

  [[nodiscard]] std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n_vertices, 0);
    for (auto [a, b] : edges) ++d[a], ++d[b];
    return d;
  }

  /// Cycle 0-1-...-(L-1)-0.
  static GraphSpec ring(std::size_t length) {
    if (length < 3) throw InputError("a ring needs at least 3 vertices");
    GraphSpec g{length, {}};
    for (std::size_t j = 0; j < length; ++j) g.edges.emplace_back(j, (j + 1) % length);
    return g;
  }

  /// Open chain 0-1-...-(n-1).
  static GraphSpec path(std::size_t n) {
    GraphSpec g{n, {}};
    for (std::size_t j = 0; j + 1 < n; ++j) g.edges.emplace_back(j, j + 1);
    return g;
  }

  /// Deterministic q-regular circulant graph (offsets 1..q/2, plus n/2 for odd q).
  static GraphSpec circulant(std::size_t n, std::size_t q) {
    if (q >= n) throw InputError("degree must be below the vertex count");
    if (q % 2 == 1 && n % 2 == 1) throw InputError("odd-degree regular graphs need an even vertex count");
    GraphSpec g{n, {}};
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t d = 1; d <= q / 2; ++d) g.edges.emplace_back(j, (j + d) % n);
    if (q % 2 == 1)
      for (std::size_t j = 0; j < n / 2; ++j) g.edges.emplace_back(j, j + n / 2);
    g.validate();
    return g;
  }

  /// Uniform-ish random q-regular graph by the pairing model with rejection.
  static GraphSpec random_regular(std::size_t n, std::size_t q, std::uint64_t seed) {
    if (q >= n || (n * q) % 2 == 1) throw InputError("no q-regular graph on n vertices for these values");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> stubs;
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t k = 0; k < q; ++k) stubs.push_back(v);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      std::shuffle(stubs.begin(), stubs.end(), rng);
      GraphSpec g{n, {}};
      std::set<std::pair<std::size_t, std::size_t>> seen;
      bool ok = true;
      for (std::size_t k = 0; k < stubs.size() && ok; k += 2) {
        const auto e = std::minmax(stubs[k], stubs[k + 1]);
        ok = e.first != e.second && seen.insert(e).second;
        g.edges.push_back(e);
      }
      if (ok) return g;
    }
    throw InputError("failed to sample a simple regular graph");
  }
};

/// sum_{(a,b) in E} Z_a Z_b + x sum_v X_v.
inline PauliHamiltonian tim_hamiltonian(const GraphSpec& g, double x) {
  g.validate();
  std::vector<Term> terms;
  for (auto [a, b] : g.edges) {
    PauliString zz(g.n_vertices);
    zz.set(a, 'Z');
    zz.set(b, 'Z');
    terms.push_back({1.0, zz});
  }
  for (std::size_t v = 0; v < g.n_vertices; ++v) terms.push_back({x, PauliString::single(g.n_vertices, v, 'X')});
  return PauliHamiltonian(g.n_vertices, std::move(terms));
}

/**
 * Pairs every single-qubit X_v term with one Z_a Z_b term incident to v.
 * Greedy pass in vertex order (lowest unused incident edge), followed by an
 * augmenting-path repair for vertices left unmatched. All other terms are
 * singletons.
 */
inline AnticommutingPartition tim_pair_partition(const PauliHamiltonian& h) {
  const std::size_t n = h.n_qubits();
  std::vector<std::optional<std::size_t>> x_term(n);
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t j = 0; j < h.size(); ++j) {
    const auto& op = h.term(j).op;
    std::vector<std::size_t> support;
    bool only_x = true, only_z = true;
    for (std::size_t q = 0; q < n; ++q) {
      const char c = op.letter(q);
      if (c == 'I') continue;
      support.push_back(q);
      only_x &= c == 'X';
      only_z &= c == 'Z';
    }
    if (support.size() == 1 && only_x) x_term[support[0]] = j;
    if (support.size() == 2 && only_z) {
      incident[support[0]].push_back(j);
      incident[support[1]].push_back(j);
    }
  }
  std::vector<std::optional<std::size_t>> edge_owner(h.size());
  std::vector<std::optional<std::size_t>> vertex_edge(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!x_term[v]) continue;
    for (auto e : incident[v])
      if (!edge_owner[e]) {
        edge_owner[e] = v;
        vertex_edge[v] = e;
        break;
      }
  }
  // Kuhn-style augmenting paths from each unmatched vertex.
  std::vector<char> visited;
  auto augment = [&](auto&& self, std::size_t v) -> bool {
    for (auto e : incident[v]) {
      if (visited[e]) continue;
      visited[e] = 1;
      if (!edge_owner[e] || self(self, *edge_owner[e])) {
        edge_owner[e] = v;
        vertex_edge[v] = e;
        return true;
      }
    }
    return false;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (!x_term[v] || vertex_edge[v]) continue;
    visited.assign(h.size(), 0);
    augment(augment, v);
  }
  std::vector<char> used(h.size(), 0);
  std::vector<std::vector<std::size_t>> sets;
  for (std::size_t v = 0; v < n; ++v) {
    if (!x_term[v] || !vertex_edge[v]) continue;
    sets.push_back({*vertex_edge[v], *x_term[v]});
    used[*vertex_edge[v]] = used[*x_term[v]] = 1;
  }
  for (std::size_t j = 0; j < h.size(); ++j)
    if (!used[j]) sets.push_back({j});
  return make_partition(h, std::move(sets));
}

inline AnticommutingPartition tim_pair_partition(const GraphSpec& g, double x) {
  return tim_pair_partition(tim_hamiltonian(g, x));
}

/// One weight-k term on k distinct qubits with uniformly random X/Y/Z factors.
template <class Rng>
PauliString random_klocal_term(std::size_t n, std::size_t k, Rng& rng) {
  if (k == 0 || k > n) throw InputError("locality k must be in [1, n]");
  std::vector<std::size_t> qubits(n);
  std::iota(qubits.begin(), qubits.end(), std::size_t{0});
  PauliString out(n);
  std::uniform_int_distribution<int> letter(0, 2);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(qubits[i], qubits[pick(rng)]);
    out.set(qubits[i], "XYZ"[letter(rng)]);
  }
  return out;
}

/// m independent random k-local terms with coefficients uniform in [-1, 1].
inline PauliHamiltonian random_klocal(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > n) throw InputError("locality k must be in [1, n]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<Term> terms;
  terms.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    PauliString p = random_klocal_term(n, k, rng);
    terms.push_back({coeff(rng), std::move(p)});
  }
  return PauliHamiltonian(n, std::move(terms));
}

namespace detail {
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}
}  // namespace detail

/// Probability that two independent k-tuples of n qubits share exactly I qubits.
inline double overlap_probability(std::size_t n, std::size_t k, std::size_t overlap) {
  if (k == 0 || k > n) throw InputError("need 1 <= k <= n");
  if (overlap > k || k - overlap > n - k) return 0.0;
  return detail::binomial(k, overlap) * detail::binomial(n - k, k - overlap) / detail::binomial(n, k);
}

/// Commutation probability of two random Pauli strings that overlap on I qubits: (1 + (-1/3)^I) / 2.
inline double overlap_commute_probability(std::size_t overlap) {
  return 0.5 * (1.0 + std::pow(-1.0 / 3.0, static_cast<double>(overlap)));
}

/// Exact probability that two independent random k-local terms commute.
inline double commute_probability(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw InputError("need 1 <= k <= n");
  double p = 0.0;
  for (std::size_t i = 0; i <= k; ++i) p += overlap_probability(n, k, i) * overlap_commute_probability(i);
  return p;
}

/// (8 / 3n) (n - 2) / (n - 1): anticommutation through a single shared qubit, k = 2.
inline double anticommute_probability_2local(std::size_t n) {
  if (n < 2) throw InputError("need n >= 2");
  const double nn = static_cast<double>(n);
  return 8.0 / (3.0 * nn) * (nn - 2.0) / (nn - 1.0);
}

/// Closed form of 1 - commute_probability(n, 3): (6n^2 - 34n + 460/9) / (n(n-1)(n-2)).
inline double anticommute_probability_3local(std::size_t n) {
  if (n < 3) throw InputError("need n >= 3");
  const double nn = static_cast<double>(n);
  return (6.0 * nn * nn - 34.0 * nn + 460.0 / 9.0) / (nn * (nn - 1.0) * (nn - 2.0));
}

/**
 * A_p = {Z_p} + {X..X ending at p} + {Y..Y starting at p} over two spin
 * sectors of n_modes orbitals, keeping only terms present in h. The first
 * 2 n_modes sets are the A_p (possibly empty ones are dropped); the remaining
 * terms are greedily colored.
 */
inline AnticommutingPartition dual_basis_partition(const PauliHamiltonian& h, std::size_t n_modes) {
  const std::size_t n = 2 * n_modes;
  if (n_modes == 0 || h.n_qubits() != n) throw InputError("dual basis partition needs 2 * modes qubits");
  auto hop = [&](std::size_t l, std::size_t r, char c) {
    PauliString s(n);
    s.set(l, c);
    for (std::size_t k = l + 1; k < r; ++k) s.set(k, 'Z');
    s.set(r, c);
    return s;
  };
  std::vector<char> used(h.size(), 0);
  std::vector<std::vector<std::size_t>> sets;
  auto take = [&](const PauliString& s, std::vector<std::size_t>& set) {
    if (auto j = h.find(s); j && !used[*j]) {
      used[*j] = 1;
      set.push_back(*j);
    }
  };
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t base = (p / n_modes) * n_modes;
    std::vector<std::size_t> set;
    take(PauliString::single(n, p, 'Z'), set);
    for (std::size_t l = base; l < p; ++l) take(hop(l, p, 'X'), set);
    for (std::size_t r = p + 1; r < base + n_modes; ++r) take(hop(p, r, 'Y'), set);
    if (!set.empty()) sets.push_back(std::move(set));
  }
  std::vector<Term> rest_terms;
  for (std::size_t j = 0; j < h.size(); ++j)
    if (!used[j]) rest_terms.push_back(h.term(j));
  const PauliHamiltonian rest(n, rest_terms);
  for (const auto& set : greedy_color(rest).sets) {
    std::vector<std::size_t> mapped;
    for (auto j : set) mapped.push_back(*h.find(rest.term(j).op));
    sets.push_back(std::move(mapped));
  }
  return make_partition(h, std::move(sets));
}

struct DualBasisStructure {
  PauliHamiltonian hamiltonian;
  AnticommutingPartition partition;
  /// Positions in partition.sets of the A_p sets, ordered by p.
  std::vector<std::size_t> a_sets;
};

/**
 * Structural terms of the Jordan-Wigner plane-wave dual Hamiltonian on two
 * spin sectors of N orbitals each (qubits sN .. sN+N-1 for sector s): every
 * Z_p, every Z_p Z_q, and within each sector X_l Z..Z X_r and Y_l Z..Z Y_r.
 * A_p = {Z_p} + {X..X ending at p} + {Y..Y starting at p}; the remaining
 * terms are greedily colored.
 */
inline DualBasisStructure dual_basis_structure(std::size_t n_modes, std::uint64_t seed) {
  if (n_modes < 3) throw InputError("dual basis structure needs N >= 3");
  const std::size_t n = 2 * n_modes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(0.1, 1.0);
  std::vector<Term> terms;
  for (std::size_t p = 0; p < n; ++p) terms.push_back({coeff(rng), PauliString::single(n, p, 'Z')});
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      PauliString zz(n);
      zz.set(p, 'Z');
      zz.set(q, 'Z');
      terms.push_back({coeff(rng), zz});
    }
  auto hop = [&](std::size_t l, std::size_t r, char c) {
    PauliString s(n);
    s.set(l, c);
    for (std::size_t k = l + 1; k < r; ++k) s.set(k, 'Z');
    s.set(r, c);
    return s;
  };
  for (std::size_t sector = 0; sector < 2; ++sector)
    for (std::size_t l = 0; l < n_modes; ++l)
      for (std::size_t r = l + 1; r < n_modes; ++r) {
        const std::size_t a = sector * n_modes + l, b = sector * n_modes + r;
        terms.push_back({coeff(rng), hop(a, b, 'X')});
        terms.push_back({coeff(rng), hop(a, b, 'Y')});
      }
  DualBasisStructure out;
  out.hamiltonian = PauliHamiltonian(n, std::move(terms));
  out.partition = dual_basis_partition(out.hamiltonian, n_modes);
  out.a_sets.resize(n);
  std::iota(out.a_sets.begin(), out.a_sets.end(), std::size_t{0});
  return out;
}

}  // namespace upart
