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
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "upart/error.hpp"
#include "upart/hamiltonian.hpp"
#include "upart/pauli.hpp"

namespace upart {

/**
 * Disjoint cover of a Hamiltonian's term indices by completely
 * anticommuting sets, with H = sum_l gamma_l sum_j beta_lj P_j.
 *
 * Indices within a set are kept ascending (canonical term order).
 */
struct AnticommutingPartition {
  std::vector<std::vector<std::size_t>> sets;
  std::vector<double> gammas;
  std::vector<std::vector<double>> betas;

  [[nodiscard]] std::size_t size() const noexcept { return sets.size(); }

  [[nodiscard]] std::size_t max_set_size() const noexcept {
    std::size_t s = 0;
    for (const auto& set : sets) s = std::max(s, set.size());
    return s;
  }

  friend bool operator==(const AnticommutingPartition&, const AnticommutingPartition&) = default;
};

/// Builds gamma/beta for the given index sets. Empty sets are dropped.
inline AnticommutingPartition make_partition(const PauliHamiltonian& h,
                                             std::vector<std::vector<std::size_t>> sets) {
  AnticommutingPartition out;
  for (auto& set : sets) {
    if (set.empty()) continue;
    std::sort(set.begin(), set.end());
    double scale = 0.0;
    for (auto j : set) {
      if (j >= h.size()) throw InputError("term index " + std::to_string(j) + " out of range");
      scale = std::max(scale, std::abs(h.term(j).coeff));
    }
    double sumsq = 0.0;
    for (auto j : set) {
      const double r = h.term(j).coeff / scale;
      sumsq += r * r;
    }
    const double gamma = scale * std::sqrt(sumsq);
    std::vector<double> betas;
    betas.reserve(set.size());
    for (auto j : set) betas.push_back(h.term(j).coeff / gamma);
    out.gammas.push_back(gamma);
    out.betas.push_back(std::move(betas));
    out.sets.push_back(std::move(set));
  }
  return out;
}

/// Every term in its own set.
inline AnticommutingPartition singleton_partition(const PauliHamiltonian& h) {
  std::vector<std::vector<std::size_t>> sets(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) sets[j] = {j};
  return make_partition(h, std::move(sets));
}

/// Undirected graph with an edge between every commuting pair. Bitset rows.
class CompatibilityGraph {
 public:
  using Word = std::uint64_t;

  CompatibilityGraph() = default;
  explicit CompatibilityGraph(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t words() const noexcept { return words_; }

  void add_edge(std::size_t a, std::size_t b) {
    if (a == b) return;
    bits_[a * words_ + b / 64] |= Word{1} << (b % 64);
    bits_[b * words_ + a / 64] |= Word{1} << (a % 64);
  }

  [[nodiscard]] bool has_edge(std::size_t a, std::size_t b) const noexcept {
    return (bits_[a * words_ + b / 64] >> (b % 64)) & 1u;
  }

  [[nodiscard]] std::span<const Word> row(std::size_t v) const noexcept {
    return {bits_.data() + v * words_, words_};
  }

  [[nodiscard]] std::size_t degree(std::size_t v) const noexcept {
    std::size_t d = 0;
    for (auto w : row(v)) d += std::popcount(w);
    return d;
  }

  [[nodiscard]] std::size_t edge_count() const noexcept {
    std::size_t d = 0;
    for (std::size_t v = 0; v < n_; ++v) d += degree(v);
    return d / 2;
  }

  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        if (has_edge(a, b)) out.emplace_back(a, b);
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
};

inline CompatibilityGraph compatibility_graph(std::span<const PauliString> ops) {
  CompatibilityGraph g(ops.size());
  for (std::size_t a = 0; a < ops.size(); ++a)
    for (std::size_t b = a + 1; b < ops.size(); ++b)
      if (commutes(ops[a], ops[b])) g.add_edge(a, b);
  return g;
}

inline CompatibilityGraph compatibility_graph(const PauliHamiltonian& h) {
  std::vector<PauliString> ops;
  ops.reserve(h.size());
  for (const auto& t : h.terms()) ops.push_back(t.op);
  return compatibility_graph(ops);
}

struct ColoringOptions {
  /// Randomizes tie-breaking; without a seed ties go to the lowest index.
  std::optional<std::uint64_t> seed;
  /// Independent restarts; the run with the fewest sets wins (first on ties).
  std::size_t restarts = 1;
  /// Optional cap on the size of each set.
  std::optional<std::size_t> max_set_size;
  /// Iterated-greedy passes over the best run: the sets are reordered and
  /// re-packed first-fit, which never increases the set count.
  std::size_t refine_passes = 0;
};

namespace detail {

// Repeatedly peel a maximal independent set off the remaining graph, each
// time taking the vertex of minimum degree inside the candidate pool.
inline std::vector<std::vector<std::size_t>> greedy_independent_sets(
    const CompatibilityGraph& g, std::span<const std::size_t> priority,
    std::optional<std::size_t> cap) {
  using Word = CompatibilityGraph::Word;
  const std::size_t n = g.size();
  const std::size_t nw = g.words();
  std::vector<Word> remaining(nw, 0);
  for (std::size_t v = 0; v < n; ++v) remaining[v / 64] |= Word{1} << (v % 64);
  std::size_t left = n;
  std::vector<std::vector<std::size_t>> sets;
  std::vector<Word> cand(nw);
  while (left > 0) {
    cand = remaining;
    std::vector<std::size_t> set;
    while (!cap || set.size() < *cap) {
      std::size_t best = n;
      std::size_t best_deg = 0;
      for (std::size_t w = 0; w < nw; ++w) {
        for (Word bits = cand[w]; bits; bits &= bits - 1) {
          const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          const auto row = g.row(v);
          std::size_t deg = 0;
          for (std::size_t k = 0; k < nw; ++k) deg += std::popcount(row[k] & cand[k]);
          if (best == n || deg < best_deg || (deg == best_deg && priority[v] < priority[best])) {
            best = v;
            best_deg = deg;
          }
        }
      }
      if (best == n) break;
      set.push_back(best);
      const auto row = g.row(best);
      for (std::size_t k = 0; k < nw; ++k) cand[k] &= ~row[k];
      cand[best / 64] &= ~(Word{1} << (best % 64));
    }
    for (auto v : set) remaining[v / 64] &= ~(Word{1} << (v % 64));
    left -= set.size();
    sets.push_back(std::move(set));
  }
  return sets;
}

// First-fit over the vertices set by set. Each pass reorders the sets (largest
// first, reversed, shuffled in turn) before re-packing.
inline std::vector<std::vector<std::size_t>> iterated_greedy(const CompatibilityGraph& g,
                                                             std::vector<std::vector<std::size_t>> sets,
                                                             std::size_t passes, std::optional<std::size_t> cap,
                                                             std::mt19937_64& rng) {
  using Word = CompatibilityGraph::Word;
  const std::size_t nw = g.words();
  for (std::size_t pass = 0; pass < passes; ++pass) {
    switch (pass % 3) {
      case 0:
        std::stable_sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
        break;
      case 1:
        std::reverse(sets.begin(), sets.end());
        break;
      default:
        std::shuffle(sets.begin(), sets.end(), rng);
    }
    std::vector<std::vector<std::size_t>> packed;
    std::vector<std::vector<Word>> blocked;
    for (const auto& set : sets)
      for (auto v : set) {
        std::size_t target = packed.size();
        for (std::size_t c = 0; c < packed.size(); ++c) {
          if ((blocked[c][v / 64] >> (v % 64)) & 1u) continue;
          if (cap && packed[c].size() >= *cap) continue;
          target = c;
          break;
        }
        if (target == packed.size()) {
          packed.emplace_back();
          blocked.emplace_back(nw, 0);
        }
        packed[target].push_back(v);
        const auto row = g.row(v);
        for (std::size_t k = 0; k < nw; ++k) blocked[target][k] |= row[k];
      }
    sets = std::move(packed);
  }
  return sets;
}

}  // namespace detail

/**
 * Partitions the terms of h into completely anticommuting sets by greedy
 * independent-set coloring of the compatibility graph.
 */
inline AnticommutingPartition greedy_color(const PauliHamiltonian& h, const ColoringOptions& options = {}) {
  if (options.max_set_size && *options.max_set_size == 0) throw InputError("max_set_size must be positive");
  const auto g = compatibility_graph(h);
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> best;
  const std::size_t runs = std::max<std::size_t>(1, options.restarts);
  for (std::size_t r = 0; r < runs; ++r) {
    std::vector<std::size_t> priority(n);
    std::iota(priority.begin(), priority.end(), std::size_t{0});
    if (options.seed || r > 0) {
      std::mt19937_64 rng(options.seed.value_or(0) + r);
      std::shuffle(priority.begin(), priority.end(), rng);
    }
    auto sets = detail::greedy_independent_sets(g, priority, options.max_set_size);
    if (r == 0 || sets.size() < best.size()) best = std::move(sets);
  }
  if (options.refine_passes > 0) {
    std::mt19937_64 rng(options.seed.value_or(0));
    best = detail::iterated_greedy(g, std::move(best), options.refine_passes, options.max_set_size, rng);
  }
  return make_partition(h, std::move(best));
}

struct ValidationResult {
  bool ok = true;
  std::string message;

  explicit operator bool() const noexcept { return ok; }
};

/// Checks cover, disjointness, pairwise anticommutation and the gamma/beta
/// relations. The message names the first violation found.
inline ValidationResult validate(const AnticommutingPartition& p, const PauliHamiltonian& h) {
  auto fail = [](std::string msg) { return ValidationResult{false, std::move(msg)}; };
  if (p.gammas.size() != p.sets.size() || p.betas.size() != p.sets.size()) {
    return fail("gamma/beta arrays do not match the number of sets");
  }
  std::vector<int> owner(h.size(), -1);
  for (std::size_t l = 0; l < p.sets.size(); ++l) {
    const auto& set = p.sets[l];
    if (set.empty()) return fail("set " + std::to_string(l) + " is empty");
    for (auto j : set) {
      if (j >= h.size()) return fail("set " + std::to_string(l) + " has out-of-range index " + std::to_string(j));
      if (owner[j] >= 0) {
        return fail("term " + std::to_string(j) + " appears in sets " + std::to_string(owner[j]) + " and " +
                    std::to_string(l));
      }
      owner[j] = static_cast<int>(l);
    }
  }
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (owner[j] < 0) return fail("term " + std::to_string(j) + " (" + h.term(j).op.word() + ") is not covered");
  }
  for (std::size_t l = 0; l < p.sets.size(); ++l) {
    const auto& set = p.sets[l];
    for (std::size_t a = 0; a < set.size(); ++a)
      for (std::size_t b = a + 1; b < set.size(); ++b)
        if (commutes(h.term(set[a]).op, h.term(set[b]).op)) {
          return fail("set " + std::to_string(l) + ": terms " + std::to_string(set[a]) + " (" +
                      h.term(set[a]).op.word() + ") and " + std::to_string(set[b]) + " (" +
                      h.term(set[b]).op.word() + ") commute");
        }
    const auto& betas = p.betas[l];
    if (betas.size() != set.size()) return fail("set " + std::to_string(l) + ": beta count mismatch");
    const double gamma = p.gammas[l];
    if (!(gamma >= 0.0)) return fail("set " + std::to_string(l) + ": negative gamma");
    double beta_sq = 0.0;
    double alpha_sq = 0.0;
    for (std::size_t k = 0; k < set.size(); ++k) {
      const double alpha = h.term(set[k]).coeff;
      beta_sq += betas[k] * betas[k];
      alpha_sq += alpha * alpha;
      if (std::abs(gamma * betas[k] - alpha) > 1e-12 * std::max(1.0, std::abs(alpha))) {
        return fail("set " + std::to_string(l) + ": gamma*beta does not reproduce coefficient of term " +
                    std::to_string(set[k]));
      }
    }
    if (std::abs(beta_sq - 1.0) > 1e-10) return fail("set " + std::to_string(l) + ": betas are not normalized");
    if (std::abs(gamma * gamma - alpha_sq) > 1e-10 * std::max(1.0, alpha_sq)) {
      return fail("set " + std::to_string(l) + ": gamma^2 differs from the sum of squared coefficients");
    }
  }
  return {};
}

/// Divides set `set_index` into `pieces` contiguous runs (sizes differ by at
/// most one, larger runs first). The new sets replace the old one in place.
inline AnticommutingPartition split_set(const AnticommutingPartition& p, const PauliHamiltonian& h,
                                        std::size_t set_index, std::size_t pieces) {
  if (set_index >= p.sets.size()) throw InputError("set index out of range");
  const auto& set = p.sets[set_index];
  if (pieces < 1 || pieces > set.size()) {
    throw InputError("pieces must be in [1, " + std::to_string(set.size()) + "], got " + std::to_string(pieces));
  }
  if (pieces == 1) return p;
  std::vector<std::vector<std::size_t>> sets;
  sets.reserve(p.sets.size() + pieces - 1);
  for (std::size_t l = 0; l < p.sets.size(); ++l) {
    if (l != set_index) {
      sets.push_back(p.sets[l]);
      continue;
    }
    const std::size_t base = set.size() / pieces;
    const std::size_t extra = set.size() % pieces;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < pieces; ++k) {
      const std::size_t len = base + (k < extra ? 1 : 0);
      sets.emplace_back(set.begin() + static_cast<std::ptrdiff_t>(pos),
                        set.begin() + static_cast<std::ptrdiff_t>(pos + len));
      pos += len;
    }
  }
  return make_partition(h, std::move(sets));
}

/// Terms gamma_l * beta_lj * P_j, in partition order.
inline std::vector<Term> reconstruct_terms(const AnticommutingPartition& p, const PauliHamiltonian& h) {
  std::vector<Term> out;
  for (std::size_t l = 0; l < p.sets.size(); ++l)
    for (std::size_t k = 0; k < p.sets[l].size(); ++k)
      out.push_back({p.gammas[l] * p.betas[l][k], h.term(p.sets[l][k]).op});
  return out;
}

}  // namespace upart
