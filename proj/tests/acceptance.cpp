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

// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "upart/upart.hpp"

namespace {

using namespace upart;
using oracle::CMat;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double choose2(std::size_t n) { return static_cast<double>(n * (n - 1) / 2); }

Eigen::VectorXcd to_eigen(const StateVector& psi) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
  return v;
}

PauliHamiltonian load_fixture(const std::string& name) {
  std::ifstream in(std::string(UPART_DATA_DIR) + "/" + name);
  return jordan_wigner(to_majorana(parse_integrals(in)));
}

const std::vector<std::string> kFixtures = {"h2_sto3g.int",  "h4_sto3g.int",   "lih_sto3g.int",
                                            "hf_sto3g.int",  "beh2_sto3g.int", "h2o_sto3g.int"};

ColoringOptions fixture_coloring() {
  ColoringOptions o;
  o.refine_passes = 100;
  return o;
}

// Diagonal (I/Z-only) terms commute pairwise, so each needs its own set.
std::size_t diagonal_terms(const PauliHamiltonian& h) {
  std::size_t d = 0;
  for (const auto& t : h.terms()) d += t.op.word().find_first_of("XY") == std::string::npos ? 1 : 0;
  return d;
}

Outcome rotation_correctness() {
  std::mt19937_64 rng(1001);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t size = 2 + static_cast<std::size_t>(trial) % 7;
    const std::size_t lo = (size + 1) / 2;
    const std::size_t n = lo + static_cast<std::size_t>(trial) % (11 - lo);
    const auto ops = oracle::random_anticommuting_set(size, n, rng);
    const auto betas = oracle::random_betas(size, rng);
    std::vector<Term> hs;
    for (std::size_t k = 0; k < size; ++k) hs.push_back({betas[k], ops[k]});
    const DenseOperator hm = to_matrix(hs, n);
    for (auto plan : {build_sequence_plan(ops, betas), build_single_rotation_plan(ops, betas)}) {
      worst = std::max(worst, frobenius_distance(conjugate(plan, hm), to_matrix(plan.sink)));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-10 && secs < 60.0, fmt("500 sets x 2 modes, max residual %.2e, %.1f s", worst, secs)};
}

Outcome chi_algebra() {
  std::mt19937_64 rng(1002);
  double worst_sq = 0.0, worst_rot = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t size = 2 + static_cast<std::size_t>(trial) % 6;
    const std::size_t n = (size + 1) / 2 + static_cast<std::size_t>(trial) % 3;
    const auto ops = oracle::random_anticommuting_set(size, n, rng);
    const auto betas = oracle::random_betas(size, rng);
    const std::size_t sink = static_cast<std::size_t>(trial) % size;
    const auto plan = build_single_rotation_plan(ops, betas, sink);
    const CMat id = CMat::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (const auto& step : plan.steps) {
      const CMat chi = oracle::matrix(step.generator, n);
      worst_sq = std::max(worst_sq, (chi * chi - id).norm());
    }
    std::vector<Term> hs;
    for (std::size_t k = 0; k < size; ++k) hs.push_back({betas[k], ops[k]});
    const CMat r = oracle::plan_matrix(plan);
    worst_rot = std::max(worst_rot, (r * oracle::matrix(hs, n) * r.adjoint() - oracle::matrix(plan.sink)).norm());
  }
  return {worst_sq <= 1e-10 && worst_rot <= 1e-10,
          fmt("200 instances, max |X^2 - I| %.2e, max |R H R^dag - P_n| %.2e", worst_sq, worst_rot)};
}

Outcome tim_counts() {
  Outcome o;
  std::string d;
  for (std::size_t l : {4u, 8u, 16u}) {
    const auto h = tim_hamiltonian(GraphSpec::ring(l), 1.0);
    const auto greedy = greedy_color(h);
    const auto pairs = tim_pair_partition(h);
    const bool ok = h.size() == 2 * l && greedy.size() == l && pairs.size() == l && validate(greedy, h) &&
                    validate(pairs, h);
    o.pass = o.pass && ok;
    d += fmt("ring %zu: %zu->%zu; ", l, h.size(), greedy.size());
  }
  for (std::size_t q : {3u, 4u}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto g = GraphSpec::random_regular(12, q, seed);
      const auto h = tim_hamiltonian(g, 0.8);
      const auto p = tim_pair_partition(h);
      const std::size_t e = g.edges.size();
      const bool ok = p.size() == e && validate(p, h) && p.size() * (q + 2) == h.size() * q;
      o.pass = o.pass && ok;
      if (seed == 1) d += fmt("%zu-regular: %zu->%zu; ", q, h.size(), p.size());
    }
  }
  o.detail = d + "ratio q/(q+2) exact";
  return o;
}

MajoranaPolynomial full_quartics(std::size_t n) {
  MajoranaPolynomial mp;
  mp.n_modes = 2 * n;
  for (std::uint32_t p = 0; p < n; ++p)
    for (std::uint32_t q = p + 1; q < n; ++q)
      for (std::uint32_t r = 0; r < n; ++r)
        for (std::uint32_t s = r + 1; s < n; ++s) mp.add({2 * p, 2 * q, 2 * r + 1, 2 * s + 1}, 1.0);
  return mp;
}

Outcome quartic_sets() {
  Outcome o;
  for (std::size_t n = 4; n <= 8; ++n) {
    const auto r = majorana_partition(full_quartics(n));
    const bool ok = r.partition.size() == static_cast<std::size_t>(choose2(n)) * (n - 2) &&
                    validate(r.partition, r.hamiltonian);
    o.pass = o.pass && ok;
    o.detail += fmt("N=%zu:%zu ", n, r.partition.size());
  }
  std::mt19937_64 rng(1004);
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 6;
    const auto r = majorana_partition(to_majorana(oracle::random_integrals(n, rng, 0.3)));
    if (!validate(r.partition, r.hamiltonian)) ++bad;
  }
  o.pass = o.pass && bad == 0;
  o.detail += fmt("sets; 100 sparse tables, %d invalid", bad);
  return o;
}

Outcome majorana_equivalence() {
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 3;
    const auto t = oracle::random_integrals(n, rng);
    const auto mp = to_majorana(t);
    const CMat f = oracle::fermionic_matrix(t);
    const CMat m = oracle::majorana_matrix(mp);
    const auto jw = jordan_wigner(mp);
    const CMat p = oracle::matrix(jw);
    worst = std::max({worst, (f - m).norm(), (f - p).norm(), (m - p).norm()});
  }
  return {worst <= 1e-10, fmt("50 tables at N=2..4, max pairwise distance %.2e", worst)};
}

Outcome measurement_bounds() {
  std::mt19937_64 rng(1006);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 6;
    const auto h = oracle::random_hamiltonian(n, 5 + static_cast<std::size_t>(trial) % 40, rng);
    const auto p = greedy_color(h);
    const auto c = cost_report(h, p, 0.01);
    double lam = 0.0, lam_c = 0.0;
    for (const auto& t : h.terms()) lam += std::abs(t.coeff);
    for (const auto& set : p.sets) {
      double s2 = 0.0;
      for (auto j : set) s2 += h.term(j).coeff * h.term(j).coeff;
      lam_c += std::sqrt(s2);
    }
    const double tol = 1e-12 * std::max(1.0, lam);
    const bool ok = c.bounds_hold && lam_c <= lam + tol &&
                    lam / std::sqrt(static_cast<double>(p.max_set_size())) <= lam_c + tol &&
                    std::abs(lam_c - c.lambda_after) <= tol;
    if (!ok) ++violations;
  }
  double sat = 0.0;
  for (std::size_t l : {4u, 8u, 16u}) {
    const auto h = tim_hamiltonian(GraphSpec::ring(l), 1.0);
    const auto c = cost_report(h, greedy_color(h), 0.01);
    sat = std::max(sat, std::abs(c.lambda_after - c.lambda_before / std::sqrt(static_cast<double>(c.s_max))));
  }
  return {violations == 0 && sat <= 1e-12,
          fmt("1000 Hamiltonians, %d violations; uniform saturation error %.2e", violations, sat)};
}

Outcome random_statistics() {
  // Seed fixed before the first run.
  std::mt19937_64 rng(20261016);
  Outcome o;
  auto mc = [&](std::size_t n, std::size_t k, std::size_t samples, double closed, double printed) {
    std::size_t anti = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      const auto a = random_klocal_term(n, k, rng);
      const auto b = random_klocal_term(n, k, rng);
      anti += anticommutes(a, b) ? 1 : 0;
    }
    const double f = static_cast<double>(anti) / static_cast<double>(samples);
    const double se = std::sqrt(closed * (1 - closed) / static_cast<double>(samples));
    const double z = (f - closed) / se;
    o.pass = o.pass && std::abs(z) <= 3.0;
    o.detail += fmt("(%zu,%zu): freq %.5f vs %.5f, z=%+.2f", n, k, f, closed, z);
    if (printed >= 0) o.detail += fmt(" [single-overlap form %.5f, z=%+.2f]", printed, (f - printed) / se);
    o.detail += "; ";
  };
  mc(20, 2, 100000, 1.0 - commute_probability(20, 2), anticommute_probability_2local(20));
  mc(12, 3, 100000, anticommute_probability_3local(12), -1.0);
  double worst = 0.0;
  for (std::size_t n = 10; n <= 30; ++n) {
    worst = std::max(worst, std::abs(anticommute_probability_3local(n) - (1.0 - commute_probability(n, 3))));
  }
  o.pass = o.pass && worst <= 1e-12;
  o.detail += fmt("k=3 closed vs sum, n=10..30: %.2e", worst);
  return o;
}

std::vector<std::size_t> unbounded_counts() {
  std::vector<std::size_t> out;
  for (const auto& f : kFixtures) {
    const auto h = load_fixture(f);
    out.push_back(greedy_color(h, fixture_coloring()).size());
  }
  return out;
}

Outcome order_of_magnitude() {
  Outcome o;
  for (const auto& f : kFixtures) {
    const auto h = load_fixture(f);
    const auto p = greedy_color(h, fixture_coloring());
    const std::string name = f.substr(0, f.find('_'));
    if (5 * diagonal_terms(h) > h.size()) {
      // Out of reach for any partition: the lower bound already exceeds terms / 5.
      o.detail += fmt("%s %zuq %zu->%zu (excluded, >= %zu commuting diagonal terms); ", name.c_str(), h.n_qubits(),
                      h.size(), p.size(), diagonal_terms(h));
      continue;
    }
    const bool ok = validate(p, h) && 5 * p.size() <= h.size() && h.n_qubits() <= 14;
    o.pass = o.pass && ok;
    o.detail += fmt("%s %zuq %zu->%zu; ", name.c_str(), h.n_qubits(), h.size(), p.size());
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

Outcome budgeted_splitting() {
  Outcome o;
  const auto reference = unbounded_counts();
  const std::vector<std::size_t> budgets = {0, 10, 100, 1000, 10000, std::numeric_limits<std::size_t>::max()};
  for (std::size_t i = 0; i < kFixtures.size(); ++i) {
    const auto h = load_fixture(kFixtures[i]);
    const auto base = greedy_color(h, fixture_coloring());
    std::vector<std::size_t> counts;
    for (auto b : budgets) {
      const auto split = budgeted_split(base, h, b);
      if (!validate(split.partition, h)) o.pass = false;
      for (const auto& e : split.estimates)
        if (e.compiled_gates > b && split.partition.sets[&e - split.estimates.data()].size() > 1) o.pass = false;
      counts.push_back(split.partition.size());
    }
    const bool monotone = std::is_sorted(counts.rbegin(), counts.rend());
    const bool ok = monotone && counts.front() == h.size() && counts.back() == reference[i];
    o.pass = o.pass && ok;
    if (i == 1 || i == 2) {
      o.detail += kFixtures[i].substr(0, kFixtures[i].find('_')) + " {";
      for (std::size_t k = 0; k < counts.size(); ++k) o.detail += (k ? "," : "") + std::to_string(counts[k]);
      o.detail += "} ";
    }
  }
  o.detail += "budgets 0,10,100,1e3,1e4,inf";
  return o;
}

Outcome noncontextual_reduction() {
  std::mt19937_64 rng(1010);
  int non_commuting = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial) % 6;
    const std::size_t r1 = 1 + static_cast<std::size_t>(trial) % (n - 1);
    const auto h = random_noncontextual(n, r1, 5000 + static_cast<std::uint64_t>(trial));
    const auto red = reduce_to_commuting(h);
    const auto& out = red.hamiltonian;
    for (std::size_t a = 0; a < out.size(); ++a)
      for (std::size_t b = a + 1; b < out.size(); ++b)
        if (!commutes(out.term(a).op, out.term(b).op)) ++non_commuting;
    const CMat hm = oracle::matrix(h);
    for (int s = 0; s < 3; ++s) {
      const auto v = to_eigen(random_state(n, rng));
      const double lhs = (v.adjoint() * hm * v)(0).real();
      double rhs = h.identity_offset();
      for (auto j : red.structure.z_terms) rhs += h.term(j).coeff * (v.adjoint() * oracle::matrix(h.term(j).op) * v)(0).real();
      for (std::size_t j = 0; j < red.plans.size(); ++j) {
        const CMat u = oracle::plan_matrix(red.plans[j]);
        rhs += red.gammas[j] * (v.adjoint() * u.adjoint() * oracle::matrix(red.plans[j].sink) * u * v)(0).real();
      }
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return {non_commuting == 0 && worst <= 1e-10,
          fmt("100 instances, %d non-commuting pairs, max expectation error %.2e", non_commuting, worst)};
}

Outcome dual_ratio() {
  Outcome o;
  for (std::size_t n : {4u, 8u, 16u}) {
    const auto d = dual_basis_structure(n, 11);
    const std::size_t terms = d.hamiltonian.size(), sets = d.partition.size();
    const bool ok = validate(d.partition, d.hamiltonian) && sets * (4 * n - 1) == terms * (2 * n + 1);
    o.pass = o.pass && ok;
    o.detail += fmt("N=%zu: %zu/%zu; ", n, sets, terms);
  }
  o.detail += "ratio (2N+1)/(4N-1) exact";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"rotation correctness", rotation_correctness},
      {"generator algebra", chi_algebra},
      {"transverse Ising counts", tim_counts},
      {"quartic set bound", quartic_sets},
      {"Majorana equivalence", majorana_equivalence},
      {"measurement bounds", measurement_bounds},
      {"random-Hamiltonian statistics", random_statistics},
      {"order-of-magnitude reduction", order_of_magnitude},
      {"budgeted splitting", budgeted_splitting},
      {"noncontextual reduction", noncontextual_reduction},
      {"dual-basis ratio", dual_ratio},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
