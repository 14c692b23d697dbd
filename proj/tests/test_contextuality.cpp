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

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "oracle.hpp"
#include "upart/contextuality.hpp"

namespace upart {
namespace {

PauliHamiltonian H(const std::string& text) { return parse_hamiltonian(text); }

std::vector<PauliString> ops_of(const PauliHamiltonian& h) {
  std::vector<PauliString> out;
  for (const auto& t : h.terms()) out.push_back(t.op);
  return out;
}

bool all_commute(const PauliHamiltonian& h) {
  for (std::size_t a = 0; a < h.size(); ++a)
    for (std::size_t b = a + 1; b < h.size(); ++b)
      if (!commutes(h.term(a).op, h.term(b).op)) return false;
  return true;
}

// <H> against sum_Z alpha <P> + sum_j gamma_j <R_j^dagger C_1j R_j>, all from oracle matrices.
double identity_residual(const PauliHamiltonian& h, const NoncontextualReduction& r, const Eigen::VectorXcd& v) {
  const double lhs = (v.adjoint() * oracle::matrix(h) * v)(0).real();
  double rhs = h.identity_offset();
  for (auto j : r.structure.z_terms) {
    rhs += h.term(j).coeff * (v.adjoint() * oracle::matrix(h.term(j).op) * v)(0).real();
  }
  for (std::size_t j = 0; j < r.plans.size(); ++j) {
    const auto u = oracle::plan_matrix(r.plans[j]);
    rhs += r.gammas[j] * (v.adjoint() * u.adjoint() * oracle::matrix(r.plans[j].sink) * u * v)(0).real();
  }
  return std::abs(lhs - rhs);
}

Eigen::VectorXcd random_vector(std::size_t n, std::mt19937_64& rng) {
  auto psi = random_state(n, rng);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
  return v;
}

TEST(Noncontextual, TwoCliqueExample) {
  auto h = H("4 ZI\n3 IZ\n2 XX\n1 YY\n");
  EXPECT_TRUE(is_noncontextual(h));
  auto s = decompose(h);
  EXPECT_TRUE(s.z_terms.empty());
  ASSERT_EQ(s.cliques.size(), 2u);
  EXPECT_EQ(s.cliques[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(s.cliques[1], (std::vector<std::size_t>{2, 3}));
  ASSERT_EQ(s.hitting_sets.size(), 2u);
  EXPECT_EQ(s.hitting_sets[0], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(s.hitting_sets[1], (std::vector<std::size_t>{1, 3}));
}

TEST(Noncontextual, TrivialCases) {
  auto commuting = H("1 ZI\n1 IZ\n1 ZZ\n");
  EXPECT_TRUE(is_noncontextual(commuting));
  auto s = decompose(commuting);
  EXPECT_EQ(s.z_terms.size(), 3u);
  EXPECT_TRUE(s.cliques.empty());
  EXPECT_TRUE(is_noncontextual(H("1 XYZ\n")));
  EXPECT_TRUE(is_noncontextual(PauliHamiltonian(2, {})));
}

TEST(Noncontextual, AnticommutingPair) {
  auto h = H("3 X\n4 Z\n");
  auto s = decompose(h);
  ASSERT_EQ(s.cliques.size(), 2u);
  EXPECT_EQ(s.hitting_sets.size(), 1u);
  EXPECT_EQ(s.hitting_sets[0].size(), 2u);
}

TEST(Noncontextual, ContextualExample) {
  // XI ~ IZ ~ ZI with XI and ZI anticommuting, and all three in T.
  auto h = H("1 XI\n1 IZ\n1 ZI\n1 IX\n");
  auto c = check_noncontextual(h);
  ASSERT_FALSE(c.noncontextual);
  const auto [a, b, d] = *c.violation;
  EXPECT_TRUE(commutes(h.term(a).op, h.term(b).op));
  EXPECT_TRUE(commutes(h.term(b).op, h.term(d).op));
  EXPECT_FALSE(commutes(h.term(a).op, h.term(d).op));
  try {
    decompose(h);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("contextual", 0), 0u);
  }
  EXPECT_THROW(reduce_to_commuting(h), ValidationError);
}

TEST(Noncontextual, AgreesWithBruteForce) {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<std::size_t> size(1, 6);
  int contextual = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto h = oracle::random_hamiltonian(3, size(rng), rng);
    const bool brute = oracle::brute_noncontextual(ops_of(h));
    EXPECT_EQ(is_noncontextual(h), brute) << serialize(h);
    contextual += !brute;
  }
  EXPECT_GT(contextual, 10);
}

TEST(Reduction, TwoCliqueExample) {
  auto h = H("4 ZI\n3 IZ\n2 XX\n1 YY\n");
  auto r = reduce_to_commuting(h);
  ASSERT_EQ(r.hamiltonian.size(), 2u);
  EXPECT_TRUE(all_commute(r.hamiltonian));
  auto zi = r.hamiltonian.find(PauliString::from_text("ZI"));
  auto iz = r.hamiltonian.find(PauliString::from_text("IZ"));
  ASSERT_TRUE(zi && iz);
  EXPECT_NEAR(std::abs(r.hamiltonian.term(*zi).coeff), std::sqrt(20.0), 1e-12);
  EXPECT_NEAR(std::abs(r.hamiltonian.term(*iz).coeff), std::sqrt(10.0), 1e-12);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 5; ++k) EXPECT_LT(identity_residual(h, r, random_vector(2, rng)), 1e-10);
}

TEST(Reduction, CommutingInputPassesThrough) {
  auto h = H("0.5 II\n1 ZI\n2 IZ\n3 ZZ\n");
  auto r = reduce_to_commuting(h);
  EXPECT_EQ(r.hamiltonian, h);
  EXPECT_TRUE(r.plans.empty());
}

TEST(Reduction, AnticommutingPairCollapses) {
  auto h = H("3 X\n4 Z\n");
  auto r = reduce_to_commuting(h);
  ASSERT_EQ(r.hamiltonian.size(), 1u);
  EXPECT_EQ(r.hamiltonian.term(0).op.word(), "Z");
  EXPECT_NEAR(r.hamiltonian.term(0).coeff, 5.0, 1e-12);
}

TEST(Reduction, SinkIsFirstCliqueMember) {
  auto h = H("0.3 XII\n0.9 ZXI\n0.5 ZZI\n0.2 IIZ\n");
  auto r = reduce_to_commuting(h);
  for (std::size_t j = 0; j < r.plans.size(); ++j) {
    EXPECT_TRUE(r.plans[j].sink.same_operator(h.term(r.structure.cliques[0][j]).op));
  }
}

TEST(Reduction, RandomInstances) {
  std::mt19937_64 rng(2);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 4;
    auto h = random_noncontextual(n, 1 + seed % (n - 1), seed);
    ASSERT_TRUE(oracle::brute_noncontextual(ops_of(h))) << serialize(h);
    auto r = reduce_to_commuting(h);
    EXPECT_TRUE(all_commute(r.hamiltonian));
    for (int k = 0; k < 3; ++k) EXPECT_LT(identity_residual(h, r, random_vector(n, rng)), 1e-10);
  }
}

TEST(Generator, Deterministic) {
  EXPECT_EQ(random_noncontextual(5, 2, 3), random_noncontextual(5, 2, 3));
  EXPECT_THROW(random_noncontextual(3, 3, 1), InputError);
  EXPECT_THROW(random_noncontextual(3, 0, 1), InputError);
}

}  // namespace
}  // namespace upart
