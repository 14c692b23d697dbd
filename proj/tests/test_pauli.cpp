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
#include "upart/pauli.hpp"

namespace upart {
namespace {

using oracle::word_matrix;

PauliString P(const std::string& s) { return PauliString::from_text(s); }

std::string random_word(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, 3);
  std::string w(n, 'I');
  for (auto& c : w) c = "IXYZ"[d(rng)];
  return w;
}

TEST(PauliString, ParsesLettersAndPhase) {
  auto p = P("-iXYZI");
  EXPECT_EQ(p.n_qubits(), 4u);
  EXPECT_EQ(p.phase_exp(), 3);
  EXPECT_EQ(p.word(), "XYZI");
  EXPECT_EQ(p.str(), "-iXYZI");
  EXPECT_TRUE(p.x(0));
  EXPECT_FALSE(p.z(0));
  EXPECT_TRUE(p.x(1) && p.z(1));
  EXPECT_EQ(P("X_Z").word(), "XIZ");
}

TEST(PauliString, RejectsBadCharacters) {
  EXPECT_THROW(P("XQ"), InputError);
  EXPECT_THROW(P("+i+X"), InputError);
  PauliString p(2);
  EXPECT_THROW(p.set(2, 'X'), InputError);
}

TEST(PauliString, SelfProductIsIdentity) {
  auto r = P("X") * P("X");
  EXPECT_TRUE(r.is_identity_operator());
  EXPECT_EQ(r.phase_exp(), 0);
}

TEST(PauliString, XTimesZIsMinusIY) {
  auto r = P("X") * P("Z");
  EXPECT_EQ(r.word(), "Y");
  EXPECT_EQ(r.phase_exp(), 3);
  EXPECT_TRUE(word_matrix(r.str()).isApprox(word_matrix("X") * word_matrix("Z")));
}

TEST(PauliString, DisjointSupportsMultiplyWithoutPhase) {
  auto r = P("XI") * P("IZ");
  EXPECT_EQ(r.str(), "+XZ");
}

TEST(PauliString, ProductMatchesDenseOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> ph(0, 3);
  const std::string prefix[4] = {"+", "+i", "-", "-i"};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 5;
    auto a = prefix[ph(rng)] + random_word(n, rng);
    auto b = prefix[ph(rng)] + random_word(n, rng);
    auto r = P(a) * P(b);
    EXPECT_LT((word_matrix(r.str()) - word_matrix(a) * word_matrix(b)).norm(), 1e-12) << a << " * " << b;
  }
}

TEST(PauliString, ProductAcrossWordBoundary) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = P(random_word(130, rng));
    auto b = P(random_word(130, rng));
    auto ab = a * b;
    auto ba = b * a;
    EXPECT_TRUE(ab.same_operator(ba));
    EXPECT_EQ((ab.phase_exp() - ba.phase_exp() + 4) % 4, commutes(a, b) ? 0 : 2);
    EXPECT_EQ(ab * b, a);
  }
}

TEST(PauliString, Commutation) {
  EXPECT_FALSE(commutes(P("X"), P("Z")));
  EXPECT_TRUE(anticommutes(P("X"), P("Z")));
  EXPECT_TRUE(commutes(P("XX"), P("YY")));
  EXPECT_TRUE(commutes(P("XYZ"), P("III")));
  EXPECT_THROW(commutes(P("X"), P("XX")), InputError);
}

TEST(PauliString, CommutationMatchesDenseCommutator) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 4;
    auto a = random_word(n, rng);
    auto b = random_word(n, rng);
    const auto ma = word_matrix(a);
    const auto mb = word_matrix(b);
    const bool dense = (ma * mb - mb * ma).norm() < 1e-12;
    EXPECT_EQ(commutes(P(a), P(b)), dense) << a << " " << b;
  }
}

TEST(PauliString, Weight) {
  EXPECT_EQ(weight(P("II")), 0u);
  EXPECT_EQ(weight(P("XZI")), 2u);
  EXPECT_EQ(weight(P("YYY")), 3u);
}

TEST(PauliString, Hermiticity) {
  EXPECT_TRUE(is_hermitian_selfinverse(P("XY")));
  EXPECT_FALSE(is_hermitian_selfinverse(P("+iZ")));
  auto xz = P("+iX") * P("Z");
  EXPECT_TRUE(is_hermitian_selfinverse(xz));
  const auto m = word_matrix(xz.str());
  EXPECT_LT((m - m.adjoint()).norm(), 1e-12);
}

TEST(PauliString, HermiticityMatchesDenseOracle) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> ph(0, 3);
  const std::string prefix[4] = {"+", "+i", "-", "-i"};
  for (int trial = 0; trial < 100; ++trial) {
    const auto text = prefix[ph(rng)] + random_word(3, rng);
    const auto m = word_matrix(text);
    EXPECT_EQ(is_hermitian_selfinverse(P(text)), (m - m.adjoint()).norm() < 1e-12) << text;
  }
}

TEST(PauliString, SymplecticOrder) {
  EXPECT_TRUE(PauliString::symplectic_less(P("ZI"), P("XI")));
  EXPECT_TRUE(PauliString::symplectic_less(P("IX"), P("XI")));
  EXPECT_FALSE(PauliString::symplectic_less(P("XI"), P("XI")));
  EXPECT_TRUE(PauliString::symplectic_less(P("XI"), P("YI")));
}

TEST(PauliString, HashAndEquality) {
  std::hash<PauliString> h;
  EXPECT_EQ(h(P("XYZ")), h(P("XYZ")));
  EXPECT_EQ(P("XYZ"), P("+XYZ"));
  EXPECT_NE(P("XYZ"), P("-XYZ"));
  EXPECT_TRUE(P("XYZ").same_operator(P("-XYZ")));
}

}  // namespace
}  // namespace upart
