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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "upart/error.hpp"

namespace upart {

/**
 * An n-qubit Pauli operator  i^phase * s_0 (x) s_1 (x) ... (x) s_{n-1}
 * with s_q in {I, X, Y, Z}.
 *
 * Qubit q is encoded by the symplectic pair (x_q, z_q):
 * I = (0,0), X = (1,0), Z = (0,1), Y = (1,1). The phase exponent is taken
 * relative to the letters, so a string is Hermitian exactly when the phase
 * is even. Internally the letter form relates to the bare symplectic product
 * X^x Z^z by  Y = i X Z, i.e. letter-phase = raw-phase - (number of Y).
 *
 * Bits are packed 64 per word; unused high bits of the last word are zero.
 */
class PauliString {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  PauliString() = default;

  /// Identity on n qubits.
  explicit PauliString(std::size_t n_qubits)
      : n_(n_qubits), xs_(word_count(n_qubits), 0), zs_(word_count(n_qubits), 0) {}

  /// Parses "XYZI", "+XZ", "-iY", "+iZZ". Qubit 0 is the leftmost letter.
  /// '_' is accepted as identity.
  static PauliString from_text(std::string_view text) {
    int phase = 0;
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      phase = text[pos] == '-' ? 2 : 0;
      ++pos;
      if (pos < text.size() && text[pos] == 'i') {
        phase += 1;
        ++pos;
      }
    }
    PauliString out(text.size() - pos);
    for (std::size_t q = 0; pos < text.size(); ++pos, ++q) {
      out.set(q, text[pos]);
    }
    out.phase_ = phase & 3;
    return out;
  }

  /// Identity on n qubits except `letter` on qubit q.
  static PauliString single(std::size_t n_qubits, std::size_t q, char letter) {
    PauliString out(n_qubits);
    out.set(q, letter);
    return out;
  }

  [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
  [[nodiscard]] int phase_exp() const noexcept { return phase_; }
  void set_phase_exp(int phase) noexcept { phase_ = ((phase % 4) + 4) % 4; }

  [[nodiscard]] bool x(std::size_t q) const noexcept {
    return (xs_[q / kWordBits] >> (q % kWordBits)) & 1u;
  }
  [[nodiscard]] bool z(std::size_t q) const noexcept {
    return (zs_[q / kWordBits] >> (q % kWordBits)) & 1u;
  }

  [[nodiscard]] char letter(std::size_t q) const noexcept {
    static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
    return kLetters[(x(q) ? 1 : 0) | (z(q) ? 2 : 0)];
  }

  void set(std::size_t q, char letter) {
    if (q >= n_) throw InputError("qubit index out of range");
    bool xb = false;
    bool zb = false;
    switch (letter) {
      case 'I':
      case '_':
        break;
      case 'X':
        xb = true;
        break;
      case 'Y':
        xb = zb = true;
        break;
      case 'Z':
        zb = true;
        break;
      default:
        throw InputError(std::string("invalid Pauli character '") + letter + "'");
    }
    const Word mask = Word{1} << (q % kWordBits);
    auto& xw = xs_[q / kWordBits];
    auto& zw = zs_[q / kWordBits];
    xw = xb ? (xw | mask) : (xw & ~mask);
    zw = zb ? (zw | mask) : (zw & ~mask);
  }

  [[nodiscard]] std::span<const Word> x_words() const noexcept { return xs_; }
  [[nodiscard]] std::span<const Word> z_words() const noexcept { return zs_; }

  [[nodiscard]] std::size_t y_count() const noexcept {
    std::size_t n = 0;
    for (std::size_t w = 0; w < xs_.size(); ++w) n += std::popcount(xs_[w] & zs_[w]);
    return n;
  }

  [[nodiscard]] bool is_identity_operator() const noexcept {
    for (std::size_t w = 0; w < xs_.size(); ++w) {
      if (xs_[w] | zs_[w]) return false;
    }
    return true;
  }

  /// Same tensor factors, ignoring phase.
  [[nodiscard]] bool same_operator(const PauliString& other) const noexcept {
    return n_ == other.n_ && xs_ == other.xs_ && zs_ == other.zs_;
  }

  /// Copy with the phase cleared.
  [[nodiscard]] PauliString unsigned_copy() const {
    PauliString out = *this;
    out.phase_ = 0;
    return out;
  }

  /// Letters only, e.g. "XIZY".
  [[nodiscard]] std::string word() const {
    std::string out(n_, 'I');
    for (std::size_t q = 0; q < n_; ++q) out[q] = letter(q);
    return out;
  }

  /// Signed form, e.g. "+XIZY", "-iZ".
  [[nodiscard]] std::string str() const {
    static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
    return kPrefix[phase_] + word();
  }

  /// Lexicographic on (x bits, z bits), qubit 0 most significant.
  [[nodiscard]] static bool symplectic_less(const PauliString& a, const PauliString& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    for (std::size_t q = 0; q < a.n_; ++q) {
      if (a.x(q) != b.x(q)) return b.x(q);
    }
    for (std::size_t q = 0; q < a.n_; ++q) {
      if (a.z(q) != b.z(q)) return b.z(q);
    }
    return false;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) noexcept {
    return a.phase_ == b.phase_ && a.same_operator(b);
  }

  friend PauliString multiply(const PauliString& a, const PauliString& b);
  friend bool commutes(const PauliString& a, const PauliString& b);

 private:
  static constexpr std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

  std::size_t n_ = 0;
  std::vector<Word> xs_;
  std::vector<Word> zs_;
  int phase_ = 0;
};

namespace detail {
inline void require_same_size(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw InputError("Pauli strings act on different numbers of qubits (" +
                     std::to_string(a.n_qubits()) + " vs " + std::to_string(b.n_qubits()) + ")");
  }
}
}  // namespace detail

/// Exact operator product a*b, phase included.
inline PauliString multiply(const PauliString& a, const PauliString& b) {
  detail::require_same_size(a, b);
  PauliString out(a.n_);
  // raw(a) = letter(a) + nY(a); (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{z1.x2} X^{x1^x2} Z^{z1^z2}
  std::size_t flips = 0;
  for (std::size_t w = 0; w < a.xs_.size(); ++w) {
    flips += std::popcount(a.zs_[w] & b.xs_[w]);
    out.xs_[w] = a.xs_[w] ^ b.xs_[w];
    out.zs_[w] = a.zs_[w] ^ b.zs_[w];
  }
  const std::size_t raw = static_cast<std::size_t>(a.phase_) + a.y_count() +
                          static_cast<std::size_t>(b.phase_) + b.y_count() + 2 * flips;
  out.phase_ = static_cast<int>((raw + 4 * out.n_ - out.y_count()) % 4);
  return out;
}

inline PauliString operator*(const PauliString& a, const PauliString& b) { return multiply(a, b); }

/// True iff the symplectic inner product is even. Phases never matter.
inline bool commutes(const PauliString& a, const PauliString& b) {
  detail::require_same_size(a, b);
  std::size_t acc = 0;
  for (std::size_t w = 0; w < a.xs_.size(); ++w) {
    acc += std::popcount((a.xs_[w] & b.zs_[w]) ^ (a.zs_[w] & b.xs_[w]));
  }
  return (acc & 1u) == 0;
}

inline bool anticommutes(const PauliString& a, const PauliString& b) { return !commutes(a, b); }

/// Number of non-identity tensor factors.
inline std::size_t weight(const PauliString& a) {
  std::size_t n = 0;
  const auto xs = a.x_words();
  const auto zs = a.z_words();
  for (std::size_t w = 0; w < xs.size(); ++w) n += std::popcount(xs[w] | zs[w]);
  return n;
}

/// A Pauli string squares to +I and equals its adjoint iff its letter phase is +1 or -1.
inline bool is_hermitian_selfinverse(const PauliString& a) { return (a.phase_exp() & 1) == 0; }

}  // namespace upart

template <>
struct std::hash<upart::PauliString> {
  std::size_t operator()(const upart::PauliString& p) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(p.n_qubits()) ^ static_cast<std::size_t>(p.phase_exp());
    for (auto w : p.x_words()) h = h * 1000003u ^ std::hash<std::uint64_t>{}(w);
    for (auto w : p.z_words()) h = h * 998244353u ^ std::hash<std::uint64_t>{}(w + 0x9e3779b97f4a7c15ull);
    return h;
  }
};
