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

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "upart/error.hpp"
#include "upart/hamiltonian.hpp"
#include "upart/pauli.hpp"

namespace upart {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

/// Largest register the dense oracle accepts.
inline constexpr std::size_t kMaxDenseQubits = 12;

/// Single equality criterion for dense checks.
inline constexpr double kDenseTolerance = 1e-10;

namespace detail {
// Plain complex product; std::complex multiplication carries NaN recovery.
inline Complex cmul(Complex a, Complex b) noexcept {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
}  // namespace detail

/**
 * Row-major 2^n x 2^n complex matrix.
 *
 * Basis index bit (n-1-q) holds qubit q, so qubit 0 is the leftmost
 * Kronecker factor.
 */
class DenseOperator {
 public:
  DenseOperator() = default;

  explicit DenseOperator(std::size_t n_qubits) : n_(n_qubits) {
    if (n_qubits > kMaxDenseQubits) {
      throw InputError("dense operators are capped at " + std::to_string(kMaxDenseQubits) +
                       " qubits, got " + std::to_string(n_qubits));
    }
    dim_ = std::size_t{1} << n_qubits;
    data_.assign(dim_ * dim_, Complex{});
  }

  static DenseOperator identity(std::size_t n_qubits) {
    DenseOperator out(n_qubits);
    for (std::size_t i = 0; i < out.dim_; ++i) out(i, i) = 1.0;
    return out;
  }

  [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::span<const Complex> data() const noexcept { return data_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * dim_ + c]; }

  DenseOperator& operator+=(const DenseOperator& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseOperator& operator-=(const DenseOperator& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseOperator& operator*=(Complex s) {
    for (auto& v : data_) v = detail::cmul(v, s);
    return *this;
  }
  /// this += s * o
  void add_scaled(const DenseOperator& o, Complex s) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += detail::cmul(s, o.data_[i]);
  }

  friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
  friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
  friend DenseOperator operator*(DenseOperator a, Complex s) { return a *= s; }

  /// Plain O(d^3) product.
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    a.require_same(b);
    DenseOperator out(a.n_);
    const std::size_t d = a.dim_;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        const Complex* brow = &b.data_[k * d];
        Complex* orow = &out.data_[i * d];
        for (std::size_t j = 0; j < d; ++j) orow[j] += detail::cmul(aik, brow[j]);
      }
    }
    return out;
  }

  [[nodiscard]] DenseOperator adjoint() const {
    DenseOperator out(n_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  [[nodiscard]] double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  [[nodiscard]] StateVector apply(const StateVector& psi) const {
    if (psi.size() != dim_) throw InputError("state dimension does not match operator");
    StateVector out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      Complex acc{};
      for (std::size_t c = 0; c < dim_; ++c) acc += detail::cmul((*this)(r, c), psi[c]);
      out[r] = acc;
    }
    return out;
  }

 private:
  void require_same(const DenseOperator& o) const {
    if (o.n_ != n_) throw InputError("dense operator size mismatch");
  }

  std::size_t n_ = 0;
  std::size_t dim_ = 1;
  std::vector<Complex> data_ = {Complex{}};
};

namespace detail {

/// P|b> = value(b) |b ^ flip>.
struct PauliAction {
  std::size_t flip = 0;
  std::size_t zmask = 0;
  Complex base{1.0, 0.0};

  explicit PauliAction(const PauliString& p) {
    const std::size_t n = p.n_qubits();
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t bit = std::size_t{1} << (n - 1 - q);
      if (p.x(q)) flip |= bit;
      if (p.z(q)) zmask |= bit;
    }
    static constexpr Complex kPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    base = kPow[(static_cast<std::size_t>(p.phase_exp()) + p.y_count()) % 4];
  }
  [[nodiscard]] Complex value(std::size_t b) const noexcept {
    return (std::popcount(b & zmask) & 1) ? -base : base;
  }
};

}  // namespace detail

/// ||a - b||_F
inline double frobenius_distance(const DenseOperator& a, const DenseOperator& b) {
  return (a - b).frobenius_norm();
}

/// Exact matrix of a Pauli string: one nonzero per column.
inline DenseOperator to_matrix(const PauliString& p) {
  DenseOperator out(p.n_qubits());
  const detail::PauliAction a(p);
  for (std::size_t c = 0; c < out.dim(); ++c) out(c ^ a.flip, c) = a.value(c);
  return out;
}

/// Matrix of sum_k coeff_k op_k.
inline DenseOperator to_matrix(std::span<const Term> terms, std::size_t n_qubits) {
  DenseOperator out(n_qubits);
  for (const auto& t : terms) {
    if (t.op.n_qubits() != n_qubits) throw InputError("term size does not match operator");
    const detail::PauliAction a(t.op);
    for (std::size_t c = 0; c < out.dim(); ++c) out(c ^ a.flip, c) += t.coeff * a.value(c);
  }
  return out;
}

inline DenseOperator to_matrix(const PauliHamiltonian& h) {
  DenseOperator out = to_matrix(h.terms(), h.n_qubits());
  for (std::size_t i = 0; i < out.dim(); ++i) out(i, i) += h.identity_offset();
  return out;
}

/// out += s * P * m, in O(d^2).
inline void add_pauli_left(DenseOperator& out, const PauliString& p, Complex s, const DenseOperator& m) {
  const detail::PauliAction a(p);
  const std::size_t d = m.dim();
  for (std::size_t r = 0; r < d; ++r) {
    const Complex v = s * a.value(r);
    const std::size_t rr = r ^ a.flip;
    for (std::size_t c = 0; c < d; ++c) out(rr, c) += detail::cmul(v, m(r, c));
  }
}

/// out += s * m * P, in O(d^2).
inline void add_pauli_right(DenseOperator& out, const DenseOperator& m, const PauliString& p, Complex s) {
  const detail::PauliAction a(p);
  const std::size_t d = m.dim();
  std::vector<Complex> col_val(d);
  for (std::size_t c = 0; c < d; ++c) col_val[c] = s * a.value(c);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out(r, c) += detail::cmul(m(r, c ^ a.flip), col_val[c]);
}

/// P|psi>
inline StateVector apply(const PauliString& p, const StateVector& psi) {
  const detail::PauliAction a(p);
  if (psi.size() != (std::size_t{1} << p.n_qubits())) throw InputError("state dimension mismatch");
  StateVector out(psi.size());
  for (std::size_t b = 0; b < psi.size(); ++b) out[b ^ a.flip] = a.value(b) * psi[b];
  return out;
}

inline double norm(const StateVector& psi) {
  double s = 0.0;
  for (const auto& v : psi) s += std::norm(v);
  return std::sqrt(s);
}

/// Haar-ish random state from normalized complex Gaussians.
template <class Rng>
StateVector random_state(std::size_t n_qubits, Rng& rng) {
  std::normal_distribution<double> g;
  StateVector psi(std::size_t{1} << n_qubits);
  for (auto& v : psi) v = {g(rng), g(rng)};
  const double nn = norm(psi);
  for (auto& v : psi) v /= nn;
  return psi;
}

/// Computational basis state |index>.
inline StateVector basis_state(std::size_t n_qubits, std::size_t index) {
  StateVector psi(std::size_t{1} << n_qubits);
  psi.at(index) = 1.0;
  return psi;
}

namespace detail {
inline void require_normalized(const StateVector& psi) {
  if (std::abs(norm(psi) - 1.0) > kDenseTolerance) throw InputError("state is not normalized");
}
inline Complex inner(const StateVector& a, const StateVector& b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}
inline double real_expectation(Complex v) {
  if (std::abs(v.imag()) > 1e-8) {
    throw ValidationError("expectation has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}
}  // namespace detail

/// Re <psi|O|psi>; an imaginary residue above 1e-8 means O was not Hermitian.
inline double expectation(const DenseOperator& op, const StateVector& psi) {
  detail::require_normalized(psi);
  return detail::real_expectation(detail::inner(psi, op.apply(psi)));
}

inline double expectation(const PauliString& p, const StateVector& psi) {
  detail::require_normalized(psi);
  return detail::real_expectation(detail::inner(psi, upart::apply(p, psi)));
}

/// Raw dump: row-major, interleaved (real, imag) little-endian doubles.
inline void write_binary(const DenseOperator& op, std::ostream& out) {
  for (const auto& v : op.data()) {
    const double parts[2] = {v.real(), v.imag()};
    out.write(reinterpret_cast<const char*>(parts), sizeof parts);
  }
}

}  // namespace upart
