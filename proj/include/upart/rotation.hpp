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
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "upart/error.hpp"
#include "upart/hamiltonian.hpp"
#include "upart/partition.hpp"
#include "upart/pauli.hpp"
#include "upart/simulator.hpp"

namespace upart {

enum class RotationMode { kSequence, kSingle };

inline const char* to_string(RotationMode m) { return m == RotationMode::kSequence ? "sequence" : "single"; }

/**
 * exp(-i angle G / 2) with G = sum_k coeff_k op_k. Every op has phase 0 and
 * G squares to the identity.
 */
struct RotationStep {
  std::vector<Term> generator;
  double angle = 0.0;
  /// Position (within the set) of the operator this step removes; sequence mode only.
  std::size_t eliminated = 0;
};

struct RotationPlan {
  std::size_t set_index = 0;
  /// Position of the sink within the set.
  std::size_t sink_position = 0;
  /// Surviving operator; phase 2 when the set collapses onto -P_s.
  PauliString sink;
  std::vector<RotationStep> steps;
  RotationMode mode = RotationMode::kSequence;
};

struct CircuitEstimate {
  std::vector<std::size_t> per_step_gates;
  std::size_t total_gates = 0;
  std::size_t cnot_count = 0;
  std::size_t single_qubit_count = 0;
  /// Gate count after adjacent-inverse cancellation over the whole plan.
  std::size_t compiled_gates = 0;
};

namespace detail {

inline double normalize_angle(double a) {
  constexpr double kPi = std::numbers::pi;
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

inline void check_rotation_input(std::span<const PauliString> ops, std::span<const double> betas) {
  if (ops.empty()) throw InputError("rotation requires a non-empty set");
  if (ops.size() != betas.size()) throw InputError("operator and beta counts differ");
  double sumsq = 0.0;
  for (double b : betas) sumsq += b * b;
  if (std::abs(sumsq - 1.0) > 1e-10) throw InputError("betas are not normalized (sum of squares " + std::to_string(sumsq) + ")");
  for (std::size_t a = 0; a < ops.size(); ++a) {
    if (!is_hermitian_selfinverse(ops[a])) throw InputError("set operator '" + ops[a].str() + "' is not Hermitian");
    for (std::size_t b = a + 1; b < ops.size(); ++b)
      if (commutes(ops[a], ops[b])) {
        throw ValidationError("operators '" + ops[a].word() + "' and '" + ops[b].word() + "' commute");
      }
  }
}

inline std::size_t pick_sink(std::span<const double> betas) {
  std::size_t s = 0;
  for (std::size_t k = 1; k < betas.size(); ++k)
    if (std::abs(betas[k]) > std::abs(betas[s])) s = k;
  return s;
}

// i * a * b as a real-signed term with a phase-0 operator.
inline Term i_product(const PauliString& a, const PauliString& b, double coeff) {
  PauliString g = multiply(a, b);
  g.set_phase_exp(g.phase_exp() + 1);
  if (!is_hermitian_selfinverse(g)) throw ValidationError("generator is not Hermitian");
  if (g.phase_exp() == 2) coeff = -coeff;
  g.set_phase_exp(0);
  return {coeff, std::move(g)};
}

inline PauliString signed_sink(const PauliString& p, double sign) {
  PauliString out = p;
  if (sign < 0) out.set_phase_exp(out.phase_exp() + 2);
  return out;
}

}  // namespace detail

/**
 * Sequence of s-1 rotations exp(-i theta_k X_k / 2), X_k = i P_s P_k, that
 * folds every other member onto the sink. theta is chosen so the running
 * sink coefficient stays the positive root.
 */
inline RotationPlan build_sequence_plan(std::span<const PauliString> ops, std::span<const double> betas,
                                        std::optional<std::size_t> sink = std::nullopt) {
  detail::check_rotation_input(ops, betas);
  const std::size_t s = sink.value_or(detail::pick_sink(betas));
  if (s >= ops.size()) throw InputError("sink position out of range");
  RotationPlan plan;
  plan.mode = RotationMode::kSequence;
  plan.sink_position = s;
  double a = betas[s];
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (k == s) continue;
    RotationStep step;
    step.eliminated = k;
    step.generator.push_back(detail::i_product(ops[s], ops[k], 1.0));
    const double b = betas[k];
    if (std::abs(b) >= 1e-12) {
      step.angle = detail::normalize_angle(std::atan2(b, a));
      a = std::hypot(a, b);
    }
    plan.steps.push_back(std::move(step));
  }
  plan.sink = detail::signed_sink(ops[s], a);
  return plan;
}

/**
 * One rotation exp(-i alpha X / 2) with X = i sum_k beta'_k P_k P_s and
 * alpha = -arccos(beta_s); beta' are the remaining betas renormalized.
 */
inline RotationPlan build_single_rotation_plan(std::span<const PauliString> ops, std::span<const double> betas,
                                               std::optional<std::size_t> sink = std::nullopt) {
  detail::check_rotation_input(ops, betas);
  const std::size_t s = sink.value_or(detail::pick_sink(betas));
  if (s >= ops.size()) throw InputError("sink position out of range");
  RotationPlan plan;
  plan.mode = RotationMode::kSingle;
  plan.sink_position = s;
  const double bs = std::clamp(betas[s], -1.0, 1.0);
  double rest = 0.0;
  for (std::size_t k = 0; k < ops.size(); ++k)
    if (k != s) rest += betas[k] * betas[k];
  if (ops.size() == 1 || rest < 1e-24) {
    plan.sink = detail::signed_sink(ops[s], bs);
    return plan;
  }
  const double norm = std::sqrt(rest);
  RotationStep step;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (k == s) continue;
    step.generator.push_back(detail::i_product(ops[k], ops[s], betas[k] / norm));
  }
  step.angle = -std::acos(bs);
  plan.sink = ops[s];
  plan.steps.push_back(std::move(step));
  return plan;
}

inline RotationPlan build_plan(const PauliHamiltonian& h, const AnticommutingPartition& p, std::size_t set_index,
                               RotationMode mode = RotationMode::kSequence) {
  if (set_index >= p.size()) throw InputError("set index out of range");
  std::vector<PauliString> ops;
  for (auto j : p.sets[set_index]) ops.push_back(h.term(j).op);
  RotationPlan plan = mode == RotationMode::kSequence ? build_sequence_plan(ops, p.betas[set_index])
                                                      : build_single_rotation_plan(ops, p.betas[set_index]);
  plan.set_index = set_index;
  return plan;
}

inline std::vector<RotationPlan> build_plans(const PauliHamiltonian& h, const AnticommutingPartition& p,
                                             RotationMode mode = RotationMode::kSequence) {
  std::vector<RotationPlan> out;
  out.reserve(p.size());
  for (std::size_t l = 0; l < p.size(); ++l) out.push_back(build_plan(h, p, l, mode));
  return out;
}

// ---------------------------------------------------------------------------
// Gate-level compilation

enum class GateKind { kH, kRxPlus, kRxMinus, kRz, kCnot };

/// Rx(+-pi/2), Rz(angle) = exp(-i angle Z / 2), CNOT(control=q0, target=q1).
struct Gate {
  GateKind kind = GateKind::kH;
  std::size_t q0 = 0;
  std::size_t q1 = 0;
  double angle = 0.0;

  friend bool operator==(const Gate&, const Gate&) = default;
};

namespace detail {

inline void append_exponential(std::vector<Gate>& out, const PauliString& p, double angle) {
  std::vector<std::size_t> active;
  for (std::size_t q = 0; q < p.n_qubits(); ++q)
    if (p.letter(q) != 'I') active.push_back(q);
  if (active.empty()) return;
  for (auto q : active) {
    if (p.letter(q) == 'X') out.push_back({GateKind::kH, q});
    if (p.letter(q) == 'Y') out.push_back({GateKind::kRxPlus, q});
  }
  for (std::size_t k = 0; k + 1 < active.size(); ++k) out.push_back({GateKind::kCnot, active[k], active[k + 1]});
  out.push_back({GateKind::kRz, active.back(), 0, angle});
  for (std::size_t k = active.size() - 1; k > 0; --k) out.push_back({GateKind::kCnot, active[k - 1], active[k]});
  for (auto q : active) {
    if (p.letter(q) == 'X') out.push_back({GateKind::kH, q});
    if (p.letter(q) == 'Y') out.push_back({GateKind::kRxMinus, q});
  }
}

inline bool cancels(const Gate& a, const Gate& b) {
  switch (a.kind) {
    case GateKind::kH:
      return b.kind == GateKind::kH && a.q0 == b.q0;
    case GateKind::kRxPlus:
      return b.kind == GateKind::kRxMinus && a.q0 == b.q0;
    case GateKind::kRxMinus:
      return b.kind == GateKind::kRxPlus && a.q0 == b.q0;
    case GateKind::kCnot:
      return b.kind == GateKind::kCnot && a.q0 == b.q0 && a.q1 == b.q1;
    case GateKind::kRz:
      return false;
  }
  return false;
}

inline void require_sequence(const RotationPlan& plan) {
  if (plan.mode != RotationMode::kSequence) {
    throw InputError("gate compilation is only defined for sequence-mode plans");
  }
}

}  // namespace detail

/// Time-ordered gates for the sequence plan, first step first.
inline std::vector<Gate> compile(const RotationPlan& plan) {
  detail::require_sequence(plan);
  std::vector<Gate> out;
  for (const auto& step : plan.steps)
    for (const auto& t : step.generator) detail::append_exponential(out, t.op, t.coeff * step.angle);
  return out;
}

/// Removes pairs of mutually inverse gates that are adjacent on every qubit they touch.
inline std::vector<Gate> cancel_adjacent_inverses(const std::vector<Gate>& gates, std::size_t n_qubits) {
  std::vector<bool> alive(gates.size(), true);
  std::vector<std::vector<std::size_t>> last(n_qubits);
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    const bool two = gate.kind == GateKind::kCnot;
    auto& s0 = last.at(gate.q0);
    bool removed = false;
    if (!s0.empty()) {
      const std::size_t prev = s0.back();
      const bool adjacent = !two || (!last.at(gate.q1).empty() && last[gate.q1].back() == prev);
      if (adjacent && detail::cancels(gates[prev], gate)) {
        alive[prev] = false;
        s0.pop_back();
        if (two) last[gate.q1].pop_back();
        removed = true;
      }
    }
    if (removed) {
      alive[g] = false;
    } else {
      s0.push_back(g);
      if (two) last.at(gate.q1).push_back(g);
    }
  }
  std::vector<Gate> out;
  for (std::size_t g = 0; g < gates.size(); ++g)
    if (alive[g]) out.push_back(gates[g]);
  return out;
}

/**
 * Template cost per exponentiated generator of weight w:
 * 2(w-1) CNOTs, one Z rotation, two basis changes per X or Y factor.
 */
inline CircuitEstimate gate_count(const RotationPlan& plan) {
  detail::require_sequence(plan);
  CircuitEstimate est;
  std::size_t n = plan.sink.n_qubits();
  for (const auto& step : plan.steps) {
    std::size_t gates = 0;
    for (const auto& t : step.generator) {
      const std::size_t w = weight(t.op);
      if (w == 0) continue;
      std::size_t non_z = 0;
      for (std::size_t q = 0; q < t.op.n_qubits(); ++q)
        if (t.op.x(q)) ++non_z;
      const std::size_t cnots = 2 * (w - 1);
      est.cnot_count += cnots;
      est.single_qubit_count += 1 + 2 * non_z;
      gates += cnots + 1 + 2 * non_z;
    }
    est.per_step_gates.push_back(gates);
    est.total_gates += gates;
  }
  est.compiled_gates = cancel_adjacent_inverses(compile(plan), n).size();
  return est;
}

struct BudgetedPartition {
  AnticommutingPartition partition;
  std::vector<RotationPlan> plans;
  std::vector<CircuitEstimate> estimates;
};

/**
 * Halves (at the ceiling midpoint) every set whose compiled sequence circuit
 * exceeds max_gates, recursively, until every plan fits or is a singleton.
 */
inline BudgetedPartition budgeted_split(const AnticommutingPartition& p, const PauliHamiltonian& h,
                                        std::size_t max_gates) {
  std::vector<std::vector<std::size_t>> done;
  auto fits = [&](const std::vector<std::size_t>& set) {
    if (set.size() <= 1) return true;
    const auto sub = make_partition(h, {set});
    return gate_count(build_plan(h, sub, 0)).compiled_gates <= max_gates;
  };
  auto recurse = [&](auto&& self, std::vector<std::size_t> set) -> void {
    if (fits(set)) {
      done.push_back(std::move(set));
      return;
    }
    const std::size_t mid = (set.size() + 1) / 2;
    self(self, std::vector<std::size_t>(set.begin(), set.begin() + static_cast<std::ptrdiff_t>(mid)));
    self(self, std::vector<std::size_t>(set.begin() + static_cast<std::ptrdiff_t>(mid), set.end()));
  };
  for (const auto& set : p.sets) recurse(recurse, set);
  BudgetedPartition out;
  out.partition = make_partition(h, std::move(done));
  out.plans = build_plans(h, out.partition);
  for (const auto& plan : out.plans) out.estimates.push_back(gate_count(plan));
  return out;
}

// ---------------------------------------------------------------------------
// Dense evaluation

namespace detail {

// G * m for G = sum_k c_k O_k.
inline DenseOperator generator_left(const std::vector<Term>& g, const DenseOperator& m) {
  DenseOperator out(m.n_qubits());
  for (const auto& t : g) add_pauli_left(out, t.op, t.coeff, m);
  return out;
}

inline DenseOperator generator_right(const DenseOperator& m, const std::vector<Term>& g) {
  DenseOperator out(m.n_qubits());
  for (const auto& t : g) add_pauli_right(out, m, t.op, t.coeff);
  return out;
}

// (c - i s G) m (c + i s G) for G = g P, in a single pass.
inline DenseOperator conjugate_single(const DenseOperator& m, const Term& g, double c, double s) {
  const PauliAction a(g.op);
  const std::size_t d = m.dim();
  std::vector<Complex> val(d);
  for (std::size_t b = 0; b < d; ++b) val[b] = g.coeff * a.value(b);
  DenseOperator out(m.n_qubits());
  const Complex ics{0.0, c * s};
  const double ss = s * s;
  for (std::size_t r = 0; r < d; ++r) {
    const std::size_t rf = r ^ a.flip;
    const Complex left = val[rf];
    for (std::size_t col = 0; col < d; ++col) {
      const std::size_t cf = col ^ a.flip;
      const Complex mg = cmul(m(r, cf), val[col]);
      const Complex gm = cmul(left, m(rf, col));
      const Complex gmg = cmul(left, cmul(m(rf, cf), val[col]));
      out(r, col) = c * c * m(r, col) + cmul(ics, mg - gm) + ss * gmg;
    }
  }
  return out;
}

}  // namespace detail

/// Matrix of exp(-i angle G / 2) = cos(angle/2) I - i sin(angle/2) G.
inline DenseOperator to_matrix(const RotationStep& step, std::size_t n_qubits) {
  DenseOperator out = DenseOperator::identity(n_qubits);
  out *= std::cos(step.angle / 2);
  const Complex f{0.0, -std::sin(step.angle / 2)};
  for (const auto& t : step.generator) out.add_scaled(to_matrix(t.op), f * t.coeff);
  return out;
}

/// R_S as a matrix, later steps on the left.
inline DenseOperator to_matrix(const RotationPlan& plan) {
  const std::size_t n = plan.sink.n_qubits();
  DenseOperator r = DenseOperator::identity(n);
  for (const auto& step : plan.steps) r = to_matrix(step, n) * r;
  return r;
}

/// R_S m R_S^dagger, step by step in O(t d^2) per step.
inline DenseOperator conjugate(const RotationPlan& plan, DenseOperator m) {
  for (const auto& step : plan.steps) {
    const double c = std::cos(step.angle / 2);
    const double s = std::sin(step.angle / 2);
    if (step.generator.size() == 1) {
      m = detail::conjugate_single(m, step.generator.front(), c, s);
      continue;
    }
    const DenseOperator gm = detail::generator_left(step.generator, m);
    const DenseOperator mg = detail::generator_right(m, step.generator);
    const DenseOperator gmg = detail::generator_right(gm, step.generator);
    DenseOperator next = m;
    next *= c * c;
    next.add_scaled(mg, Complex{0.0, c * s});
    next.add_scaled(gm, Complex{0.0, -c * s});
    next.add_scaled(gmg, s * s);
    m = std::move(next);
  }
  return m;
}

/// R_S |psi>.
inline StateVector apply(const RotationPlan& plan, StateVector psi) {
  for (const auto& step : plan.steps) {
    const double c = std::cos(step.angle / 2);
    const Complex f{0.0, -std::sin(step.angle / 2)};
    StateVector next(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) next[i] = c * psi[i];
    for (const auto& t : step.generator) {
      const StateVector gp = upart::apply(t.op, psi);
      for (std::size_t i = 0; i < psi.size(); ++i) next[i] += f * t.coeff * gp[i];
    }
    psi = std::move(next);
  }
  return psi;
}

/// Applies one gate in place. Qubit q is basis-index bit (n-1-q).
inline void apply_gate(const Gate& g, StateVector& psi, std::size_t n_qubits) {
  const std::size_t b0 = std::size_t{1} << (n_qubits - 1 - g.q0);
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::kH:
      for (std::size_t i = 0; i < psi.size(); ++i)
        if (!(i & b0)) {
          const Complex a = psi[i], b = psi[i | b0];
          psi[i] = r * (a + b);
          psi[i | b0] = r * (a - b);
        }
      break;
    case GateKind::kRxPlus:
    case GateKind::kRxMinus: {
      // Rx(t) = cos(t/2) I - i sin(t/2) X
      const double sgn = g.kind == GateKind::kRxPlus ? 1.0 : -1.0;
      const Complex m{0.0, -sgn * r};
      for (std::size_t i = 0; i < psi.size(); ++i)
        if (!(i & b0)) {
          const Complex a = psi[i], b = psi[i | b0];
          psi[i] = r * a + m * b;
          psi[i | b0] = m * a + r * b;
        }
      break;
    }
    case GateKind::kRz: {
      const Complex lo = std::polar(1.0, -g.angle / 2);
      const Complex hi = std::polar(1.0, g.angle / 2);
      for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= (i & b0) ? hi : lo;
      break;
    }
    case GateKind::kCnot: {
      const std::size_t b1 = std::size_t{1} << (n_qubits - 1 - g.q1);
      for (std::size_t i = 0; i < psi.size(); ++i)
        if ((i & b0) && !(i & b1)) std::swap(psi[i], psi[i | b1]);
      break;
    }
  }
}

/// Unitary of a time-ordered gate list.
inline DenseOperator circuit_matrix(const std::vector<Gate>& gates, std::size_t n_qubits) {
  DenseOperator out(n_qubits);
  for (std::size_t c = 0; c < out.dim(); ++c) {
    StateVector col = basis_state(n_qubits, c);
    for (const auto& g : gates) apply_gate(g, col, n_qubits);
    for (std::size_t r = 0; r < out.dim(); ++r) out(r, c) = col[r];
  }
  return out;
}

}  // namespace upart
