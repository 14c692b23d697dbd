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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "upart/error.hpp"
#include "upart/hamiltonian.hpp"
#include "upart/partition.hpp"
#include "upart/rotation.hpp"
#include "upart/simulator.hpp"

namespace upart {

/// M_j = |a_j| s_j (sum_k |a_k| s_k) / eps^2. Sigmas default to 1.
inline std::vector<double> shot_allocation(std::span<const double> coeffs, std::span<const double> sigmas,
                                           double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!sigmas.empty() && sigmas.size() != coeffs.size()) throw InputError("sigma count does not match coefficients");
  std::vector<double> weights(coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double s = sigmas.empty() ? 1.0 : sigmas[j];
    if (!(s >= 0.0 && s <= 1.0)) throw InputError("sigma " + std::to_string(s) + " outside [0, 1]");
    weights[j] = std::abs(coeffs[j]) * s;
  }
  double total = 0.0;
  for (double w : weights) total += w;
  const double scale = total / (epsilon * epsilon);
  std::vector<double> out(coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) out[j] = weights[j] * scale;
  return out;
}

inline std::vector<double> shot_allocation(std::span<const double> coeffs, double epsilon) {
  return shot_allocation(coeffs, {}, epsilon);
}

struct CostReport {
  double lambda_before = 0.0;
  double lambda_after = 0.0;
  std::size_t s_max = 0;
  double shot_bound_before = 0.0;
  double shot_bound_after = 0.0;
  double epsilon = 0.0;
  /// Lambda / sqrt(s_max) <= Lambda_c <= Lambda, each within 1e-12 relative.
  bool bounds_hold = true;
};

inline CostReport cost_report(const PauliHamiltonian& h, const AnticommutingPartition& p, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (auto v = validate(p, h); !v) throw ValidationError("invalid partition: " + v.message);
  CostReport r;
  r.epsilon = epsilon;
  r.lambda_before = l1_norm(h);
  for (double g : p.gammas) r.lambda_after += g;
  r.s_max = p.max_set_size();
  const double e2 = epsilon * epsilon;
  r.shot_bound_before = r.lambda_before * r.lambda_before / e2;
  r.shot_bound_after = r.lambda_after * r.lambda_after / e2;
  const double tol = 1e-12 * std::max(1.0, r.lambda_before);
  const double lower = r.s_max > 0 ? r.lambda_before / std::sqrt(static_cast<double>(r.s_max)) : 0.0;
  r.bounds_hold = r.lambda_after <= r.lambda_before + tol && lower <= r.lambda_after + tol;
  return r;
}

/// Per-set sigma = sqrt(1 - <psi|H_S|psi>^2), with H_S evaluated as R_S^dagger P_s R_S.
inline std::vector<double> variance_given_state(const PauliHamiltonian& h, const AnticommutingPartition& p,
                                                const StateVector& psi) {
  if (h.n_qubits() > kMaxDenseQubits) throw InputError("state evaluation is capped at 12 qubits");
  if (psi.size() != (std::size_t{1} << h.n_qubits())) throw InputError("state dimension does not match Hamiltonian");
  if (std::abs(norm(psi) - 1.0) > kDenseTolerance) throw InputError("state is not normalized");
  std::vector<double> sigmas;
  sigmas.reserve(p.size());
  for (std::size_t l = 0; l < p.size(); ++l) {
    const RotationPlan plan = build_plan(h, p, l);
    const double e = expectation(plan.sink, upart::apply(plan, psi));
    sigmas.push_back(std::sqrt(std::max(0.0, 1.0 - e * e)));
  }
  return sigmas;
}

}  // namespace upart
