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

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "upart/error.hpp"
#include "upart/hamiltonian.hpp"
#include "upart/measure.hpp"
#include "upart/partition.hpp"
#include "upart/rotation.hpp"

namespace upart {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

inline Json to_json(const PauliHamiltonian& h) {
  Json terms = Json::array();
  for (const auto& t : h.terms()) terms.push_back({{"coeff", t.coeff}, {"word", t.op.word()}});
  return {{"n_qubits", h.n_qubits()}, {"identity_offset", h.identity_offset()}, {"terms", std::move(terms)}};
}

inline PauliHamiltonian hamiltonian_from_json(const Json& j) {
  try {
    const std::size_t n = j.at("n_qubits").get<std::size_t>();
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
      PauliString op = PauliString::from_text(t.at("word").get<std::string>());
      if (op.n_qubits() != n) throw InputError("term word length does not match n_qubits");
      terms.push_back({t.at("coeff").get<double>(), std::move(op)});
    }
    return PauliHamiltonian(n, std::move(terms), j.at("identity_offset").get<double>());
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed hamiltonian JSON: ") + e.what());
  }
}

inline Json to_json(const AnticommutingPartition& p, const PauliHamiltonian& h) {
  Json sets = Json::array();
  for (std::size_t l = 0; l < p.size(); ++l) {
    Json words = Json::array();
    for (auto j : p.sets[l]) words.push_back(h.term(j).op.word());
    sets.push_back({{"indices", p.sets[l]},
                    {"words", std::move(words)},
                    {"gamma", p.gammas[l]},
                    {"betas", p.betas[l]},
                    {"size", p.sets[l].size()}});
  }
  return {{"set_count", p.size()}, {"s_max", p.max_set_size()}, {"sets", std::move(sets)}};
}

/// Reads sets and stored gamma/beta values without recomputing them.
inline AnticommutingPartition partition_from_json(const Json& j) {
  try {
    AnticommutingPartition p;
    for (const auto& s : j.at("sets")) {
      p.sets.push_back(s.at("indices").get<std::vector<std::size_t>>());
      p.gammas.push_back(s.at("gamma").get<double>());
      p.betas.push_back(s.at("betas").get<std::vector<double>>());
    }
    return p;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed partition JSON: ") + e.what());
  }
}

inline Json to_json(const CircuitEstimate& e) {
  return {{"per_step_gates", e.per_step_gates},
          {"total_gates", e.total_gates},
          {"cnot_count", e.cnot_count},
          {"single_qubit_count", e.single_qubit_count},
          {"compiled_gates", e.compiled_gates}};
}

inline Json to_json(const RotationPlan& plan) {
  Json steps = Json::array();
  for (const auto& s : plan.steps) {
    Json gen = Json::array();
    for (const auto& t : s.generator) gen.push_back({{"coeff", t.coeff}, {"word", t.op.word()}});
    steps.push_back({{"generator", std::move(gen)}, {"angle", s.angle}});
  }
  Json out = {{"set_index", plan.set_index},
              {"mode", to_string(plan.mode)},
              {"sink", plan.sink.str()},
              {"steps", std::move(steps)}};
  if (plan.mode == RotationMode::kSequence) out["gates"] = to_json(gate_count(plan));
  return out;
}

inline Json to_json(const CostReport& r) {
  return {{"epsilon", r.epsilon},
          {"lambda_before", r.lambda_before},
          {"lambda_after", r.lambda_after},
          {"s_max", r.s_max},
          {"shot_bound_before", r.shot_bound_before},
          {"shot_bound_after", r.shot_bound_after},
          {"bounds_hold", r.bounds_hold}};
}

/// Core partition report; callers may append further keys.
inline Json partition_report(const PauliHamiltonian& h, const AnticommutingPartition& p,
                             const std::vector<RotationPlan>& plans, const std::optional<CostReport>& cost) {
  Json out = {{"schema_version", kReportSchemaVersion},
              {"term_count_before", h.size()},
              {"term_count_after", p.size()},
              {"hamiltonian", to_json(h)},
              {"partition", to_json(p, h)}};
  if (!plans.empty()) {
    Json arr = Json::array();
    for (const auto& plan : plans) arr.push_back(to_json(plan));
    out["plans"] = std::move(arr);
  }
  if (cost) out["measurement_cost"] = to_json(*cost);
  return out;
}

/**
 * Checks a partition report against itself: the embedded Hamiltonian must
 * re-canonicalize to the same terms, the partition must validate against it
 * and every stored plan must match the plan rebuilt from the partition.
 */
inline ValidationResult validate_partition_report(const Json& report) {
  auto fail = [](std::string msg) { return ValidationResult{false, std::move(msg)}; };
  try {
    if (report.at("schema_version").get<int>() != kReportSchemaVersion) return fail("unsupported schema_version");
    const PauliHamiltonian h = hamiltonian_from_json(report.at("hamiltonian"));
    if (to_json(h) != report.at("hamiltonian")) return fail("embedded hamiltonian is not canonical");
    const AnticommutingPartition p = partition_from_json(report.at("partition"));
    if (auto v = validate(p, h); !v) return v;
    if (report.at("term_count_after").get<std::size_t>() != p.size()) return fail("term_count_after mismatch");
    if (report.at("term_count_before").get<std::size_t>() != h.size()) return fail("term_count_before mismatch");
    if (report.contains("plans")) {
      const auto& plans = report.at("plans");
      if (plans.size() != p.size()) return fail("plan count does not match set count");
      for (std::size_t l = 0; l < p.size(); ++l) {
        const auto mode = plans[l].at("mode").get<std::string>() == "single" ? RotationMode::kSingle
                                                                              : RotationMode::kSequence;
        const Json rebuilt = to_json(build_plan(h, p, l, mode));
        const auto& stored = plans[l];
        if (rebuilt.at("sink") != stored.at("sink") || rebuilt.at("steps").size() != stored.at("steps").size()) {
          return fail("plan " + std::to_string(l) + " does not match its set");
        }
        for (std::size_t k = 0; k < stored.at("steps").size(); ++k) {
          const double a = stored["steps"][k].at("angle").get<double>();
          const double b = rebuilt["steps"][k].at("angle").get<double>();
          if (std::abs(a - b) > 1e-12) return fail("plan " + std::to_string(l) + " angle mismatch");
        }
      }
    }
    if (report.contains("measurement_cost")) {
      const auto& mc = report.at("measurement_cost");
      const CostReport fresh = cost_report(h, p, mc.at("epsilon").get<double>());
      if (std::abs(fresh.lambda_after - mc.at("lambda_after").get<double>()) > 1e-12 * std::max(1.0, fresh.lambda_after)) {
        return fail("measurement cost does not match partition");
      }
    }
  } catch (const Json::exception& e) {
    return fail(std::string("malformed report: ") + e.what());
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return {};
}

}  // namespace upart
