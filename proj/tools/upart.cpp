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

// upart: partition Pauli Hamiltonians into anticommuting sets.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "upart/upart.hpp"

namespace {

using upart::Json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitValidation = 3;
constexpr int kExitResidual = 4;

struct RunConfig {
  std::string input;
  std::string output;
  std::string strategy = "greedy";
  std::string mode = "sequence";
  std::optional<std::size_t> max_gates;
  double epsilon = 1e-3;
  std::uint64_t seed = 0;
  bool seeded = false;
  std::size_t restarts = 1;
  std::size_t refine = 100;
  std::size_t modes = 0;
  bool verify = false;
  bool timestamp = true;
};

class ResidualExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw upart::InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw upart::InputError("cannot write '" + path + "'");
  out << text;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

bool looks_like_integrals(const std::string& text) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (ls >> first) return first == "norb";
  }
  return false;
}

upart::RotationMode parse_mode(const std::string& m) {
  return m == "single" ? upart::RotationMode::kSingle : upart::RotationMode::kSequence;
}

struct Loaded {
  upart::PauliHamiltonian hamiltonian;
  std::optional<upart::AnticommutingPartition> quartic;
  std::string kind;
};

Loaded load_input(const RunConfig& cfg) {
  const std::string text = read_file(cfg.input);
  Loaded out;
  if (!looks_like_integrals(text)) {
    out.hamiltonian = upart::parse_hamiltonian(text);
    out.kind = "pauli";
    return out;
  }
  const auto mp = upart::to_majorana(upart::parse_integrals(text));
  out.kind = "integrals";
  if (cfg.strategy == "majorana") {
    auto t1 = upart::majorana_partition(mp);
    out.hamiltonian = std::move(t1.hamiltonian);
    out.quartic = std::move(t1.partition);
  } else {
    out.hamiltonian = upart::jordan_wigner(mp);
  }
  return out;
}

upart::AnticommutingPartition partition_with(const RunConfig& cfg, const Loaded& in) {
  const auto& h = in.hamiltonian;
  if (cfg.strategy == "greedy") {
    upart::ColoringOptions opts;
    if (cfg.seeded) opts.seed = cfg.seed;
    opts.restarts = cfg.restarts;
    opts.refine_passes = cfg.refine;
    return upart::greedy_color(h, opts);
  }
  if (cfg.strategy == "majorana") {
    if (!in.quartic) throw upart::InputError("strategy 'majorana' needs an integral file");
    return *in.quartic;
  }
  if (cfg.strategy == "tim") return upart::tim_pair_partition(h);
  const std::size_t modes = cfg.modes ? cfg.modes : h.n_qubits() / 2;
  return upart::dual_basis_partition(h, modes);
}

// Frobenius residual of R_S H_S R_S^dagger against the sink, per set.
Json verify_plans(const upart::PauliHamiltonian& h, const upart::AnticommutingPartition& p,
                  const std::vector<upart::RotationPlan>& plans) {
  if (h.n_qubits() > upart::kMaxDenseQubits) throw upart::InputError("--verify is capped at 12 qubits");
  constexpr double kTol = 1e-10;
  Json residuals = Json::array();
  double worst = 0.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    std::vector<upart::Term> hs;
    for (std::size_t k = 0; k < p.sets[l].size(); ++k) hs.push_back({p.betas[l][k], h.term(p.sets[l][k]).op});
    const auto rotated = upart::conjugate(plans[l], upart::to_matrix(hs, h.n_qubits()));
    const double r = upart::frobenius_distance(rotated, upart::to_matrix(plans[l].sink));
    residuals.push_back(r);
    worst = std::max(worst, r);
  }
  return {{"tolerance", kTol}, {"max_residual", worst}, {"passed", worst <= kTol}, {"residuals", residuals}};
}

int cmd_partition(const RunConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw upart::InputError("epsilon must be positive");
  const Loaded in = load_input(cfg);
  const auto& h = in.hamiltonian;
  auto p = partition_with(cfg, in);
  if (auto v = upart::validate(p, h); !v) throw upart::ValidationError("partition failed validation: " + v.message);
  if (cfg.max_gates) p = upart::budgeted_split(p, h, *cfg.max_gates).partition;
  const auto plans = upart::build_plans(h, p, parse_mode(cfg.mode));
  Json report = upart::partition_report(h, p, plans, upart::cost_report(h, p, cfg.epsilon));
  std::size_t total = 0;
  for (const auto& plan : plans)
    if (plan.mode == upart::RotationMode::kSequence) total += upart::gate_count(plan).compiled_gates;
  if (parse_mode(cfg.mode) == upart::RotationMode::kSequence) report["total_compiled_gates"] = total;
  report["config"] = {{"input", cfg.input},
                      {"input_kind", in.kind},
                      {"strategy", cfg.strategy},
                      {"mode", cfg.mode},
                      {"epsilon", cfg.epsilon},
                      {"seed", cfg.seeded ? Json(cfg.seed) : Json(nullptr)},
                      {"max_gates", cfg.max_gates ? Json(*cfg.max_gates) : Json(nullptr)}};
  bool residual_failed = false;
  if (cfg.verify) {
    report["verification"] = verify_plans(h, p, plans);
    residual_failed = !report["verification"]["passed"].get<bool>();
  }
  if (cfg.timestamp) report["generated_at"] = utc_now();
  write_output(cfg.output, report.dump(2) + "\n");
  std::cerr << "terms " << h.size() << " -> sets " << p.size() << "\n";
  if (residual_failed) throw ResidualExceeded("verification residual exceeded tolerance");
  return kExitOk;
}

int cmd_estimate(const RunConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw upart::InputError("epsilon must be positive");
  const Loaded in = load_input(cfg);
  const auto p = partition_with(cfg, in);
  const auto cost = upart::cost_report(in.hamiltonian, p, cfg.epsilon);
  Json out = upart::to_json(cost);
  out["shots_per_set"] = upart::shot_allocation(p.gammas, cfg.epsilon);
  out["set_count"] = p.size();
  out["term_count"] = in.hamiltonian.size();
  write_output(cfg.output, out.dump(2) + "\n");
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  Json report;
  try {
    report = Json::parse(read_file(cfg.input));
  } catch (const Json::parse_error& e) {
    throw upart::InputError(std::string("not JSON: ") + e.what());
  }
  if (auto v = upart::validate_partition_report(report); !v) throw upart::ValidationError(v.message);
  std::cout << "ok: " << report.at("term_count_before") << " terms in " << report.at("term_count_after")
            << " sets\n";
  return kExitOk;
}

int cmd_reduce(const RunConfig& cfg, const std::string& plans_path) {
  const auto h = upart::parse_hamiltonian(read_file(cfg.input));
  const auto red = upart::reduce_to_commuting(h);
  Json plans = Json::array();
  for (std::size_t j = 0; j < red.plans.size(); ++j) {
    Json entry = upart::to_json(red.plans[j]);
    entry["gamma"] = red.gammas[j];
    Json words = Json::array();
    for (auto k : red.structure.hitting_sets[j]) words.push_back(h.term(k).op.word());
    entry["words"] = std::move(words);
    plans.push_back(std::move(entry));
  }
  Json z = Json::array();
  for (auto k : red.structure.z_terms) z.push_back(h.term(k).op.word());
  Json doc = {{"schema_version", upart::kReportSchemaVersion},
              {"term_count_before", h.size()},
              {"term_count_after", red.hamiltonian.size()},
              {"universal_terms", std::move(z)},
              {"clique_count", red.structure.cliques.size()},
              {"plans", std::move(plans)}};
  if (cfg.timestamp) doc["generated_at"] = utc_now();
  write_output(cfg.output, upart::serialize(red.hamiltonian));
  if (!plans_path.empty()) write_output(plans_path, doc.dump(2) + "\n");
  return kExitOk;
}

struct GenerateArgs {
  std::size_t ring = 0;
  std::size_t regular = 0;
  std::size_t vertices = 0;
  double x = 1.0;
  std::size_t n = 0;
  std::size_t k = 2;
  std::size_t m = 0;
  std::size_t modes = 0;
  std::size_t r1 = 0;
  std::string partition_out;
};

int cmd_generate_tim(const RunConfig& cfg, const GenerateArgs& g) {
  upart::GraphSpec graph;
  if (g.ring && g.regular) throw upart::InputError("--ring and --regular are exclusive");
  if (g.ring) {
    graph = upart::GraphSpec::ring(g.ring);
  } else if (g.regular) {
    if (!g.vertices) throw upart::InputError("--regular needs --vertices");
    graph = upart::GraphSpec::random_regular(g.vertices, g.regular, cfg.seed);
  } else {
    throw upart::InputError("tim needs --ring or --regular");
  }
  write_output(cfg.output, upart::serialize(upart::tim_hamiltonian(graph, g.x)));
  return kExitOk;
}

int cmd_generate_random(const RunConfig& cfg, const GenerateArgs& g) {
  write_output(cfg.output, upart::serialize(upart::random_klocal(g.n, g.m, g.k, cfg.seed)));
  return kExitOk;
}

int cmd_generate_dual(const RunConfig& cfg, const GenerateArgs& g) {
  const auto d = upart::dual_basis_structure(g.modes, cfg.seed);
  write_output(cfg.output, upart::serialize(d.hamiltonian));
  Json doc = {{"schema_version", upart::kReportSchemaVersion},
              {"modes", g.modes},
              {"term_count", d.hamiltonian.size()},
              {"a_sets", d.a_sets},
              {"partition", upart::to_json(d.partition, d.hamiltonian)}};
  std::string path = g.partition_out;
  if (path.empty()) {
    if (cfg.output.empty() || cfg.output == "-") throw upart::InputError("dual needs -o or --partition-out");
    path = cfg.output + ".partition.json";
  }
  write_output(path, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_generate_noncontextual(const RunConfig& cfg, const GenerateArgs& g) {
  write_output(cfg.output, upart::serialize(upart::random_noncontextual(g.n, g.r1, cfg.seed)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition Pauli Hamiltonians into anticommuting sets"};
  app.require_subcommand(1);
  RunConfig cfg;
  GenerateArgs gen;
  std::string plans_path;
  std::size_t max_gates = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cfg.output, "Output path (stdout when omitted)");
    sub->add_flag("!--no-timestamp", cfg.timestamp, "Omit the generated_at field");
  };
  auto add_partitioning = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "Pauli Hamiltonian or integral file")->required()->check(CLI::ExistingFile);
    sub->add_option("--strategy", cfg.strategy)->check(CLI::IsMember({"greedy", "majorana", "tim", "dual"}));
    sub->add_option("--epsilon", cfg.epsilon, "Target precision")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Seed for randomized tie-breaking");
    sub->add_option("--restarts", cfg.restarts)->check(CLI::PositiveNumber);
    sub->add_option("--refine", cfg.refine, "Iterated-greedy passes after coloring");
    sub->add_option("--modes", cfg.modes, "Orbitals per spin sector for --strategy dual");
  };

  auto* part = app.add_subcommand("partition", "Partition a Hamiltonian and emit a JSON report");
  add_partitioning(part);
  add_common(part);
  auto* gates_opt = part->add_option("--max-gates", max_gates, "Per-set compiled gate budget");
  part->add_option("--mode", cfg.mode)->check(CLI::IsMember({"sequence", "single"}));
  part->add_flag("--verify", cfg.verify, "Check every rotation on the dense simulator");

  auto* est = app.add_subcommand("estimate", "Measurement cost before and after partitioning");
  add_partitioning(est);
  add_common(est);

  auto* ver = app.add_subcommand("verify", "Re-validate a partition report");
  ver->add_option("report", cfg.input)->required()->check(CLI::ExistingFile);

  auto* red = app.add_subcommand("reduce-noncontextual", "Map a noncontextual Hamiltonian to a commuting one");
  red->add_option("input", cfg.input)->required()->check(CLI::ExistingFile);
  red->add_option("--plans", plans_path, "Rotation plans JSON output");
  add_common(red);

  auto* generate = app.add_subcommand("generate", "Write a generated Hamiltonian");
  generate->require_subcommand(1);
  auto* g_tim = generate->add_subcommand("tim", "Transverse Ising model");
  g_tim->add_option("--ring", gen.ring, "Ring length");
  g_tim->add_option("--regular", gen.regular, "Random q-regular graph degree");
  g_tim->add_option("--vertices", gen.vertices);
  g_tim->add_option("--x", gen.x, "Transverse field");
  auto* g_rand = generate->add_subcommand("random", "Random k-local Hamiltonian");
  g_rand->add_option("--n", gen.n)->required();
  g_rand->add_option("--k", gen.k);
  g_rand->add_option("--m", gen.m)->required();
  auto* g_dual = generate->add_subcommand("dual", "Dual-basis structural Hamiltonian");
  g_dual->add_option("--modes", gen.modes)->required();
  g_dual->add_option("--partition-out", gen.partition_out);
  auto* g_nc = generate->add_subcommand("noncontextual", "Random noncontextual Hamiltonian");
  g_nc->add_option("--n", gen.n)->required();
  g_nc->add_option("--r1", gen.r1)->required();
  for (auto* sub : {g_tim, g_rand, g_dual, g_nc}) {
    sub->add_option("--seed", cfg.seed);
    sub->add_option("-o,--output", cfg.output);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  cfg.seeded = part->count("--seed") + est->count("--seed") > 0;
  if (gates_opt->count()) cfg.max_gates = max_gates;
  if (cfg.max_gates && cfg.mode == "single") {
    std::cerr << "error: --max-gates applies to sequence mode\n";
    return kExitInput;
  }

  try {
    if (*part) return cmd_partition(cfg);
    if (*est) return cmd_estimate(cfg);
    if (*ver) return cmd_verify(cfg);
    if (*red) return cmd_reduce(cfg, plans_path);
    if (*g_tim) return cmd_generate_tim(cfg, gen);
    if (*g_rand) return cmd_generate_random(cfg, gen);
    if (*g_dual) return cmd_generate_dual(cfg, gen);
    if (*g_nc) return cmd_generate_noncontextual(cfg, gen);
  } catch (const upart::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const upart::ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ResidualExceeded& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitResidual;
  }
  return kExitInput;
}
