#include "forge/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "forge/error.hpp"
#include "forge/llm.hpp"
#include "forge/run_store.hpp"

#ifndef FORGE_DATA_DIR
#define FORGE_DATA_DIR "data"
#endif

namespace forge {

using nlohmann::json;

double BenchResult::best_baseline_value() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (r.ansatz != "search-best") best = std::min(best, r.value);
  }
  return best;
}

const BenchRow& BenchResult::search_best() const {
  for (const auto& r : rows) {
    if (r.ansatz == "search-best") return r;
  }
  throw ValidationError("bench result has no search-best row");
}

std::filesystem::path default_data_dir() { return FORGE_DATA_DIR; }

std::vector<std::filesystem::path> bench_fixture_files(const std::filesystem::path& data_dir) {
  const auto dir = data_dir / "fixtures";
  return {dir / "portfolio4.json", dir / "maxcut5.json", dir / "tsp3.json"};
}

BenchResult run_bench(const Problem& problem, const BenchConfig& cfg,
                      const std::function<void(const TrainReport&)>& on_train) {
  if (!problem.qp) throw ValidationError("bench needs a problem with a quadratic program");
  const Hamiltonian& h = problem.hamiltonian;
  const std::size_t n = h.n_qubits();

  BenchResult result;
  result.problem = problem.name;
  result.n_qubits = n;
  const auto reference = brute_force_min(*problem.qp);
  result.reference = reference.value;
  result.reference_bitstring = reference.bitstring;

  auto add_baseline = [&](const char* name, std::size_t reps, const Circuit& c) {
    const TrainReport t = train(c, h, cfg.train);
    if (on_train) on_train(t);
    result.rows.push_back({name, reps, {}, t.gate_count, t.final_energy, t.epochs_run});
  };
  for (auto reps : cfg.two_local_reps) add_baseline("TwoLocal", reps, two_local(n, reps));
  for (auto reps : cfg.real_amplitudes_reps) {
    add_baseline("RealAmplitudes", reps, real_amplitudes(n, reps));
  }

  SearchConfig scfg;
  scfg.n_qubits = n;
  scfg.n_blocks = cfg.n_blocks;
  scfg.max_iterations = cfg.search_iterations;
  scfg = complete_search_config(scfg, problem);
  RandomProposer proposer(cfg.proposer_seed, n, scfg.n_blocks);
  SearchHooks hooks;
  hooks.clock = [] { return std::string{}; };
  hooks.on_train = on_train;
  const SearchReport report = run_search(h, proposer, cfg.train, scfg, nullptr, hooks);
  if (!report.best) throw NumericalError(0, "search produced no candidate");
  const auto& best = *report.best;
  result.rows.push_back(
      {"search-best", 0, format_genome(best.genome), best.gate_count, best.raw_value, best.epochs});
  return result;
}

json bench_json(const std::vector<BenchResult>& results) {
  json out = json::array();
  for (const auto& r : results) {
    json rows = json::array();
    for (const auto& row : r.rows) {
      json j = {{"ansatz", row.ansatz},
                {"GateCounts", row.gate_count},
                {"Value", row.value},
                {"Reference", r.reference},
                {"epochs", row.epochs_run}};
      if (row.reps > 0) j["reps"] = row.reps;
      if (!row.genome.empty()) j["genome"] = row.genome;
      rows.push_back(std::move(j));
    }
    out.push_back({{"problem", r.problem},
                   {"n_qubits", r.n_qubits},
                   {"reference", r.reference},
                   {"reference_bitstring", r.reference_bitstring},
                   {"rows", rows}});
  }
  return {{"bench", out}};
}

std::string bench_table(const std::vector<BenchResult>& results) {
  std::string out;
  char line[256];
  for (const auto& r : results) {
    std::snprintf(line, sizeof(line), "%s (%zu qubits)\n", r.problem.c_str(), r.n_qubits);
    out += line;
    std::snprintf(line, sizeof(line), "  %-24s %5s %10s %16s %16s\n", "Ansatz", "Reps",
                  "GateCounts", "Value", "Reference");
    out += line;
    for (const auto& row : r.rows) {
      const std::string reps = row.reps > 0 ? std::to_string(row.reps) : "-";
      std::snprintf(line, sizeof(line), "  %-24s %5s %10zu %16.6f %16.6f\n", row.ansatz.c_str(),
                    reps.c_str(), row.gate_count, row.value, r.reference);
      out += line;
    }
    for (const auto& row : r.rows) {
      if (!row.genome.empty()) out += "  search-best genome: " + row.genome + "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace forge
