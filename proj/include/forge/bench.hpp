#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/problem_io.hpp"
#include "forge/search.hpp"
#include "forge/vqe.hpp"

namespace forge {

struct BenchConfig {
  TrainConfig train;
  std::size_t search_iterations = 10;
  std::size_t n_blocks = AnsatzGenome::kDefaultLength;
  std::uint64_t proposer_seed = 7;
  std::vector<std::size_t> two_local_reps{2, 3, 5};
  std::vector<std::size_t> real_amplitudes_reps{2, 3};
};

struct BenchRow {
  std::string ansatz;  // TwoLocal | RealAmplitudes | search-best
  std::size_t reps = 0;  // 0 for search-best
  std::string genome;    // search-best only
  std::size_t gate_count = 0;
  double value = 0.0;
  std::size_t epochs_run = 0;
};

struct BenchResult {
  std::string problem;
  std::size_t n_qubits = 0;
  double reference = 0.0;
  std::string reference_bitstring;
  std::vector<BenchRow> rows;

  /// Lowest value among the baseline rows.
  double best_baseline_value() const;
  const BenchRow& search_best() const;
};

/// Portfolio, Max-Cut and TSP fixture paths under `data_dir`.
std::vector<std::filesystem::path> bench_fixture_files(const std::filesystem::path& data_dir);

/// Directory holding the bundled fixtures of this build.
std::filesystem::path default_data_dir();

/// Trains every baseline and a seeded random-proposer search on one
/// classical problem. `on_train` sees every training report.
BenchResult run_bench(const Problem& problem, const BenchConfig& cfg,
                      const std::function<void(const TrainReport&)>& on_train = {});

nlohmann::json bench_json(const std::vector<BenchResult>& results);
std::string bench_table(const std::vector<BenchResult>& results);

}  // namespace forge
