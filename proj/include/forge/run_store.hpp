#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "forge/llm.hpp"
#include "forge/problem_io.hpp"
#include "forge/search.hpp"

namespace forge {

enum class ProposerKind { kLlm, kRandom, kExhaustive };

struct ProposerSpec {
  ProposerKind kind = ProposerKind::kRandom;
  std::uint64_t seed = 7;
  std::vector<int> allowed_ids{0, 1, 2, 3, 4, 5};
  LlmConfig llm;
};

void to_json(nlohmann::json& j, const ProposerSpec& s);
void from_json(const nlohmann::json& j, ProposerSpec& s);

std::unique_ptr<Proposer> make_proposer(const ProposerSpec& spec, const SearchConfig& cfg);

/// Fills n_qubits and the task text from the problem where the caller left
/// them unset.
SearchConfig complete_search_config(SearchConfig cfg, const Problem& problem);

struct RunRecord {
  std::string run_id;
  std::string created_at;
  std::string problem_name;
  nlohmann::json problem;
  ProposerSpec proposer;
  SearchReport report;

  SearchStatus status() const { return report.status; }
};

void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);

/// One `<run_id>.json` per run under a directory.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  /// Unique id not yet present in the directory.
  std::string new_run_id();

  void save(const RunRecord& record) const;
  std::optional<RunRecord> load(const std::string& run_id) const;

  /// Every parseable record, oldest first. Records left in `running` by a
  /// dead process are rewritten as aborted.
  std::vector<RunRecord> load_all() const;

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
};

}  // namespace forge
