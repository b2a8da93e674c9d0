#include "forge/run_store.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "forge/error.hpp"
#include "forge/serialize.hpp"

namespace forge {

using nlohmann::json;

namespace {

std::string_view proposer_name(ProposerKind k) {
  switch (k) {
    case ProposerKind::kLlm:
      return "llm";
    case ProposerKind::kRandom:
      return "random";
    case ProposerKind::kExhaustive:
      return "exhaustive";
  }
  return "random";
}

}  // namespace

void to_json(json& j, const ProposerSpec& s) {
  j = {{"kind", proposer_name(s.kind)}, {"seed", s.seed}, {"allowed_ids", s.allowed_ids}};
  if (s.kind == ProposerKind::kLlm) {
    j["llm"] = {{"endpoint_url", s.llm.endpoint_url},
                {"model", s.llm.model},
                {"temperature", s.llm.temperature},
                {"max_retries", s.llm.max_retries},
                {"timeout_ms", s.llm.timeout.count()},
                {"api_key_env", s.llm.api_key_env}};
  }
}

void from_json(const json& j, ProposerSpec& s) {
  const auto kind = j.value("kind", std::string("random"));
  if (kind == "llm") {
    s.kind = ProposerKind::kLlm;
  } else if (kind == "random") {
    s.kind = ProposerKind::kRandom;
  } else if (kind == "exhaustive") {
    s.kind = ProposerKind::kExhaustive;
  } else {
    throw ValidationError("unknown proposer '" + kind + "'");
  }
  s.seed = j.value("seed", s.seed);
  s.allowed_ids = j.value("allowed_ids", s.allowed_ids);
  if (j.contains("llm")) {
    const auto& l = j.at("llm");
    s.llm.endpoint_url = l.value("endpoint_url", s.llm.endpoint_url);
    s.llm.model = l.value("model", s.llm.model);
    s.llm.temperature = l.value("temperature", s.llm.temperature);
    s.llm.max_retries = l.value("max_retries", s.llm.max_retries);
    s.llm.timeout = std::chrono::milliseconds(l.value("timeout_ms", s.llm.timeout.count()));
    s.llm.api_key_env = l.value("api_key_env", s.llm.api_key_env);
  }
}

std::unique_ptr<Proposer> make_proposer(const ProposerSpec& spec, const SearchConfig& cfg) {
  switch (spec.kind) {
    case ProposerKind::kLlm:
      return std::make_unique<LlmProposer>(spec.llm);
    case ProposerKind::kRandom:
      return std::make_unique<RandomProposer>(spec.seed, cfg.n_qubits, cfg.n_blocks,
                                              spec.allowed_ids);
    case ProposerKind::kExhaustive:
      return std::make_unique<ExhaustiveProposer>(cfg.n_qubits, cfg.n_blocks, spec.allowed_ids);
  }
  throw ValidationError("unknown proposer kind");
}

SearchConfig complete_search_config(SearchConfig cfg, const Problem& problem) {
  if (cfg.n_qubits == 0) cfg.n_qubits = problem.hamiltonian.n_qubits();
  if (cfg.task_description.empty()) cfg.task_description = problem.name;
  if (problem.kind != ProblemKind::kFermionic && cfg.task_noun == "molecule") {
    cfg.task_noun = "problem";
  }
  return cfg;
}

void to_json(json& j, const RunRecord& r) {
  j = {{"run_id", r.run_id},
       {"created_at", r.created_at},
       {"status", to_string(r.report.status)},
       {"problem_name", r.problem_name},
       {"problem", r.problem},
       {"proposer", r.proposer},
       {"report", r.report}};
}

void from_json(const json& j, RunRecord& r) {
  r.run_id = j.at("run_id").get<std::string>();
  r.created_at = j.at("created_at").get<std::string>();
  r.problem_name = j.value("problem_name", std::string{});
  r.problem = j.value("problem", json::object());
  r.proposer = j.at("proposer").get<ProposerSpec>();
  r.report = j.at("report").get<SearchReport>();
}

RunStore::RunStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create run directory " + dir_.string() + ": " + ec.message());
}

std::string RunStore::new_run_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu_);
  for (;;) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "run-%012llx",
                  static_cast<unsigned long long>(rng() & 0xffffffffffffULL));
    const std::string id = buf;
    const auto file = dir_ / (id + ".json");
    if (!std::filesystem::exists(file)) {
      write_text_file_atomic(file, "{}");
      return id;
    }
  }
}

void RunStore::save(const RunRecord& record) const {
  write_text_file_atomic(dir_ / (record.run_id + ".json"), json(record).dump(2) + "\n");
}

std::optional<RunRecord> RunStore::load(const std::string& run_id) const {
  const auto file = dir_ / (run_id + ".json");
  if (!std::filesystem::exists(file)) return std::nullopt;
  try {
    return json::parse(read_text_file(file)).get<RunRecord>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::vector<RunRecord> RunStore::load_all() const {
  std::vector<RunRecord> out;
  for (const auto& item : std::filesystem::directory_iterator(dir_)) {
    if (item.path().extension() != ".json") continue;
    RunRecord r;
    try {
      r = json::parse(read_text_file(item.path())).get<RunRecord>();
    } catch (const std::exception&) {
      continue;
    }
    if (r.report.status == SearchStatus::kRunning) {
      r.report.status = SearchStatus::kAborted;
      r.report.error = "interrupted: the serving process exited mid-run";
      save(r);
    }
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.created_at, a.run_id) < std::tie(b.created_at, b.run_id);
  });
  return out;
}

}  // namespace forge
