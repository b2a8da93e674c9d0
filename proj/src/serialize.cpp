#include "forge/serialize.hpp"

#include "forge/error.hpp"

namespace forge {

using nlohmann::json;

namespace {

std::string_view optimizer_name(Optimizer o) {
  return o == Optimizer::kAdam ? "adam" : "gradient-descent";
}

Optimizer optimizer_from(const std::string& s) {
  if (s == "adam") return Optimizer::kAdam;
  if (s == "gradient-descent" || s == "gd") return Optimizer::kGradientDescent;
  throw ValidationError("unknown optimizer '" + s + "'");
}

std::string_view gradient_name(GradientMode m) {
  switch (m) {
    case GradientMode::kAuto:
      return "auto";
    case GradientMode::kShiftOnly:
      return "shift";
    case GradientMode::kFiniteDifference:
      return "finite-difference";
  }
  return "auto";
}

GradientMode gradient_from(const std::string& s) {
  if (s == "auto") return GradientMode::kAuto;
  if (s == "shift") return GradientMode::kShiftOnly;
  if (s == "finite-difference" || s == "fd") return GradientMode::kFiniteDifference;
  throw ValidationError("unknown gradient mode '" + s + "'");
}

template <typename T>
void read_opt(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

json optional_count(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::size_t> optional_count_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::size_t>();
}

}  // namespace

void to_json(json& j, const GenomeBlock& b) { j = {b.block_id, {b.a, b.b}}; }

void from_json(const json& j, GenomeBlock& b) {
  b.block_id = j.at(0).get<int>();
  b.a = j.at(1).at(0).get<std::size_t>();
  b.b = j.at(1).at(1).get<std::size_t>();
}

void to_json(json& j, const AnsatzGenome& g) { j = format_genome(g); }

void from_json(const json& j, AnsatzGenome& g) {
  if (j.is_string()) {
    g = extract_genome(j.get<std::string>());
  } else {
    g.blocks = j.get<std::vector<GenomeBlock>>();
  }
}

void to_json(json& j, const InitStrategy& s) {
  switch (s.kind) {
    case InitKind::kRandomUniform:
      j = {{"kind", "random"}};
      break;
    case InitKind::kConstant:
      j = {{"kind", "constant"}, {"value", s.value}};
      break;
    case InitKind::kVqeI:
      j = {{"kind", "vqe-i"}};
      break;
  }
}

void from_json(const json& j, InitStrategy& s) {
  const auto kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  if (kind == "random") {
    s = InitStrategy::random_uniform();
  } else if (kind == "constant") {
    s = InitStrategy::constant(j.is_object() ? j.value("value", 0.0) : 0.0);
  } else if (kind == "vqe-i") {
    s = InitStrategy::vqe_i();
  } else {
    throw ValidationError("unknown init strategy '" + kind + "'");
  }
}

void to_json(json& j, const TrainConfig& c) {
  j = {{"optimizer", optimizer_name(c.optimizer)},
       {"learning_rate", c.learning_rate},
       {"max_epochs", c.max_epochs},
       {"convergence_tol", c.convergence_tol},
       {"convergence_window", c.convergence_window},
       {"init", c.init},
       {"seed", c.seed},
       {"gradient", gradient_name(c.gradient_mode)},
       {"fd_step", c.fd_step}};
}

void from_json(const json& j, TrainConfig& c) {
  if (j.contains("optimizer")) c.optimizer = optimizer_from(j.at("optimizer").get<std::string>());
  read_opt(j, "learning_rate", c.learning_rate);
  read_opt(j, "max_epochs", c.max_epochs);
  read_opt(j, "convergence_tol", c.convergence_tol);
  read_opt(j, "convergence_window", c.convergence_window);
  read_opt(j, "init", c.init);
  read_opt(j, "seed", c.seed);
  if (j.contains("gradient")) c.gradient_mode = gradient_from(j.at("gradient").get<std::string>());
  read_opt(j, "fd_step", c.fd_step);
}

void to_json(json& j, const EpochEnergy& e) { j = {{"epoch", e.epoch}, {"energy", e.energy}}; }

void from_json(const json& j, EpochEnergy& e) {
  e.epoch = j.at("epoch").get<std::size_t>();
  e.energy = j.at("energy").get<double>();
}

void to_json(json& j, const TrainReport& r) {
  j = {{"trajectory", r.trajectory},
       {"epochs_run", r.epochs_run},
       {"epochs_to_converge", optional_count(r.epochs_to_converge)},
       {"final_energy", r.final_energy},
       {"best_params", r.best_params},
       {"best_energy", r.best_energy},
       {"gate_count", r.gate_count}};
}

void from_json(const json& j, TrainReport& r) {
  r.trajectory = j.at("trajectory").get<std::vector<EpochEnergy>>();
  r.epochs_run = j.at("epochs_run").get<std::size_t>();
  r.epochs_to_converge = optional_count_from(j, "epochs_to_converge");
  r.final_energy = j.at("final_energy").get<double>();
  r.best_params = j.at("best_params").get<std::vector<double>>();
  r.best_energy = j.at("best_energy").get<double>();
  r.gate_count = j.at("gate_count").get<std::size_t>();
}

void to_json(json& j, const SearchConfig& c) {
  j = {{"n_blocks", c.n_blocks},
       {"n_qubits", c.n_qubits},
       {"max_iterations", c.max_iterations},
       {"task_description", c.task_description},
       {"task_noun", c.task_noun},
       {"max_parse_retries", c.max_parse_retries}};
}

void from_json(const json& j, SearchConfig& c) {
  read_opt(j, "n_blocks", c.n_blocks);
  read_opt(j, "n_qubits", c.n_qubits);
  read_opt(j, "max_iterations", c.max_iterations);
  read_opt(j, "task_description", c.task_description);
  read_opt(j, "task_noun", c.task_noun);
  read_opt(j, "max_parse_retries", c.max_parse_retries);
}

void to_json(json& j, const HistoryEntry& e) {
  j = {{"iteration", e.iteration},
       {"genome", e.genome},
       {"raw_value", e.raw_value},
       {"gate_count", e.gate_count},
       {"epochs", e.epochs},
       {"epochs_to_converge", optional_count(e.epochs_to_converge)},
       {"normalized", e.normalized},
       {"rejected", e.rejected},
       {"params", e.params}};
}

void from_json(const json& j, HistoryEntry& e) {
  e.iteration = j.at("iteration").get<std::size_t>();
  e.genome = j.at("genome").get<AnsatzGenome>();
  e.raw_value = j.at("raw_value").get<double>();
  e.gate_count = j.at("gate_count").get<std::size_t>();
  e.epochs = j.at("epochs").get<std::size_t>();
  e.epochs_to_converge = optional_count_from(j, "epochs_to_converge");
  e.normalized = j.at("normalized").get<double>();
  e.rejected = j.value("rejected", false);
  e.params = j.value("params", std::vector<double>{});
}

void to_json(json& j, const FeedbackNote& n) {
  j = {{"iteration", n.iteration}, {"text", n.text}};
}

void from_json(const json& j, FeedbackNote& n) {
  n.iteration = j.at("iteration").get<std::size_t>();
  n.text = j.at("text").get<std::string>();
}

void to_json(json& j, const SearchHistory& h) {
  j = {{"entries", h.entries()}, {"feedback_notes", h.notes()}};
}

void from_json(const json& j, SearchHistory& h) {
  h = SearchHistory{};
  for (const auto& e : j.at("entries")) h.add(e.get<HistoryEntry>());
  for (const auto& n : j.at("feedback_notes")) h.add_note(n.get<FeedbackNote>());
}

void to_json(json& j, const IterationRecord& r) {
  j = {{"index", r.index},
       {"outcome", r.outcome == IterationRecord::Outcome::kEvaluated ? "evaluated" : "skipped"},
       {"started_at", r.started_at},
       {"finished_at", r.finished_at},
       {"prompts", r.prompts},
       {"replies", r.replies},
       {"error", r.error}};
}

void from_json(const json& j, IterationRecord& r) {
  r.index = j.at("index").get<std::size_t>();
  r.outcome = j.at("outcome").get<std::string>() == "evaluated"
                  ? IterationRecord::Outcome::kEvaluated
                  : IterationRecord::Outcome::kSkipped;
  r.started_at = j.at("started_at").get<std::string>();
  r.finished_at = j.at("finished_at").get<std::string>();
  r.prompts = j.at("prompts").get<std::vector<std::string>>();
  r.replies = j.at("replies").get<std::vector<std::string>>();
  r.error = j.value("error", std::string{});
}

SearchStatus search_status_from_string(std::string_view s) {
  for (auto status : {SearchStatus::kRunning, SearchStatus::kFinished, SearchStatus::kAborted,
                      SearchStatus::kNoCandidate}) {
    if (to_string(status) == s) return status;
  }
  throw ValidationError("unknown run status '" + std::string(s) + "'");
}

void to_json(json& j, const SearchReport& r) {
  j = {{"status", to_string(r.status)},
       {"best", r.best ? json(*r.best) : json(nullptr)},
       {"history", r.history},
       {"iterations", r.iterations},
       {"config", r.config},
       {"train", r.train},
       {"error", r.error}};
}

void from_json(const json& j, SearchReport& r) {
  r.status = search_status_from_string(j.at("status").get<std::string>());
  r.best = j.at("best").is_null() ? std::nullopt : std::optional(j.at("best").get<HistoryEntry>());
  r.history = j.at("history").get<SearchHistory>();
  r.iterations = j.at("iterations").get<std::vector<IterationRecord>>();
  r.config = j.at("config").get<SearchConfig>();
  r.train = j.at("train").get<TrainConfig>();
  r.error = j.value("error", std::string{});
}

json error_json(std::string_view kind, std::string_view message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace forge
