#include "forge/search.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <limits>
#include <regex>
#include <sstream>

#include "forge/error.hpp"

namespace forge {

namespace {

constexpr std::string_view kSystemPrompt =
    "You are an expert in the field of quantum computing, especially for quantum architecture "
    "design.";

constexpr std::string_view kOutputRequest =
    "Please output an ID list for the ansatz as well as the selected qubits for each block.";

constexpr std::string_view kFormatExample =
    "For example: {[1, (0,1)], [2, (1,2)], ...., [0,(4,5)]} means we use operation 1 for "
    "block1 and the block1 is on qubits(0,1), operation2 for block2 and block2 is on "
    "qubits(1,2), ...,operation 0 for block6 and the block6 is on qubits(4,5).";

std::string format_number(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

}  // namespace

void SearchConfig::validate() const {
  if (n_blocks < 1) throw ValidationError("n_blocks must be at least 1");
  if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (n_qubits < 2) throw ValidationError("blocks need at least 2 qubits");
}

void normalize(std::vector<HistoryEntry>& entries) {
  if (entries.empty()) return;
  const auto [lo, hi] = std::minmax_element(
      entries.begin(), entries.end(),
      [](const HistoryEntry& a, const HistoryEntry& b) { return a.raw_value < b.raw_value; });
  const double min = lo->raw_value;
  const double span = hi->raw_value - min;
  for (auto& e : entries) e.normalized = span > 0.0 ? (e.raw_value - min) / span : 0.0;
}

void SearchHistory::add(HistoryEntry entry) {
  entries_.push_back(std::move(entry));
  normalize(entries_);
}

bool SearchHistory::set_rejected(std::size_t iteration, bool rejected) {
  for (auto& e : entries_) {
    if (e.iteration == iteration) {
      e.rejected = rejected;
      return true;
    }
  }
  return false;
}

std::optional<std::size_t> SearchHistory::best_index() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.rejected) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& b = entries_[*best];
    if (e.raw_value < b.raw_value ||
        (e.raw_value == b.raw_value && e.gate_count < b.gate_count)) {
      best = i;
    }
  }
  return best;
}

std::string format_history_line(const HistoryEntry& e) {
  std::string line = "design: " + format_genome(e.genome) +
                     " -> value: " + format_number(e.raw_value, 10) +
                     ", gates: " + std::to_string(e.gate_count) +
                     ", normalized: " + format_number(e.normalized, 6);
  if (e.rejected) line += " (rejected by reviewer)";
  return line;
}

PromptBundle build_prompt(const SearchHistory& history, const SearchConfig& cfg,
                          std::span<const BlockTemplate> design_space) {
  std::ostringstream user;
  user << "Your task is to help select the best ansatz for variational quantum eigensolver to "
          "compute the ground state energy of "
       << cfg.task_description << ' ' << cfg.task_noun << ". The ansatz works on "
       << cfg.n_qubits << " qubits and contains " << cfg.n_blocks
       << " blocks. For each block, there are " << design_space.size()
       << " types of operations to choose from:\n";
  for (const auto& t : design_space) user << t.id << ": " << t.description << '\n';
  user << kOutputRequest << '\n' << kFormatExample << '\n';

  if (!history.entries().empty()) {
    user << "\nExplored designs so far (normalized performance: 0 is the best, 1 the worst):\n";
    for (const auto& e : history.entries()) user << format_history_line(e) << '\n';
  }
  if (!history.notes().empty()) {
    user << "\nFeedback from the human reviewer:\n";
    for (const auto& note : history.notes()) user << note.text << '\n';
  }
  return {std::string(kSystemPrompt), user.str()};
}

AnsatzGenome extract_genome(std::string_view text) {
  static const std::regex kBlock(R"(\[\s*(-?\d+)\s*,\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*\])");
  AnsatzGenome g;
  const std::string s(text);
  auto to_int = [](const std::string& digits) -> long long {
    try {
      return std::stoll(digits);
    } catch (const std::out_of_range&) {
      return std::numeric_limits<long long>::max();
    }
  };
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kBlock); it != std::sregex_iterator();
       ++it) {
    const long long id = to_int((*it)[1]);
    const long long a = to_int((*it)[2]);
    const long long b = to_int((*it)[3]);
    GenomeBlock block;
    block.block_id = static_cast<int>(std::clamp<long long>(id, -1, 1 << 20));
    // Negative indices wrap to huge values and fail range validation.
    block.a = static_cast<std::size_t>(a);
    block.b = static_cast<std::size_t>(b);
    g.blocks.push_back(block);
  }
  return g;
}

AnsatzGenome parse_proposal(std::string_view text, const SearchConfig& cfg) {
  AnsatzGenome g = extract_genome(text);
  validate_genome(g, cfg.n_qubits);
  if (g.blocks.size() != cfg.n_blocks) {
    throw FormatError("expected " + std::to_string(cfg.n_blocks) + " blocks of the form [id, (a,b)], found " +
                      std::to_string(g.blocks.size()) + " in reply: " + std::string(text));
  }
  return g;
}

void FeedbackMailbox::post_note(std::string text) {
  std::lock_guard lock(mu_);
  queue_.push_back({FeedbackEvent::Kind::kNote, std::move(text), 0, true});
}

void FeedbackMailbox::post_decision(std::size_t iteration, bool accept) {
  std::lock_guard lock(mu_);
  queue_.push_back({FeedbackEvent::Kind::kDecision, {}, iteration, accept});
}

std::vector<FeedbackEvent> FeedbackMailbox::drain() {
  std::lock_guard lock(mu_);
  std::vector<FeedbackEvent> out(std::make_move_iterator(queue_.begin()),
                                 std::make_move_iterator(queue_.end()));
  queue_.clear();
  return out;
}

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::kRunning:
      return "running";
    case SearchStatus::kFinished:
      return "finished";
    case SearchStatus::kAborted:
      return "aborted";
    case SearchStatus::kNoCandidate:
      return "no-candidate";
  }
  return "unknown";
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms));
  return buf;
}

void refresh_best(SearchReport& report) {
  const auto best = report.history.best_index();
  report.best = best ? std::optional(report.history.entries()[*best]) : std::nullopt;
}

void apply_feedback(SearchReport& report, FeedbackSource& feedback, std::size_t iteration) {
  for (auto& event : feedback.drain()) {
    if (event.kind == FeedbackEvent::Kind::kNote) {
      report.history.add_note({iteration, std::move(event.text)});
    } else {
      report.history.set_rejected(event.iteration, !event.accept);
    }
  }
  refresh_best(report);
}

SearchReport run_search(const Hamiltonian& h, Proposer& proposer, const TrainConfig& train_cfg,
                        const SearchConfig& cfg, FeedbackSource* feedback,
                        const SearchHooks& hooks) {
  cfg.validate();
  train_cfg.validate();
  if (h.n_qubits() != cfg.n_qubits) {
    throw ValidationError("search configured for " + std::to_string(cfg.n_qubits) +
                          " qubits, Hamiltonian has " + std::to_string(h.n_qubits()));
  }
  const auto clock = hooks.clock ? hooks.clock : utc_timestamp;
  auto notify = [&](const SearchReport& r) {
    if (hooks.on_iteration) hooks.on_iteration(r);
  };

  SearchReport report;
  report.config = cfg;
  report.train = train_cfg;

  bool exhausted = false;
  for (std::size_t k = 0; k < cfg.max_iterations && !exhausted; ++k) {
    if (hooks.stop.stop_requested()) {
      report.status = SearchStatus::kAborted;
      report.error = "stopped";
      break;
    }
    if (feedback) apply_feedback(report, *feedback, k);

    IterationRecord rec;
    rec.index = k;
    rec.started_at = clock();
    const PromptBundle prompt = build_prompt(report.history, cfg);
    std::optional<AnsatzGenome> genome;
    std::string last_error;
    for (std::size_t attempt = 0; attempt <= cfg.max_parse_retries; ++attempt) {
      PromptBundle bundle = prompt;
      if (attempt > 0) {
        bundle.user += "\nYour previous reply could not be used: " + last_error +
                       "\nAnswer again with exactly " + std::to_string(cfg.n_blocks) +
                       " blocks written as [id, (qubit,qubit)], ids 0-5, qubits 0-" +
                       std::to_string(cfg.n_qubits - 1) + ".\n";
      }
      rec.prompts.push_back(bundle.user);
      std::string reply;
      try {
        reply = proposer.propose(bundle);
      } catch (const EndOfSpaceError& e) {
        exhausted = true;
        last_error = e.what();
        break;
      } catch (const Error& e) {
        rec.error = e.what();
        rec.finished_at = clock();
        report.iterations.push_back(std::move(rec));
        report.status = SearchStatus::kAborted;
        report.error = std::string("proposer failed: ") + e.what();
        refresh_best(report);
        notify(report);
        return report;
      }
      rec.replies.push_back(reply);
      try {
        genome = parse_proposal(reply, cfg);
        break;
      } catch (const FormatError& e) {
        last_error = e.what();
      } catch (const ValidationError& e) {
        last_error = e.what();
      }
    }

    if (genome) {
      try {
        const Circuit circuit = decode(*genome, cfg.n_qubits);
        const TrainReport trained = train(circuit, h, train_cfg);
        if (hooks.on_train) hooks.on_train(trained);
        HistoryEntry entry;
        entry.iteration = k;
        entry.genome = *genome;
        entry.raw_value = trained.final_energy;
        entry.gate_count = trained.gate_count;
        entry.epochs = trained.epochs_run;
        entry.epochs_to_converge = trained.epochs_to_converge;
        entry.params = trained.best_params;
        report.history.add(std::move(entry));
        rec.outcome = IterationRecord::Outcome::kEvaluated;
      } catch (const NumericalError& e) {
        rec.error = e.what();
      }
    } else {
      rec.error = last_error;
    }
    rec.finished_at = clock();
    if (exhausted && rec.replies.empty()) {
      // Nothing was proposed; the space ran out before this iteration.
      if (rec.prompts.size() <= 1) rec.error = "proposal space exhausted";
    }
    report.iterations.push_back(std::move(rec));
    refresh_best(report);
    notify(report);
  }

  if (feedback) apply_feedback(report, *feedback, report.iterations.size());
  if (report.status == SearchStatus::kRunning) {
    report.status = report.best ? SearchStatus::kFinished : SearchStatus::kNoCandidate;
  }
  notify(report);
  return report;
}

}  // namespace forge
