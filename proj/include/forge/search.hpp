#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "forge/circuit.hpp"
#include "forge/pauli.hpp"
#include "forge/vqe.hpp"

namespace forge {

struct SearchConfig {
  std::size_t n_blocks = AnsatzGenome::kDefaultLength;
  std::size_t n_qubits = 0;
  std::size_t max_iterations = 10;
  /// Substituted for the task name in the proposer prompt.
  std::string task_description;
  /// Word following the task name ("molecule" for chemistry tasks).
  std::string task_noun = "molecule";
  /// Re-prompts after an unusable reply before the iteration is skipped.
  std::size_t max_parse_retries = 3;

  void validate() const;
};

struct HistoryEntry {
  std::size_t iteration = 0;
  AnsatzGenome genome;
  double raw_value = 0.0;
  std::size_t gate_count = 0;
  std::size_t epochs = 0;
  std::optional<std::size_t> epochs_to_converge;
  double normalized = 0.0;
  bool rejected = false;
  std::vector<double> params;
};

struct FeedbackNote {
  std::size_t iteration = 0;
  std::string text;
};

/// Min-max normalization: 0 at the lowest raw value, 1 at the highest;
/// all-equal (or single) histories map to 0.
void normalize(std::vector<HistoryEntry>& entries);

/// Explored designs with their performance, plus human notes.
class SearchHistory {
 public:
  const std::vector<HistoryEntry>& entries() const { return entries_; }
  const std::vector<FeedbackNote>& notes() const { return notes_; }

  void add(HistoryEntry entry);
  void add_note(FeedbackNote note) { notes_.push_back(std::move(note)); }

  /// Marks the entry from `iteration`; returns false if there is none.
  bool set_rejected(std::size_t iteration, bool rejected);

  /// Ranking-minimal non-rejected entry: raw value, then gate count, then
  /// earliest iteration.
  std::optional<std::size_t> best_index() const;

 private:
  std::vector<HistoryEntry> entries_;
  std::vector<FeedbackNote> notes_;
};

struct PromptBundle {
  std::string system;
  std::string user;
};

/// One history line: `design: <brackets> -> value: <raw>, gates: <n>, normalized: <x>`.
std::string format_history_line(const HistoryEntry& e);

PromptBundle build_prompt(const SearchHistory& history, const SearchConfig& cfg,
                          std::span<const BlockTemplate> design_space = block_templates());

/// Every `[id, (a,b)]` in `text`, in order, without validation.
AnsatzGenome extract_genome(std::string_view text);

/// Extracts and validates exactly cfg.n_blocks blocks. Invalid ids or qubits
/// throw ValidationError; a wrong block count throws FormatError.
AnsatzGenome parse_proposal(std::string_view text, const SearchConfig& cfg);

/// Source of candidate genomes (raw reply text). May throw TransportError.
class Proposer {
 public:
  virtual ~Proposer() = default;
  virtual std::string propose(const PromptBundle& prompt) = 0;
};

struct FeedbackEvent {
  enum class Kind { kNote, kDecision };
  Kind kind = Kind::kNote;
  std::string text;
  std::size_t iteration = 0;
  bool accept = true;
};

class FeedbackSource {
 public:
  virtual ~FeedbackSource() = default;
  /// Pending events in arrival order; never blocks.
  virtual std::vector<FeedbackEvent> drain() = 0;
};

/// Thread-safe queue: any number of producers, one draining search loop.
class FeedbackMailbox : public FeedbackSource {
 public:
  void post_note(std::string text);
  void post_decision(std::size_t iteration, bool accept);
  std::vector<FeedbackEvent> drain() override;

 private:
  std::mutex mu_;
  std::deque<FeedbackEvent> queue_;
};

enum class SearchStatus { kRunning, kFinished, kAborted, kNoCandidate };

std::string_view to_string(SearchStatus s);

struct IterationRecord {
  enum class Outcome { kEvaluated, kSkipped };

  std::size_t index = 0;
  Outcome outcome = Outcome::kSkipped;
  std::string started_at;
  std::string finished_at;
  /// User prompt of every attempt (the system prompt never changes).
  std::vector<std::string> prompts;
  std::vector<std::string> replies;
  std::string error;
};

struct SearchReport {
  SearchStatus status = SearchStatus::kRunning;
  std::optional<HistoryEntry> best;
  SearchHistory history;
  std::vector<IterationRecord> iterations;
  SearchConfig config;
  TrainConfig train;
  std::string error;
};

struct SearchHooks {
  /// Called with a consistent snapshot after every iteration and at the end.
  std::function<void(const SearchReport&)> on_iteration;
  /// Called with every candidate's training report.
  std::function<void(const TrainReport&)> on_train;
  std::stop_token stop;
  /// Timestamp source; defaults to UTC ISO-8601 wall time.
  std::function<std::string()> clock;
};

std::string utc_timestamp();

/// Recomputes report.best from the history.
void refresh_best(SearchReport& report);

/// Drains `feedback` into the report: notes are tagged with `iteration`,
/// decisions set or clear the rejected flag. Refreshes best.
void apply_feedback(SearchReport& report, FeedbackSource& feedback, std::size_t iteration);

/// Propose, parse, decode, train, record; repeats for cfg.max_iterations.
SearchReport run_search(const Hamiltonian& h, Proposer& proposer, const TrainConfig& train_cfg,
                        const SearchConfig& cfg, FeedbackSource* feedback = nullptr,
                        const SearchHooks& hooks = {});

}  // namespace forge
