#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "json.hpp"

#include "forge/run_store.hpp"

namespace httplib {
class Server;
}

namespace forge {

/// Body of `POST /runs`: {problem, search?, train?, proposer?}.
struct RunRequest {
  nlohmann::json problem;
  SearchConfig search;
  TrainConfig train;
  ProposerSpec proposer;
};

RunRequest parse_run_request(const nlohmann::json& body);

/// Owns the search workers, their mailboxes and the latest snapshot of each
/// run. Snapshots are replaced, never mutated, so readers may hold them.
class RunManager {
 public:
  enum class PostResult { kAccepted, kNotFound, kFinished, kUnknownIteration };

  RunManager(std::filesystem::path runs_dir, std::filesystem::path problem_base_dir);
  ~RunManager();

  RunManager(const RunManager&) = delete;
  RunManager& operator=(const RunManager&) = delete;

  /// Validates the request, persists the initial record and starts a worker.
  std::string start(const RunRequest& request);

  std::shared_ptr<const RunRecord> get(const std::string& run_id) const;
  std::vector<std::shared_ptr<const RunRecord>> list() const;

  PostResult post_note(const std::string& run_id, std::string text);
  PostResult post_decision(const std::string& run_id, std::size_t iteration, bool accept);

  /// Blocks until the run's worker has exited.
  void wait(const std::string& run_id);

 private:
  struct Slot;

  std::shared_ptr<Slot> find(const std::string& run_id) const;
  void publish(Slot& slot, SearchReport report);

  RunStore store_;
  std::filesystem::path problem_base_dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> runs_;
};

/// JSON view used by `GET /runs`.
nlohmann::json run_summary(const RunRecord& r);

/// Incremental view for `GET /runs/{id}/events?since=k`.
nlohmann::json run_events(const RunRecord& r, std::size_t since);

/// QASM of the candidate evaluated at iteration k with its trained
/// parameters, or nullopt if that iteration has no evaluated candidate.
std::optional<std::string> iteration_qasm(const RunRecord& r, std::size_t iteration);

class HttpService {
 public:
  explicit HttpService(RunManager& runs);
  ~HttpService();

  /// Binds to `host:port` (port 0 picks a free one) and returns the port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();

 private:
  RunManager& runs_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace forge
