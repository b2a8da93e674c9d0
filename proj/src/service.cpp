#include "forge/service.hpp"

#include <charconv>

#include "httplib.h"

#include "forge/error.hpp"
#include "forge/qasm.hpp"
#include "forge/serialize.hpp"

namespace forge {

using nlohmann::json;

RunRequest parse_run_request(const json& body) {
  if (!body.is_object()) throw ValidationError("request body must be a JSON object");
  RunRequest req;
  try {
    req.problem = body.at("problem");
    if (body.contains("search")) req.search = body.at("search").get<SearchConfig>();
    if (body.contains("train")) req.train = body.at("train").get<TrainConfig>();
    if (body.contains("proposer")) req.proposer = body.at("proposer").get<ProposerSpec>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("run request: ") + e.what());
  }
  return req;
}

struct RunManager::Slot {
  std::mutex mu;
  std::shared_ptr<const RunRecord> snapshot;
  FeedbackMailbox mailbox;
  bool closed = false;
  std::jthread worker;
};

RunManager::RunManager(std::filesystem::path runs_dir, std::filesystem::path problem_base_dir)
    : store_(std::move(runs_dir)), problem_base_dir_(std::move(problem_base_dir)) {
  for (auto& record : store_.load_all()) {
    auto slot = std::make_shared<Slot>();
    slot->closed = true;
    const std::string id = record.run_id;
    slot->snapshot = std::make_shared<const RunRecord>(std::move(record));
    runs_.emplace(id, std::move(slot));
  }
}

RunManager::~RunManager() {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::lock_guard lock(mu_);
    for (auto& [id, slot] : runs_) slots.push_back(slot);
  }
  for (auto& slot : slots) {
    if (slot->worker.joinable()) {
      slot->worker.request_stop();
      slot->worker.join();
    }
  }
}

std::shared_ptr<RunManager::Slot> RunManager::find(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  const auto it = runs_.find(run_id);
  return it == runs_.end() ? nullptr : it->second;
}

void RunManager::publish(Slot& slot, SearchReport report) {
  auto next = std::make_shared<RunRecord>(*slot.snapshot);
  next->report = std::move(report);
  store_.save(*next);
  slot.snapshot = std::move(next);
}

std::string RunManager::start(const RunRequest& request) {
  const Problem problem = problem_from_json(request.problem, problem_base_dir_);
  const SearchConfig cfg = complete_search_config(request.search, problem);
  cfg.validate();
  request.train.validate();
  if (cfg.n_qubits != problem.hamiltonian.n_qubits()) {
    throw ValidationError("search n_qubits does not match the problem's " +
                          std::to_string(problem.hamiltonian.n_qubits()) + " qubits");
  }
  auto proposer = make_proposer(request.proposer, cfg);

  RunRecord record;
  record.run_id = store_.new_run_id();
  record.created_at = utc_timestamp();
  record.problem_name = problem.name;
  record.problem = request.problem;
  record.proposer = request.proposer;
  record.report.config = cfg;
  record.report.train = request.train;
  store_.save(record);

  auto slot = std::make_shared<Slot>();
  slot->snapshot = std::make_shared<const RunRecord>(record);
  {
    std::lock_guard lock(mu_);
    runs_.emplace(record.run_id, slot);
  }

  const TrainConfig train_cfg = request.train;
  Slot* raw = slot.get();
  slot->worker = std::jthread([this, raw, problem, cfg, train_cfg,
                               proposer = std::move(proposer)](std::stop_token stop) mutable {
    SearchHooks hooks;
    hooks.stop = stop;
    hooks.on_iteration = [this, raw](const SearchReport& r) {
      SearchReport partial = r;
      partial.status = SearchStatus::kRunning;
      std::lock_guard lock(raw->mu);
      publish(*raw, std::move(partial));
    };
    SearchReport report;
    try {
      report = run_search(problem.hamiltonian, *proposer, train_cfg, cfg, &raw->mailbox, hooks);
    } catch (const std::exception& e) {
      std::lock_guard lock(raw->mu);
      report = raw->snapshot->report;
      report.status = SearchStatus::kAborted;
      report.error = e.what();
    }
    std::lock_guard lock(raw->mu);
    apply_feedback(report, raw->mailbox, report.iterations.size());
    if (report.status != SearchStatus::kAborted) {
      report.status = report.best ? SearchStatus::kFinished : SearchStatus::kNoCandidate;
    }
    raw->closed = true;
    publish(*raw, std::move(report));
  });
  return record.run_id;
}

std::shared_ptr<const RunRecord> RunManager::get(const std::string& run_id) const {
  auto slot = find(run_id);
  if (!slot) return nullptr;
  std::lock_guard lock(slot->mu);
  return slot->snapshot;
}

std::vector<std::shared_ptr<const RunRecord>> RunManager::list() const {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, slot] : runs_) slots.push_back(slot);
  }
  std::vector<std::shared_ptr<const RunRecord>> out;
  for (auto& slot : slots) {
    std::lock_guard lock(slot->mu);
    out.push_back(slot->snapshot);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a->created_at, a->run_id) < std::tie(b->created_at, b->run_id);
  });
  return out;
}

RunManager::PostResult RunManager::post_note(const std::string& run_id, std::string text) {
  auto slot = find(run_id);
  if (!slot) return PostResult::kNotFound;
  std::lock_guard lock(slot->mu);
  if (slot->closed) return PostResult::kFinished;
  slot->mailbox.post_note(std::move(text));
  return PostResult::kAccepted;
}

RunManager::PostResult RunManager::post_decision(const std::string& run_id, std::size_t iteration,
                                                 bool accept) {
  auto slot = find(run_id);
  if (!slot) return PostResult::kNotFound;
  std::lock_guard lock(slot->mu);
  if (slot->closed) return PostResult::kFinished;
  const auto& entries = slot->snapshot->report.history.entries();
  const bool known = std::any_of(entries.begin(), entries.end(),
                                 [&](const HistoryEntry& e) { return e.iteration == iteration; });
  if (!known) return PostResult::kUnknownIteration;
  slot->mailbox.post_decision(iteration, accept);
  return PostResult::kAccepted;
}

void RunManager::wait(const std::string& run_id) {
  auto slot = find(run_id);
  if (slot && slot->worker.joinable()) slot->worker.join();
}

json run_summary(const RunRecord& r) {
  json j = {{"run_id", r.run_id},
            {"created_at", r.created_at},
            {"status", to_string(r.report.status)},
            {"problem_name", r.problem_name},
            {"iterations", r.report.iterations.size()},
            {"max_iterations", r.report.config.max_iterations},
            {"best", nullptr}};
  if (r.report.best) {
    j["best"] = {{"iteration", r.report.best->iteration},
                 {"genome", r.report.best->genome},
                 {"raw_value", r.report.best->raw_value},
                 {"gate_count", r.report.best->gate_count}};
  }
  return j;
}

json run_events(const RunRecord& r, std::size_t since) {
  const auto& entries = r.report.history.entries();
  json out = {{"run_id", r.run_id},
              {"status", to_string(r.report.status)},
              {"since", since},
              {"next", entries.size()},
              {"entries", json::array()},
              {"feedback_notes", r.report.history.notes()},
              {"best", r.report.best ? json(*r.report.best) : json(nullptr)}};
  for (std::size_t i = since; i < entries.size(); ++i) out["entries"].push_back(entries[i]);
  return out;
}

std::optional<std::string> iteration_qasm(const RunRecord& r, std::size_t iteration) {
  for (const auto& e : r.report.history.entries()) {
    if (e.iteration != iteration) continue;
    const Circuit c = prepare_circuit(decode(e.genome, r.report.config.n_qubits), r.report.train.init);
    return emit_qasm(c, e.params);
  }
  return std::nullopt;
}

namespace {

void reply_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void reply_error(httplib::Response& res, int status, std::string_view kind,
                 std::string_view message) {
  reply_json(res, status, error_json(kind, message));
}

std::optional<std::size_t> parse_index(const std::string& s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

void reply_post_result(httplib::Response& res, RunManager::PostResult result,
                       const std::string& run_id) {
  switch (result) {
    case RunManager::PostResult::kAccepted:
      reply_json(res, 202, {{"run_id", run_id}, {"queued", true}});
      break;
    case RunManager::PostResult::kNotFound:
      reply_error(res, 404, "not-found", "unknown run " + run_id);
      break;
    case RunManager::PostResult::kFinished:
      reply_error(res, 409, "conflict", "run " + run_id + " is no longer running");
      break;
    case RunManager::PostResult::kUnknownIteration:
      reply_error(res, 404, "not-found", "no evaluated candidate at that iteration");
      break;
  }
}

}  // namespace

HttpService::HttpService(RunManager& runs) : runs_(runs), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;

  s.Post("/runs", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto id = runs_.start(parse_run_request(json::parse(req.body)));
      reply_json(res, 201, {{"run_id", id}});
    } catch (const json::parse_error& e) {
      reply_error(res, 400, "format", e.what());
    } catch (const Error& e) {
      reply_error(res, 400, to_string(e.kind()), e.what());
    }
  });

  s.Get("/runs", [this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& r : runs_.list()) out.push_back(run_summary(*r));
    reply_json(res, 200, {{"runs", out}});
  });

  s.Get("/runs/:id", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    const auto r = runs_.get(id);
    if (!r) return reply_error(res, 404, "not-found", "unknown run " + id);
    reply_json(res, 200, *r);
  });

  s.Get("/runs/:id/events", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    const auto r = runs_.get(id);
    if (!r) return reply_error(res, 404, "not-found", "unknown run " + id);
    std::size_t since = 0;
    if (req.has_param("since")) {
      const auto v = parse_index(req.get_param_value("since"));
      if (!v) return reply_error(res, 400, "validation", "since must be a non-negative integer");
      since = *v;
    }
    reply_json(res, 200, run_events(*r, since));
  });

  s.Get("/runs/:id/iterations/:k/qasm", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    const auto r = runs_.get(id);
    if (!r) return reply_error(res, 404, "not-found", "unknown run " + id);
    const auto k = parse_index(req.path_params.at("k"));
    if (!k) return reply_error(res, 400, "validation", "iteration must be a non-negative integer");
    const auto qasm = iteration_qasm(*r, *k);
    if (!qasm) return reply_error(res, 404, "not-found", "no evaluated candidate at that iteration");
    res.status = 200;
    res.set_content(*qasm, "text/plain");
  });

  s.Post("/runs/:id/feedback", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    std::string text;
    try {
      text = json::parse(req.body).at("text").get<std::string>();
    } catch (const json::exception& e) {
      return reply_error(res, 400, "validation", std::string("body must be {\"text\": ...}: ") + e.what());
    }
    if (text.empty()) return reply_error(res, 400, "validation", "feedback text is empty");
    reply_post_result(res, runs_.post_note(id, std::move(text)), id);
  });

  s.Post("/runs/:id/decision", [this](const httplib::Request& req, httplib::Response& res) {
    const auto& id = req.path_params.at("id");
    std::size_t iteration = 0;
    std::string decision;
    try {
      const auto body = json::parse(req.body);
      iteration = body.at("iteration").get<std::size_t>();
      decision = body.at("decision").get<std::string>();
    } catch (const json::exception& e) {
      return reply_error(res, 400, "validation",
                         std::string("body must be {\"iteration\": k, \"decision\": "
                                     "\"accept\"|\"reject\"}: ") + e.what());
    }
    if (decision != "accept" && decision != "reject") {
      return reply_error(res, 400, "validation", "decision must be accept or reject");
    }
    reply_post_result(res, runs_.post_decision(id, iteration, decision == "accept"), id);
  });
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p < 0) throw IoError("cannot bind " + host);
    return p;
  }
  if (!server_->bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpService::listen() { server_->listen_after_bind(); }

void HttpService::stop() {
  if (server_) server_->stop();
}

}  // namespace forge
