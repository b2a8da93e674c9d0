#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include <gtest/gtest.h>

#include "forge/problem_io.hpp"
#include "forge/serialize.hpp"
#include "forge/service.hpp"

#include "httplib.h"
#include "json.hpp"

using namespace forge;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

const std::filesystem::path kData = FORGE_TEST_DATA_DIR;

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("forge_service_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

json two_term_request(std::size_t iterations) {
  return {{"problem", {{"kind", "pauli"}, {"terms", {"-0.5 ZI", "0.25 XX"}}}},
          {"search", {{"n_blocks", 2}, {"max_iterations", iterations}}},
          {"train", {{"max_epochs", 15}}},
          {"proposer", {{"kind", "random"}, {"seed", 3}}}};
}

/// HTTP service on a free port with a listener thread.
class LiveService {
 public:
  explicit LiveService(const std::filesystem::path& runs_dir)
      : manager_(runs_dir, kData / "fixtures"), service_(manager_) {
    port_ = service_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { service_.listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(30, 0);
    for (int i = 0; i < 200 && !client_->Get("/runs"); ++i) std::this_thread::sleep_for(10ms);
  }
  ~LiveService() {
    service_.stop();
    thread_.join();
  }

  httplib::Client& http() { return *client_; }
  RunManager& manager() { return manager_; }

  json get_json(const std::string& path, int expected_status = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res) << path;
    if (!res) return {};
    EXPECT_EQ(res->status, expected_status) << path << ": " << res->body;
    return json::parse(res->body);
  }

  httplib::Result post_json(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  json wait_finished(const std::string& id) {
    for (int i = 0; i < 3000; ++i) {
      const auto r = get_json("/runs/" + id);
      if (r.value("status", "") != "running") return r;
      std::this_thread::sleep_for(10ms);
    }
    ADD_FAILURE() << "run " << id << " did not finish";
    return {};
  }

 private:
  RunManager manager_;
  HttpService service_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

/// Chat endpoint whose k-th call blocks until the test releases it.
class GatedChatServer {
 public:
  GatedChatServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request&, httplib::Response& res) {
      std::unique_lock lock(mu_);
      const int call = ++calls_;
      cv_.notify_all();
      cv_.wait_for(lock, 20s, [&] { return released_ >= call; });
      res.set_content(
          json{{"choices", {{{"message", {{"role", "assistant"}, {"content", "[1, (0,1)], [3, (1,0)]"}}}}}}}
              .dump(),
          "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~GatedChatServer() {
    release(1000);
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }

  void wait_for_call(int k) {
    std::unique_lock lock(mu_);
    ASSERT_TRUE(cv_.wait_for(lock, 20s, [&] { return calls_ >= k; })) << "call " << k;
  }
  void release(int k) {
    std::lock_guard lock(mu_);
    released_ = std::max(released_, k);
    cv_.notify_all();
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mu_;
  std::condition_variable cv_;
  int calls_ = 0;
  int released_ = 0;
};

}  // namespace

TEST(Service, RunLifecycleOverHttp) {
  LiveService svc(fresh_dir("lifecycle"));
  auto res = svc.post_json("/runs", two_term_request(3));
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201) << res->body;
  const std::string id = json::parse(res->body).at("run_id");

  const auto done = svc.wait_finished(id);
  EXPECT_EQ(done.at("status"), "finished");
  EXPECT_EQ(done.at("report").at("history").at("entries").size(), 3u);
  EXPECT_EQ(done.at("report").at("iterations").size(), 3u);
  EXPECT_FALSE(done.at("report").at("best").is_null());

  const auto list = svc.get_json("/runs");
  ASSERT_EQ(list.at("runs").size(), 1u);
  EXPECT_EQ(list.at("runs")[0].at("run_id"), id);
  EXPECT_EQ(list.at("runs")[0].at("status"), "finished");

  const auto events = svc.get_json("/runs/" + id + "/events?since=1");
  EXPECT_EQ(events.at("since"), 1);
  EXPECT_EQ(events.at("next"), 3);
  ASSERT_EQ(events.at("entries").size(), 2u);
  EXPECT_EQ(events.at("entries")[0], done.at("report").at("history").at("entries")[1]);
  svc.get_json("/runs/" + id + "/events?since=abc", 400);

  auto qasm = svc.http().Get("/runs/" + id + "/iterations/0/qasm");
  ASSERT_TRUE(qasm);
  EXPECT_EQ(qasm->status, 200);
  EXPECT_EQ(qasm->body.rfind("OPENQASM 2.0;", 0), 0u);
  EXPECT_EQ(svc.http().Get("/runs/" + id + "/iterations/99/qasm")->status, 404);

  svc.get_json("/runs/run-does-not-exist", 404);
  EXPECT_EQ(svc.post_json("/runs/run-does-not-exist/feedback", {{"text", "hi"}})->status, 404);
  EXPECT_EQ(svc.post_json("/runs/" + id + "/feedback", {{"text", "too late"}})->status, 409);
  EXPECT_EQ(svc.post_json("/runs/" + id + "/decision", {{"iteration", 0}, {"decision", "reject"}})->status,
            409);
  EXPECT_EQ(svc.post_json("/runs/" + id + "/decision", {{"iteration", 0}, {"decision", "maybe"}})->status,
            400);
  EXPECT_EQ(svc.post_json("/runs/" + id + "/feedback", {{"txt", "x"}})->status, 400);
}

TEST(Service, RejectsBadRunRequests) {
  LiveService svc(fresh_dir("bad_requests"));
  auto bad_json = svc.http().Post("/runs", "{not json", "application/json");
  ASSERT_TRUE(bad_json);
  EXPECT_EQ(bad_json->status, 400);
  EXPECT_EQ(json::parse(bad_json->body).at("error").at("kind"), "format");

  auto unknown = svc.post_json("/runs", {{"problem", {{"kind", "chemistry"}}}});
  EXPECT_EQ(unknown->status, 400);
  EXPECT_EQ(json::parse(unknown->body).at("error").at("kind"), "validation");

  auto req = two_term_request(2);
  req["train"]["learning_rate"] = -1.0;
  EXPECT_EQ(svc.post_json("/runs", req)->status, 400);
  EXPECT_EQ(svc.get_json("/runs").at("runs").size(), 0u);
}

TEST(Service, FeedbackAndDecisionsReachTheLoop) {
  ::setenv("FORGE_TEST_SERVICE_KEY", "sk-service-secret", 1);
  GatedChatServer chat;
  LiveService svc(fresh_dir("feedback"));
  auto req = two_term_request(3);
  req["proposer"] = {{"kind", "llm"},
                     {"llm", {{"endpoint_url", chat.url()}, {"api_key_env", "FORGE_TEST_SERVICE_KEY"},
                              {"timeout_ms", 30000}}}};
  auto res = svc.post_json("/runs", req);
  ASSERT_EQ(res->status, 201) << res->body;
  const std::string id = json::parse(res->body).at("run_id");

  chat.wait_for_call(1);
  EXPECT_EQ(svc.post_json("/runs/" + id + "/feedback", {{"text", "try fewer entanglers"}})->status, 202);
  EXPECT_EQ(svc.post_json("/runs/" + id + "/decision", {{"iteration", 0}, {"decision", "reject"}})->status,
            404);
  chat.release(1);

  chat.wait_for_call(2);
  EXPECT_EQ(svc.post_json("/runs/" + id + "/decision", {{"iteration", 0}, {"decision", "reject"}})->status,
            202);
  chat.release(3);

  const auto done = svc.wait_finished(id);
  ASSERT_EQ(done.at("status"), "finished");
  const auto& iters = done.at("report").at("iterations");
  ASSERT_EQ(iters.size(), 3u);
  EXPECT_EQ(iters[0].at("prompts")[0].get<std::string>().find("try fewer entanglers"), std::string::npos);
  EXPECT_NE(iters[1].at("prompts")[0].get<std::string>().find("try fewer entanglers"), std::string::npos);
  EXPECT_NE(iters[2].at("prompts")[0].get<std::string>().find("(rejected by reviewer)"), std::string::npos);

  const auto& entries = done.at("report").at("history").at("entries");
  EXPECT_TRUE(entries[0].at("rejected").get<bool>());
  EXPECT_NE(done.at("report").at("best").at("iteration"), 0);
  EXPECT_EQ(done.dump().find("sk-service-secret"), std::string::npos);
  ::unsetenv("FORGE_TEST_SERVICE_KEY");
}

TEST(Service, RestartReloadsRecords) {
  const auto dir = fresh_dir("restart");
  std::string id;
  {
    RunManager m(dir, kData / "fixtures");
    id = m.start(parse_run_request(two_term_request(2)));
    m.wait(id);
    EXPECT_EQ(m.get(id)->status(), SearchStatus::kFinished);
  }
  {
    RunStore store(dir);
    RunRecord dangling;
    dangling.run_id = store.new_run_id();
    dangling.created_at = "2026-01-01T00:00:00.000Z";
    dangling.report.status = SearchStatus::kRunning;
    store.save(dangling);
  }
  RunManager again(dir, kData / "fixtures");
  const auto all = again.list();
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0]->status(), SearchStatus::kAborted);
  EXPECT_NE(all[0]->report.error.find("interrupted"), std::string::npos);
  const auto reloaded = again.get(id);
  ASSERT_TRUE(reloaded);
  EXPECT_EQ(reloaded->status(), SearchStatus::kFinished);
  EXPECT_EQ(reloaded->report.history.entries().size(), 2u);
  EXPECT_EQ(again.post_note(id, "late"), RunManager::PostResult::kFinished);

  const auto qasm = iteration_qasm(*reloaded, 1);
  ASSERT_TRUE(qasm);
  EXPECT_EQ(qasm->rfind("OPENQASM 2.0;", 0), 0u);
  EXPECT_FALSE(iteration_qasm(*reloaded, 5));
}

TEST(Service, ProblemFilesResolveAgainstBaseDir) {
  const auto dir = fresh_dir("files");
  RunManager m(dir, kData / "fixtures");
  json req = two_term_request(1);
  req["problem"] = {{"kind", "maxcut"}, {"n_nodes", 3}, {"edges", {{0, 1}, {1, 2}}}};
  const auto id = m.start(parse_run_request(req));
  m.wait(id);
  const auto r = m.get(id);
  EXPECT_EQ(r->report.config.n_qubits, 3u);
  EXPECT_EQ(r->report.config.task_noun, "problem");
  EXPECT_TRUE(std::filesystem::exists(dir / (id + ".json")));
  const auto summary = run_summary(*r);
  EXPECT_EQ(summary.at("max_iterations"), 1);
}
