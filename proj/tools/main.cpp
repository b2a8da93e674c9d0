// ansatz-forge command line.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "forge/bench.hpp"
#include "forge/error.hpp"
#include "forge/llm.hpp"
#include "forge/problem_io.hpp"
#include "forge/qasm.hpp"
#include "forge/run_store.hpp"
#include "forge/serialize.hpp"
#include "forge/service.hpp"
#include "forge/simulator.hpp"

using nlohmann::json;
using namespace forge;

namespace {

struct TrainFlags {
  std::string optimizer = "adam";
  double learning_rate = TrainConfig{}.learning_rate;
  std::size_t max_epochs = TrainConfig{}.max_epochs;
  double tol = TrainConfig{}.convergence_tol;
  std::size_t window = TrainConfig{}.convergence_window;
  std::string init = "random";
  double init_value = 0.0;
  std::uint64_t seed = TrainConfig{}.seed;
  std::string gradient = "auto";
  double fd_step = TrainConfig{}.fd_step;

  void attach(CLI::App* cmd) {
    cmd->add_option("--optimizer", optimizer)->check(CLI::IsMember({"adam", "gradient-descent"}));
    cmd->add_option("--lr", learning_rate, "learning rate");
    cmd->add_option("--epochs", max_epochs, "maximum epochs");
    cmd->add_option("--tol", tol, "convergence tolerance");
    cmd->add_option("--window", window, "convergence window");
    cmd->add_option("--init", init)->check(CLI::IsMember({"random", "constant", "vqe-i"}));
    cmd->add_option("--init-value", init_value, "angle for --init constant");
    cmd->add_option("--seed", seed, "parameter initialization seed");
    cmd->add_option("--gradient", gradient)->check(CLI::IsMember({"auto", "shift", "finite-difference"}));
    cmd->add_option("--fd-step", fd_step);
  }

  TrainConfig config() const {
    json j = {{"optimizer", optimizer},   {"learning_rate", learning_rate},
              {"max_epochs", max_epochs}, {"convergence_tol", tol},
              {"convergence_window", window},
              {"init", {{"kind", init}, {"value", init_value}}},
              {"seed", seed},             {"gradient", gradient},
              {"fd_step", fd_step}};
    auto cfg = j.get<TrainConfig>();
    cfg.validate();
    return cfg;
  }
};

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<double> read_params(const std::string& spec, std::size_t n) {
  if (spec == "zeros") return std::vector<double>(n, 0.0);
  const std::string text = read_text_file(spec);
  std::vector<double> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      out = json::parse(text).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw FormatError(spec + ": " + e.what());
    }
  } else {
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw FormatError(spec + ": malformed number '" + tok + "'");
      }
    }
  }
  if (out.size() != n) {
    throw ValidationError("circuit has " + std::to_string(n) + " parameters, " + spec +
                          " provides " + std::to_string(out.size()));
  }
  return out;
}

AnsatzGenome genome_arg(const std::string& text, std::size_t n_qubits) {
  AnsatzGenome g = extract_genome(text);
  if (g.blocks.empty()) throw FormatError("no [id, (a,b)] blocks in --genome");
  validate_genome(g, n_qubits);
  return g;
}

int cmd_encode(const std::string& problem_file, const std::string& out_file) {
  const Problem p = load_problem(problem_file);
  write_text_file_atomic(out_file, format_hamiltonian_file(p.hamiltonian));
  print_json({{"problem", p.name},
              {"kind", to_string(p.kind)},
              {"n_qubits", p.hamiltonian.n_qubits()},
              {"n_terms", p.hamiltonian.terms().size()},
              {"offset", p.hamiltonian.offset()},
              {"output", out_file}});
  return 0;
}

int cmd_exact(const std::string& ham_file) {
  const Hamiltonian h = parse_hamiltonian_file(read_text_file(ham_file));
  const GroundState g = min_eigenvalue(h);
  print_json({{"n_qubits", h.n_qubits()},
              {"method", h.is_diagonal() ? "diagonal" : "dense"},
              {"min_eigenvalue", g.energy}});
  return 0;
}

int cmd_train(const std::string& ham_file, const std::string& genome_text, const TrainFlags& flags) {
  const Hamiltonian h = parse_hamiltonian_file(read_text_file(ham_file));
  const AnsatzGenome g = genome_arg(genome_text, h.n_qubits());
  const TrainConfig cfg = flags.config();
  const TrainReport report = train(decode(g, h.n_qubits()), h, cfg);
  print_json({{"genome", g}, {"train", cfg}, {"report", report}});
  return 0;
}

/// Reads `note <text>`, `accept <k>` and `reject <k>` lines.
void pump_stdin_feedback(FeedbackMailbox& mailbox, const std::atomic<bool>& done) {
  std::string line;
  while (!done && std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string verb;
    in >> verb;
    if (verb == "note") {
      std::string rest;
      std::getline(in, rest);
      const auto start = rest.find_first_not_of(' ');
      if (start != std::string::npos) mailbox.post_note(rest.substr(start));
    } else if (verb == "accept" || verb == "reject") {
      std::size_t k = 0;
      if (in >> k) mailbox.post_decision(k, verb == "accept");
    }
  }
}

struct SearchFlags {
  std::string proposer = "random";
  std::size_t iterations = SearchConfig{}.max_iterations;
  std::size_t blocks = SearchConfig{}.n_blocks;
  std::uint64_t proposer_seed = 7;
  std::vector<int> ids{0, 1, 2, 3, 4, 5};
  std::string runs_dir = "runs";
  std::string task;
  LlmConfig llm;
  std::size_t timeout_ms = 60000;
  bool feedback_stdin = false;
};

int cmd_search(const std::string& problem_file, const SearchFlags& f, const TrainFlags& tf) {
  const Problem problem = load_problem(problem_file);
  SearchConfig cfg;
  cfg.max_iterations = f.iterations;
  cfg.n_blocks = f.blocks;
  cfg.task_description = f.task;
  cfg = complete_search_config(cfg, problem);
  const TrainConfig train_cfg = tf.config();

  ProposerSpec spec;
  spec.kind = f.proposer == "llm"          ? ProposerKind::kLlm
              : f.proposer == "exhaustive" ? ProposerKind::kExhaustive
                                           : ProposerKind::kRandom;
  spec.seed = f.proposer_seed;
  spec.allowed_ids = f.ids;
  spec.llm = f.llm;
  spec.llm.timeout = std::chrono::milliseconds(f.timeout_ms);
  auto proposer = make_proposer(spec, cfg);

  RunStore store(f.runs_dir);
  RunRecord record;
  record.run_id = store.new_run_id();
  record.created_at = utc_timestamp();
  record.problem_name = problem.name;
  record.problem = problem.source;
  record.proposer = spec;
  record.report.config = cfg;
  record.report.train = train_cfg;
  store.save(record);

  auto mailbox = std::make_shared<FeedbackMailbox>();
  auto done = std::make_shared<std::atomic<bool>>(false);
  if (f.feedback_stdin) {
    std::thread([mailbox, done] { pump_stdin_feedback(*mailbox, *done); }).detach();
  }

  SearchHooks hooks;
  hooks.on_iteration = [&](const SearchReport& r) {
    record.report = r;
    store.save(record);
  };
  record.report = run_search(problem.hamiltonian, *proposer, train_cfg, cfg, mailbox.get(), hooks);
  store.save(record);
  *done = true;
  print_json(record);
  return record.report.status == SearchStatus::kAborted ? 1 : 0;
}

int cmd_emit_qasm(const std::string& genome_text, std::size_t n_qubits, const std::string& params,
                  const std::string& init) {
  const AnsatzGenome g = genome_arg(genome_text, n_qubits);
  Circuit c = decode(g, n_qubits);
  if (init == "vqe-i") c = prefix_sqrt_h(c);
  std::cout << emit_qasm(c, read_params(params, c.n_params()));
  return 0;
}

int cmd_bench(const std::string& data_dir, bool text, std::size_t iterations, std::uint64_t seed) {
  BenchConfig cfg;
  cfg.search_iterations = iterations;
  cfg.proposer_seed = seed;
  std::vector<BenchResult> results;
  for (const auto& file : bench_fixture_files(data_dir)) {
    results.push_back(run_bench(load_problem(file), cfg));
  }
  if (text) {
    std::cout << bench_table(results);
  } else {
    print_json(bench_json(results));
  }
  return 0;
}

HttpService* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

int cmd_serve(const std::string& host, int port, const std::string& runs_dir) {
  RunManager runs(runs_dir, std::filesystem::current_path());
  HttpService service(runs);
  const int bound = service.bind(host, port);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  print_json({{"listening", host + ":" + std::to_string(bound)}, {"runs_dir", runs_dir}});
  std::cout.flush();
  service.listen();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-based ansatz search for variational quantum eigensolvers"};
  app.require_subcommand(1);

  std::string problem_file, out_file, ham_file, genome, params = "zeros", init_kind = "random";
  std::size_t n_qubits = 0;
  TrainFlags train_flags;
  SearchFlags search_flags;

  auto* encode = app.add_subcommand("encode", "Problem document to Hamiltonian file");
  encode->add_option("problem", problem_file)->required();
  encode->add_option("-o,--output", out_file)->required();

  auto* exact = app.add_subcommand("exact", "Minimum eigenvalue of a Hamiltonian file");
  exact->add_option("hamiltonian", ham_file)->required();

  auto* train_cmd = app.add_subcommand("train", "Train one genome against a Hamiltonian file");
  train_cmd->add_option("hamiltonian", ham_file)->required();
  train_cmd->add_option("--genome", genome)->required();
  train_flags.attach(train_cmd);

  auto* search = app.add_subcommand("search", "Run the proposer loop on a problem");
  search->add_option("problem", problem_file)->required();
  search->add_option("--proposer", search_flags.proposer)
      ->check(CLI::IsMember({"llm", "random", "exhaustive"}));
  search->add_option("--iterations", search_flags.iterations);
  search->add_option("--blocks", search_flags.blocks);
  search->add_option("--proposer-seed", search_flags.proposer_seed);
  search->add_option("--ids", search_flags.ids, "allowed block ids")->delimiter(',');
  search->add_option("--runs-dir", search_flags.runs_dir);
  search->add_option("--task", search_flags.task, "task text for the prompt");
  search->add_option("--endpoint", search_flags.llm.endpoint_url, "chat-completions URL");
  search->add_option("--model", search_flags.llm.model);
  search->add_option("--temperature", search_flags.llm.temperature);
  search->add_option("--max-retries", search_flags.llm.max_retries);
  search->add_option("--timeout-ms", search_flags.timeout_ms);
  search->add_option("--api-key-env", search_flags.llm.api_key_env);
  search->add_flag("--feedback-stdin", search_flags.feedback_stdin,
                   "read 'note <text>', 'accept <k>', 'reject <k>' lines");
  train_flags.attach(search);

  auto* qasm = app.add_subcommand("emit-qasm", "OpenQASM 2.0 for a genome");
  qasm->add_option("--genome", genome)->required();
  qasm->add_option("--n-qubits", n_qubits)->required();
  qasm->add_option("--params", params, "'zeros' or a file of angles");
  qasm->add_option("--init", init_kind)->check(CLI::IsMember({"random", "constant", "vqe-i"}));

  std::string data_dir = default_data_dir().string();
  bool text = false;
  std::size_t bench_iterations = BenchConfig{}.search_iterations;
  std::uint64_t bench_seed = BenchConfig{}.proposer_seed;
  auto* bench = app.add_subcommand("bench", "Baselines versus search on the bundled fixtures");
  bench->add_option("--data-dir", data_dir);
  bench->add_flag("--text", text, "aligned table instead of JSON");
  bench->add_option("--iterations", bench_iterations);
  bench->add_option("--proposer-seed", bench_seed);

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string runs_dir = "runs";
  auto* serve = app.add_subcommand("serve", "HTTP run service");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--runs-dir", runs_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*encode) return cmd_encode(problem_file, out_file);
    if (*exact) return cmd_exact(ham_file);
    if (*train_cmd) return cmd_train(ham_file, genome, train_flags);
    if (*search) return cmd_search(problem_file, search_flags, train_flags);
    if (*qasm) return cmd_emit_qasm(genome, n_qubits, params, init_kind);
    if (*bench) return cmd_bench(data_dir, text, bench_iterations, bench_seed);
    if (*serve) return cmd_serve(host, port, runs_dir);
  } catch (const Error& e) {
    print_json(error_json(to_string(e.kind()), e.what()));
    return 1;
  } catch (const std::exception& e) {
    print_json(error_json("internal", e.what()));
    return 1;
  }
  return 2;
}
