// Acceptance run: one PASS/FAIL line per criterion P1-P11.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "forge/bench.hpp"
#include "forge/circuit.hpp"
#include "forge/gates.hpp"
#include "forge/llm.hpp"
#include "forge/problem_io.hpp"
#include "forge/problems.hpp"
#include "forge/qasm.hpp"
#include "forge/search.hpp"
#include "forge/simulator.hpp"
#include "forge/vqe.hpp"
#include "oracle.hpp"
#include "qasm_check.hpp"

using namespace forge;

namespace {

const std::filesystem::path kFixtures = std::filesystem::path(FORGE_TEST_DATA_DIR) / "fixtures";

struct Outcome {
  bool pass = true;
  std::string detail;
};

// ---------------------------------------------------------------- oracles

/// Objective summed straight from the stored coefficients.
double direct_objective(const QuadraticProgram& qp, std::uint64_t x) {
  double v = qp.constant();
  for (std::size_t i = 0; i < qp.n_vars(); ++i) {
    const int xi = (x >> i) & 1;
    v += qp.linear()[i] * xi;
    for (std::size_t j = i; j < qp.n_vars(); ++j) v += qp.quadratic(i, j) * xi * ((x >> j) & 1);
  }
  return v;
}

/// Energy of basis state x under a Z-only Hamiltonian, using z_i = 1 - 2 x_i.
double ising_energy(const Hamiltonian& h, std::uint64_t x) {
  double e = h.offset();
  for (const auto& t : h.terms()) {
    double sign = 1.0;
    for (std::size_t q = 0; q < t.string.n_qubits(); ++q) {
      if (t.string[q] == Pauli::Z && ((x >> q) & 1)) sign = -sign;
    }
    e += t.coeff * sign;
  }
  return e;
}

double exhaustive_min(const QuadraticProgram& qp) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t x = 0; x < (1ULL << qp.n_vars()); ++x) best = std::min(best, direct_objective(qp, x));
  return best;
}

double dense_ground_energy(const Hamiltonian& h) {
  Eigen::MatrixXcd m = h.offset() * Eigen::MatrixXcd::Identity(1LL << h.n_qubits(), 1LL << h.n_qubits());
  for (const auto& t : h.terms()) m += t.coeff * oracle::pauli_word(t.string.str());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// ------------------------------------------------- variational-bound ledger

struct TrainedRecord {
  std::string label;
  double final_energy;
  double exact;
};
std::vector<TrainedRecord> g_trained;
std::map<std::string, double> g_exact_cache;

double exact_for(const Hamiltonian& h) {
  const std::string key = std::to_string(h.n_qubits()) + "\n" + format_hamiltonian_file(h);
  auto it = g_exact_cache.find(key);
  if (it != g_exact_cache.end()) return it->second;
  const double e = dense_ground_energy(h);
  g_exact_cache.emplace(key, e);
  return e;
}

TrainReport tracked_train(const std::string& label, const Circuit& c, const Hamiltonian& h,
                          const TrainConfig& cfg) {
  auto r = train(c, h, cfg);
  g_trained.push_back({label, r.final_energy, exact_for(h)});
  return r;
}

// ---------------------------------------------------------------- helpers

QuadraticProgram random_qp(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  QuadraticProgram qp(n);
  for (std::size_t i = 0; i < n; ++i) {
    qp.add_linear(i, u(rng));
    for (std::size_t j = i; j < n; ++j) qp.add_quadratic(i, j, u(rng));
  }
  qp.add_constant(u(rng));
  return qp;
}

std::vector<QuadraticProgram> qp_set() {
  std::vector<QuadraticProgram> out;
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 50; ++k) out.push_back(random_qp(rng, 1 + k % 10));
  for (const char* f : {"portfolio4.json", "maxcut5.json", "tsp3.json"}) {
    out.push_back(*load_problem(kFixtures / f).qp);
  }
  return out;
}

const AnsatzGenome kP5Genome{{{0, 0, 1}, {0, 1, 2}, {0, 2, 3}, {0, 0, 3}, {1, 0, 2}, {1, 1, 3}}};

std::vector<double> random_angles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

// ---------------------------------------------------------------- criteria

Outcome p1() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& qp : qp_set()) {
    const auto h = qp_to_ising(qp);
    for (std::uint64_t x = 0; x < (1ULL << qp.n_vars()); ++x) {
      worst = std::max(worst, std::abs(ising_energy(h, x) - direct_objective(qp, x)));
      worst = std::max(worst, std::abs(h.basis_energy(x) - direct_objective(qp, x)));
      ++checked;
    }
  }
  return {worst <= 1e-9, std::to_string(checked) + " bitstrings, max |dE| " + fmt("%.3g", worst)};
}

Outcome p2() {
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto& qp : qp_set()) {
    const double bf = brute_force_min(qp).value;
    const double eig = min_eigenvalue(qp_to_ising(qp)).energy;
    worst = std::max({worst, std::abs(bf - eig), std::abs(bf - exhaustive_min(qp))});
    ++n;
  }
  return {worst <= 1e-9, std::to_string(n) + " programs, max gap " + fmt("%.3g", worst)};
}

Outcome p3() {
  std::mt19937_64 rng(3);
  std::set<GateKind> used;
  double worst = 0.0, worst_norm = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 5;  // 2..6
    std::uniform_int_distribution<std::size_t> kind(0, kAllGateKinds.size() - 1);
    std::uniform_int_distribution<std::size_t> q(0, n - 1);
    Circuit c(n);
    const std::size_t len = 1 + trial % 40;
    for (std::size_t i = 0; i < len; ++i) {
      const GateKind k = kAllGateKinds[(trial + i) % 3 == 0 ? (trial * 7 + i) % 15 : kind(rng)];
      std::vector<std::size_t> qs{q(rng)};
      if (gate_info(k).arity == 2) {
        std::size_t b = q(rng);
        while (b == qs[0]) b = q(rng);
        qs.push_back(b);
      }
      c.append_parametric(k, qs);
      used.insert(k);
    }
    const auto params = random_angles(rng, c.n_params());
    const Eigen::VectorXcd got = run(c, params).to_eigen();
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(1LL << n);
    e0(0) = 1;
    const Eigen::VectorXcd expected = oracle::circuit_unitary(c, params) * e0;
    worst = std::max(worst, (got - expected).cwiseAbs().maxCoeff());

    StateVector s(n);
    for (const auto& inst : c.instructions()) {
      Circuit one(n);
      one.append_fixed(inst.kind, inst.qubits, c.angles(inst, params));
      s = run(one, {}, s);
      worst_norm = std::max(worst_norm, std::abs(s.norm_squared() - 1.0));
    }
  }
  const bool all_kinds = used.size() == kAllGateKinds.size();
  return {worst <= 1e-9 && worst_norm <= 1e-10 && all_kinds,
          "100 circuits, " + std::to_string(used.size()) + "/15 kinds, max amp err " +
              fmt("%.3g", worst) + ", max norm drift " + fmt("%.3g", worst_norm)};
}

Outcome p4() {
  std::mt19937_64 rng(4);
  const GateKind shiftable[] = {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::U1,
                                GateKind::RZZ, GateKind::RXX, GateKind::RZX};
  const GateKind fixed[] = {GateKind::H, GateKind::CNOT, GateKind::CZ, GateKind::SX, GateKind::X};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::uniform_int_distribution<std::size_t> q(0, n - 1);
    std::uniform_int_distribution<int> pick(0, 6), pick_fixed(0, 4), coin(0, 3);
    Circuit c(n);
    for (int i = 0; i < 12; ++i) {
      const bool param = coin(rng) != 0;
      GateKind k = param ? shiftable[pick(rng)] : fixed[pick_fixed(rng)];
      while (n == 1 && gate_info(k).arity == 2) k = param ? shiftable[pick(rng)] : fixed[pick_fixed(rng)];
      std::vector<std::size_t> qs{q(rng)};
      if (gate_info(k).arity == 2) {
        std::size_t b = q(rng);
        while (b == qs[0]) b = q(rng);
        qs.push_back(b);
      }
      if (param) {
        c.append_parametric(k, qs);
      } else {
        c.append_fixed(k, qs);
      }
    }
    std::uniform_int_distribution<int> letter(0, 3);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<PauliTerm> terms;
    for (int t = 0; t < 5; ++t) {
      PauliString s(n);
      for (std::size_t i = 0; i < n; ++i) s.set(i, static_cast<Pauli>(letter(rng)));
      terms.push_back({coeff(rng), s});
    }
    const Hamiltonian h(n, terms);
    const auto params = random_angles(rng, c.n_params());
    const auto shift = gradient(c, params, h, GradientMode::kShiftOnly);

    // Central differences over the dense-matrix oracle, step 1e-4.
    const oracle::Mat hm = [&] {
      oracle::Mat m = oracle::Mat::Zero(1LL << n, 1LL << n);
      for (const auto& t : h.terms()) m += t.coeff * oracle::pauli_word(t.string.str());
      return m;
    }();
    auto oracle_energy = [&](const std::vector<double>& p) {
      const Eigen::VectorXcd psi = oracle::circuit_unitary(c, p).col(0);
      return psi.dot(hm * psi).real() + h.offset();
    };
    const auto fd_lib = gradient(c, params, h, GradientMode::kFiniteDifference, 1e-4);
    for (std::size_t k = 0; k < params.size(); ++k) {
      auto plus = params, minus = params;
      plus[k] += 1e-4;
      minus[k] -= 1e-4;
      const double fd = (oracle_energy(plus) - oracle_energy(minus)) / 2e-4;
      worst = std::max({worst, std::abs(shift[k] - fd), std::abs(shift[k] - fd_lib[k])});
    }
  }
  Circuit ry(1);
  ry.append_parametric(GateKind::RY, {0});
  const Hamiltonian z(1, {{1.0, PauliString::parse("Z")}});
  double worst_ry = 0.0;
  for (double theta = -3.0; theta <= 3.0; theta += 0.25) {
    const std::vector<double> p{theta};
    worst_ry = std::max(worst_ry, std::abs(gradient(ry, p, z)[0] + std::sin(theta)));
  }
  return {worst <= 1e-5 && worst_ry <= 1e-9,
          "100 pairs, max shift-vs-FD " + fmt("%.3g", worst) + ", RY/Z max err " + fmt("%.3g", worst_ry)};
}

Outcome p5() {
  const auto portfolio = load_problem(kFixtures / "portfolio4.json");
  const double optimum = brute_force_min(*portfolio.qp).value;
  const Circuit c4 = decode(kP5Genome, 4);
  const auto rp = tracked_train("P5 portfolio", c4, portfolio.hamiltonian, TrainConfig{});
  const double gap = rp.final_energy - optimum;
  const bool portfolio_ok = gap <= 5e-3;

  const auto maxcut = load_problem(kFixtures / "maxcut5.json");
  const Circuit c5 = decode(kP5Genome, 5);
  int optimal = 0;
  std::string picks;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainConfig cfg;
    cfg.seed = seed;
    const auto r = tracked_train("P5 maxcut seed " + std::to_string(seed), c5, maxcut.hamiltonian, cfg);
    const auto counts = sample(run(c5, r.best_params), 4096, seed);
    const auto best = counts.most_frequent();
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < best.size(); ++i) x |= std::uint64_t(best[i] == '1') << i;
    const double cut = cut_value(*maxcut.graph, x);
    if (cut == 4.0) ++optimal;
    picks += (picks.empty() ? "" : ",") + best;
  }
  const bool maxcut_ok = optimal >= 4;
  return {portfolio_ok && maxcut_ok,
          "portfolio final " + fmt("%.6f", rp.final_energy) + " vs optimum " + fmt("%.6f", optimum) +
              " (gap " + fmt("%.2e", gap) + ", limit 5e-3, epochs " + std::to_string(rp.epochs_run) +
              "); maxcut optimal cuts " + std::to_string(optimal) + "/5 [" + picks + "]"};
}

Outcome p6() {
  const auto h = load_problem(kFixtures / "two_term.json").hamiltonian;
  const TrainConfig tcfg;
  ExhaustiveProposer offline(2, 2, {0, 1});
  std::optional<std::pair<double, std::size_t>> best_key;
  AnsatzGenome best_genome;
  for (std::uint64_t i = 0; i < offline.space_size(); ++i) {
    const auto g = offline.next();
    const auto r = tracked_train("P6 enumeration", decode(g, 2), h, tcfg);
    const std::pair key{r.final_energy, r.gate_count};
    if (!best_key || key < *best_key) {
      best_key = key;
      best_genome = g;
    }
  }
  SearchConfig cfg;
  cfg.n_qubits = 2;
  cfg.n_blocks = 2;
  cfg.max_iterations = 16;
  cfg.task_description = "two-term";
  ExhaustiveProposer online(2, 2, {0, 1});
  SearchHooks hooks;
  hooks.on_train = [&](const TrainReport& r) { g_trained.push_back({"P6 search", r.final_energy, exact_for(h)}); };
  const auto report = run_search(h, online, tcfg, cfg, nullptr, hooks);
  const bool ok = report.best && report.best->genome == best_genome &&
                  report.best->raw_value == best_key->first &&
                  report.history.entries().size() == 16;
  return {ok, "search best " + (report.best ? format_genome(report.best->genome) : std::string("none")) +
                  " vs enumeration " + format_genome(best_genome) + ", value " +
                  fmt("%.15g", best_key->first)};
}

/// Matrix of a Pauli sum under the oracle's Kronecker convention.
oracle::Mat sum_matrix(const PauliSum& s, std::size_t n) {
  oracle::Mat m = oracle::Mat::Zero(1LL << n, 1LL << n);
  for (const auto& [str, c] : s) m += c * oracle::pauli_word(str.str());
  return m;
}

/// Textbook JW ladder matrix: Z on modes below p, (X -/+ iY)/2 on p.
oracle::Mat jw_oracle(std::size_t p, bool dagger, std::size_t n) {
  oracle::Mat local = 0.5 * (oracle::pauli('X') + (dagger ? -1.0 : 1.0) * oracle::kI * oracle::pauli('Y'));
  oracle::Mat out = oracle::Mat::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) {
    const oracle::Mat f = q < p ? oracle::pauli('Z') : (q == p ? local : oracle::Mat::Identity(2, 2));
    out = oracle::kron(f, out);
  }
  return out;
}

Outcome p7() {
  bool ok = true;
  std::string notes;
  const auto number = jordan_wigner(FermionicOp{{{1.0, {{0, true}, {0, false}}}}}, 1);
  const bool number_ok = number.offset() == 0.5 && number.terms().size() == 1 &&
                         number.terms()[0].string.str() == "Z" && number.terms()[0].coeff == -0.5;
  ok &= number_ok;
  const auto hop = jordan_wigner(
      FermionicOp{{{1.0, {{0, true}, {1, false}}}, {1.0, {{1, true}, {0, false}}}}}, 2);
  const bool hop_ok = hop.offset() == 0.0 && hop.terms().size() == 2 &&
                      hop.terms()[0].string.str() == "XX" && hop.terms()[0].coeff == 0.5 &&
                      hop.terms()[1].string.str() == "YY" && hop.terms()[1].coeff == 0.5;
  ok &= hop_ok;

  const std::size_t n = 4;
  int failures = 0;
  double worst_ladder = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (bool dag : {false, true}) {
      const auto single = jordan_wigner_sum(FermionicOp{{{1.0, {{p, dag}}}}}, n);
      worst_ladder = std::max(worst_ladder, (sum_matrix(single, n) - jw_oracle(p, dag, n)).cwiseAbs().maxCoeff());
    }
    for (std::size_t q = 0; q < n; ++q) {
      auto check = [&](LadderOp a, LadderOp b, double identity) {
        const auto s = jordan_wigner_sum(FermionicOp{{{1.0, {a, b}}, {1.0, {b, a}}}}, n);
        for (const auto& [str, c] : s) {
          const double want = str.is_identity() ? identity : 0.0;
          if (c != Complex(want)) ++failures;
        }
        if (identity != 0.0 && !s.contains(PauliString(n))) ++failures;
      };
      check({p, false}, {q, true}, p == q ? 1.0 : 0.0);
      check({p, false}, {q, false}, 0.0);
      check({p, true}, {q, true}, 0.0);
    }
  }
  ok &= failures == 0 && worst_ladder < 1e-15;
  notes = std::string("number ") + (number_ok ? "ok" : "WRONG") + ", hopping " + (hop_ok ? "ok" : "WRONG") +
          ", anticommutator violations " + std::to_string(failures) + " over 48 pairs, ladder matrix err " +
          fmt("%.3g", worst_ladder);
  return {ok, notes};
}

Outcome p9() {
  std::mt19937_64 rng(9);
  std::size_t diags = 0, unstable = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 7;
    RandomProposer gen(rng(), n, 6);
    Circuit c = decode(gen.next(), n);
    if (trial % 3 == 0) c = prefix_sqrt_h(c);
    const auto params = random_angles(rng, c.n_params());
    const auto text = emit_qasm(c, params);
    diags += qasm_check::check(text).size();
    if (text != emit_qasm(c, params)) ++unstable;
  }
  return {diags == 0 && unstable == 0,
          "100 genomes, " + std::to_string(diags) + " diagnostics, " + std::to_string(unstable) + " unstable"};
}

Outcome p10(std::string& table) {
  std::vector<BenchResult> results;
  bool structure = true;
  for (const auto& file : bench_fixture_files(std::filesystem::path(FORGE_TEST_DATA_DIR))) {
    const auto problem = load_problem(file);
    const double exact = exact_for(problem.hamiltonian);
    auto result = run_bench(problem, BenchConfig{}, [&](const TrainReport& r) {
      g_trained.push_back({"P10 " + problem.name, r.final_energy, exact});
    });
    structure &= std::abs(result.reference - exhaustive_min(*problem.qp)) <= 1e-9;
    results.push_back(std::move(result));
  }
  table = bench_table(results);

  const auto j = bench_json(results);
  const std::vector<std::pair<std::string, std::size_t>> want{
      {"TwoLocal", 2}, {"TwoLocal", 3}, {"TwoLocal", 5}, {"RealAmplitudes", 2}, {"RealAmplitudes", 3},
      {"search-best", 0}};
  for (const auto& b : j.at("bench")) {
    const auto& rows = b.at("rows");
    structure &= rows.size() == want.size();
    for (std::size_t i = 0; i < rows.size() && i < want.size(); ++i) {
      structure &= rows[i].at("ansatz") == want[i].first;
      if (want[i].second) structure &= rows[i].at("reps") == want[i].second;
      structure &= rows[i].contains("GateCounts") && rows[i].contains("Value") && rows[i].contains("Reference");
      structure &= rows[i].at("Reference") == b.at("reference");
    }
  }
  const auto& portfolio = results.front();
  const double search = portfolio.search_best().value;
  const double baseline = portfolio.best_baseline_value();
  const bool ok = structure && search <= baseline + 1e-3;
  return {ok, std::string("structure ") + (structure ? "ok" : "WRONG") + "; portfolio search-best " +
                  fmt("%.6f", search) + " vs best baseline " + fmt("%.6f", baseline) + " (+1e-3 allowed)"};
}

Outcome p11() {
  bool ok = true;
  std::ostringstream notes;

  const auto s = gate_matrix(GateKind::SQRT_H, {});
  const auto hm = gate_matrix(GateKind::H, {});
  const double sq_err = (s * s - hm).cwiseAbs().maxCoeff();
  ok &= sq_err <= 1e-12;
  notes << "sqrt_h^2 err " << fmt("%.2g", sq_err);

  struct Case {
    const char* file;
    AnsatzGenome genome;
  };
  const std::vector<Case> cases{
      {"two_term.json", {{{1, 0, 1}, {0, 1, 0}}}},
      {"portfolio4.json", kP5Genome},
      {"maxcut5.json", kP5Genome},
      {"hubbard2.json", kP5Genome},
  };
  for (const auto& cs : cases) {
    const auto problem = load_problem(kFixtures / cs.file);
    const std::size_t n = problem.hamiltonian.n_qubits();
    const Circuit base = decode(cs.genome, n);
    const Circuit warm = prepare_circuit(base, InitStrategy::vqe_i());
    std::size_t added_paramless = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& inst = warm.instructions()[i];
      if (inst.kind == GateKind::SQRT_H && inst.bindings.empty()) ++added_paramless;
    }
    const bool plumbing = gate_count(warm) == gate_count(base) + n && added_paramless == n &&
                          warm.n_params() == base.n_params();
    ok &= plumbing;

    for (const auto& [label, init] : {std::pair{"constant", InitStrategy::constant(0.5)},
                                      std::pair{"vqe_i", InitStrategy::vqe_i()}}) {
      TrainConfig cfg;
      cfg.init = init;
      cfg.max_epochs = 5000;
      const auto r = tracked_train(std::string("P11 ") + label + " " + cs.file, base, problem.hamiltonian, cfg);
      ok &= r.epochs_to_converge.has_value();
      if (init.kind == InitKind::kVqeI) ok &= r.gate_count == gate_count(base) + n;
      notes << "; " << cs.file << " " << label << " converged@"
            << (r.epochs_to_converge ? std::to_string(*r.epochs_to_converge) : std::string("none"));
    }
  }
  return {ok, notes.str()};
}

Outcome p8() {
  double worst = 0.0;
  std::string where;
  for (const auto& t : g_trained) {
    const double slack = t.exact - t.final_energy;
    if (slack > worst) {
      worst = slack;
      where = t.label;
    }
  }
  return {worst <= 1e-9 && !g_trained.empty(),
          std::to_string(g_trained.size()) + " training reports, max violation " + fmt("%.3g", worst) +
              (where.empty() ? "" : " at " + where)};
}

}  // namespace

int main() {
  struct Line {
    std::string id;
    Outcome outcome;
    double secs;
  };
  std::vector<Line> lines;
  std::string bench_text;
  // Runtime limits in seconds; 0 means none.
  auto measure = [&](const char* id, double limit, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0 && secs >= limit) {
      o.pass = false;
      o.detail += "; runtime limit " + fmt("%.0f", limit) + " s exceeded";
    }
    std::fprintf(stderr, "%s done in %.1f s\n", id, secs);
    lines.push_back({id, o, secs});
  };
  measure("P1", 10, p1);
  measure("P2", 30, p2);
  measure("P3", 0, p3);
  measure("P4", 0, p4);
  measure("P5", 120, p5);
  measure("P6", 120, p6);
  measure("P7", 0, p7);
  measure("P9", 0, p9);
  measure("P10", 600, [&] { return p10(bench_text); });
  measure("P11", 0, p11);
  measure("P8", 0, p8);  // last: it audits every training report above

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return std::stoi(a.id.substr(1)) < std::stoi(b.id.substr(1));
  });
  bool all = true;
  for (const auto& l : lines) {
    all &= l.outcome.pass;
    std::printf("%s %s (%.1f s) %s\n", l.id.c_str(), l.outcome.pass ? "PASS" : "FAIL", l.secs,
                l.outcome.detail.c_str());
  }
  std::printf("\n%s", bench_text.c_str());
  return all ? 0 : 1;
}
