#include "forge/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "forge/error.hpp"

namespace forge {

QuadraticProgram::QuadraticProgram(std::size_t n_vars)
    : n_vars_(n_vars), linear_(n_vars, 0.0), upper_(n_vars * n_vars, 0.0) {}

std::size_t QuadraticProgram::index(std::size_t i, std::size_t j) const {
  if (i >= n_vars_ || j >= n_vars_) {
    throw DimensionError("variable index out of range for " + std::to_string(n_vars_) +
                         " variables");
  }
  if (i > j) std::swap(i, j);
  return i * n_vars_ + j;
}

double QuadraticProgram::quadratic(std::size_t i, std::size_t j) const {
  return upper_[index(i, j)];
}

void QuadraticProgram::add_linear(std::size_t i, double v) {
  if (i >= n_vars_) throw DimensionError("variable index out of range");
  linear_[i] += v;
}

void QuadraticProgram::add_quadratic(std::size_t i, std::size_t j, double v) {
  upper_[index(i, j)] += v;
}

double QuadraticProgram::evaluate(std::uint64_t x) const {
  double total = constant_;
  for (std::size_t i = 0; i < n_vars_; ++i) {
    if (!((x >> i) & 1)) continue;
    total += linear_[i];
    const double* row = &upper_[i * n_vars_];
    for (std::size_t j = i; j < n_vars_; ++j) {
      if ((x >> j) & 1) total += row[j];
    }
  }
  return total;
}

double QuadraticProgram::evaluate(std::span<const int> x) const {
  if (x.size() != n_vars_) throw DimensionError("assignment length mismatch");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) bits |= std::uint64_t{1} << i;
  }
  return evaluate(bits);
}

PortfolioSpec portfolio_from_returns(const Eigen::MatrixXd& returns, double risk_factor,
                                     std::size_t budget, double penalty) {
  if (returns.rows() < 2) throw ValidationError("need at least two return periods");
  PortfolioSpec spec;
  const Eigen::VectorXd mean = returns.colwise().mean();
  const Eigen::MatrixXd centered = returns.rowwise() - mean.transpose();
  spec.expected_returns.assign(mean.data(), mean.data() + mean.size());
  spec.covariance = centered.transpose() * centered / static_cast<double>(returns.rows() - 1);
  spec.risk_factor = risk_factor;
  spec.budget = budget;
  spec.penalty = penalty;
  return spec;
}

QuadraticProgram portfolio_to_qp(const PortfolioSpec& spec) {
  const std::size_t n = spec.expected_returns.size();
  if (static_cast<std::size_t>(spec.covariance.rows()) != n ||
      static_cast<std::size_t>(spec.covariance.cols()) != n) {
    throw ValidationError("covariance must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (n > 0 && (spec.covariance - spec.covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("covariance must be symmetric");
  }
  if (spec.budget > n) throw ValidationError("budget exceeds the number of assets");

  QuadraticProgram qp(n);
  const double q = spec.risk_factor;
  const double p = spec.penalty;
  const double b = static_cast<double>(spec.budget);
  for (std::size_t i = 0; i < n; ++i) {
    // x_i^2 = x_i folds the diagonal risk and squared penalty terms into linear.
    qp.add_linear(i, q * spec.covariance(i, i) - spec.expected_returns[i] + p * (1 - 2 * b));
    for (std::size_t j = i + 1; j < n; ++j) {
      qp.add_quadratic(i, j, 2 * q * spec.covariance(i, j) + 2 * p);
    }
  }
  qp.add_constant(p * b * b);
  return qp;
}

void GraphSpec::validate() const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (e.i >= n_nodes || e.j >= n_nodes) {
      throw ValidationError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                            ") references a node outside 0.." + std::to_string(n_nodes));
    }
    if (e.i == e.j) throw ValidationError("self-loop on node " + std::to_string(e.i));
    if (!seen.insert(std::minmax(e.i, e.j)).second) {
      throw ValidationError("duplicate edge (" + std::to_string(e.i) + "," +
                            std::to_string(e.j) + ")");
    }
  }
}

std::optional<double> GraphSpec::weight(std::size_t i, std::size_t j) const {
  for (const auto& e : edges) {
    if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return e.weight;
  }
  return std::nullopt;
}

QuadraticProgram maxcut_to_qp(const GraphSpec& g) {
  g.validate();
  QuadraticProgram qp(g.n_nodes);
  for (const auto& e : g.edges) {
    qp.add_linear(e.i, -e.weight);
    qp.add_linear(e.j, -e.weight);
    qp.add_quadratic(e.i, e.j, 2 * e.weight);
  }
  return qp;
}

double cut_value(const GraphSpec& g, std::uint64_t x) {
  double total = 0.0;
  for (const auto& e : g.edges) {
    if (((x >> e.i) & 1) != ((x >> e.j) & 1)) total += e.weight;
  }
  return total;
}

double default_tsp_penalty(const GraphSpec& g) {
  double max_weight = 0.0;
  for (const auto& e : g.edges) max_weight = std::max(max_weight, std::abs(e.weight));
  return 10.0 * max_weight * static_cast<double>(g.n_nodes);
}

namespace {

// A (sum y - 1)^2 with y_k^2 = y_k.
void add_one_hot_penalty(QuadraticProgram& qp, const std::vector<std::size_t>& vars, double a) {
  for (std::size_t k = 0; k < vars.size(); ++k) {
    qp.add_linear(vars[k], -a);
    for (std::size_t l = k + 1; l < vars.size(); ++l) qp.add_quadratic(vars[k], vars[l], 2 * a);
  }
  qp.add_constant(a);
}

}  // namespace

QuadraticProgram tsp_to_qp(const GraphSpec& g, double penalty, TspEncoding encoding) {
  g.validate();
  const std::size_t n = g.n_nodes;
  if (n < 2) throw ValidationError("TSP needs at least 2 nodes");
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto wij = g.weight(i, j);
      if (!wij) {
        throw ValidationError("TSP graph is not complete: missing edge (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
      }
      w[i][j] = w[j][i] = *wij;
    }
  }

  if (encoding == TspEncoding::kFull) {
    auto var = [n](std::size_t city, std::size_t pos) { return city * n + pos; };
    QuadraticProgram qp(n * n);
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t next = (p + 1) % n;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j) qp.add_quadratic(var(i, p), var(j, next), w[i][j]);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> row;
      for (std::size_t p = 0; p < n; ++p) row.push_back(var(i, p));
      add_one_hot_penalty(qp, row, penalty);
    }
    for (std::size_t p = 0; p < n; ++p) {
      std::vector<std::size_t> col;
      for (std::size_t i = 0; i < n; ++i) col.push_back(var(i, p));
      add_one_hot_penalty(qp, col, penalty);
    }
    return qp;
  }

  const std::size_t m = n - 1;
  auto var = [m](std::size_t city, std::size_t pos) { return (city - 1) * m + (pos - 1); };
  QuadraticProgram qp(m * m);
  for (std::size_t i = 1; i < n; ++i) {
    qp.add_linear(var(i, 1), w[0][i]);
    qp.add_linear(var(i, m), w[i][0]);
  }
  for (std::size_t p = 1; p < m; ++p) {
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 1; j < n; ++j) {
        if (i != j) qp.add_quadratic(var(i, p), var(j, p + 1), w[i][j]);
      }
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<std::size_t> row;
    for (std::size_t p = 1; p <= m; ++p) row.push_back(var(i, p));
    add_one_hot_penalty(qp, row, penalty);
  }
  for (std::size_t p = 1; p <= m; ++p) {
    std::vector<std::size_t> col;
    for (std::size_t i = 1; i < n; ++i) col.push_back(var(i, p));
    add_one_hot_penalty(qp, col, penalty);
  }
  return qp;
}

Hamiltonian qp_to_ising(const QuadraticProgram& qp) {
  const std::size_t n = qp.n_vars();
  std::vector<PauliTerm> terms;
  double offset = qp.constant();
  auto z = [n](std::size_t i) { return PauliString::single(n, i, Pauli::Z); };
  auto add_linear = [&](std::size_t i, double c) {
    // c x = c/2 - (c/2) z
    offset += c / 2;
    terms.push_back({-c / 2, z(i)});
  };
  for (std::size_t i = 0; i < n; ++i) {
    add_linear(i, qp.linear()[i] + qp.quadratic(i, i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double u = qp.quadratic(i, j);
      if (u == 0.0) continue;
      // u x_i x_j = u/4 (1 - z_i - z_j + z_i z_j)
      offset += u / 4;
      terms.push_back({-u / 4, z(i)});
      terms.push_back({-u / 4, z(j)});
      PauliString zz = z(i);
      zz.set(j, Pauli::Z);
      terms.push_back({u / 4, std::move(zz)});
    }
  }
  return Hamiltonian(n, std::move(terms), offset);
}

BruteForceResult brute_force_min(const QuadraticProgram& qp) {
  const std::size_t n = qp.n_vars();
  if (n > kMaxBruteForceVars) {
    throw ResourceError("brute force limited to " + std::to_string(kMaxBruteForceVars) +
                        " variables, got " + std::to_string(n));
  }
  // Enumerate in lexicographic order of "x_0 x_1 ... x_{n-1}" so the first
  // strict minimum is also the lexicographically smallest tie.
  BruteForceResult best;
  bool found = false;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t r = 0; r < count; ++r) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((r >> (n - 1 - i)) & 1) x |= std::uint64_t{1} << i;
    }
    const double v = qp.evaluate(x);
    if (!found || v < best.value) {
      best.value = v;
      best.assignment = x;
      found = true;
    }
  }
  best.bitstring.assign(n, '0');
  for (std::size_t i = 0; i < n; ++i) {
    if ((best.assignment >> i) & 1) best.bitstring[i] = '1';
  }
  return best;
}

FermionicOp parse_fermionic_terms(std::string_view text) {
  FermionicOp op;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    if (tokens.empty()) continue;

    FermionicTerm term;
    const char* first = tokens[0].data();
    const char* last = first + tokens[0].size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, term.coeff);
    if (ec != std::errc() || ptr != last || !std::isfinite(term.coeff)) {
      throw ParseError(line_no, "malformed coefficient '" + std::string(tokens[0]) + "'");
    }
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      if (tok.size() < 2 || (tok[0] != '+' && tok[0] != '-')) {
        throw ParseError(line_no, "expected +p or -p, got '" + std::string(tok) + "'");
      }
      LadderOp f;
      f.dagger = tok[0] == '+';
      const auto [mp, mec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), f.mode);
      if (mec != std::errc() || mp != tok.data() + tok.size()) {
        throw ParseError(line_no, "malformed mode index '" + std::string(tok) + "'");
      }
      term.factors.push_back(f);
    }
    op.terms.push_back(std::move(term));
  }
  return op;
}

namespace {

PauliSum ladder_image(const LadderOp& f, std::size_t n_modes) {
  PauliString x(n_modes);
  for (std::size_t q = 0; q < f.mode; ++q) x.set(q, Pauli::Z);
  PauliString y = x;
  x.set(f.mode, Pauli::X);
  y.set(f.mode, Pauli::Y);
  // a^dagger = (X - iY)/2, a = (X + iY)/2, each behind the parity string.
  const Complex y_coeff = f.dagger ? Complex(0.0, -0.5) : Complex(0.0, 0.5);
  return PauliSum{{x, Complex(0.5, 0.0)}, {y, y_coeff}};
}

PauliSum product(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  for (const auto& [sa, ca] : a) {
    for (const auto& [sb, cb] : b) {
      auto [phase, r] = multiply(sa, sb);
      out[r] += ca * cb * phase.value();
    }
  }
  return out;
}

}  // namespace

PauliSum jordan_wigner_sum(const FermionicOp& f, std::size_t n_modes) {
  PauliSum total;
  for (const auto& term : f.terms) {
    PauliSum acc{{PauliString(n_modes), Complex(term.coeff, 0.0)}};
    for (const auto& factor : term.factors) {
      if (factor.mode >= n_modes) {
        throw ValidationError("mode " + std::to_string(factor.mode) + " out of range for " +
                              std::to_string(n_modes) + " modes");
      }
      acc = product(acc, ladder_image(factor, n_modes));
    }
    for (const auto& [s, c] : acc) total[s] += c;
  }
  for (auto it = total.begin(); it != total.end();) {
    if (std::abs(it->second) < Hamiltonian::kMergeTolerance) {
      it = total.erase(it);
    } else {
      ++it;
    }
  }
  return total;
}

Hamiltonian jordan_wigner(const FermionicOp& f, std::size_t n_modes) {
  const PauliSum sum = jordan_wigner_sum(f, n_modes);
  std::vector<PauliTerm> terms;
  double offset = 0.0;
  for (const auto& [s, c] : sum) {
    if (std::abs(c.imag()) >= 1e-10) {
      throw ValidationError("operator is not Hermitian: term " + s.str() +
                            " has imaginary residue " + std::to_string(c.imag()));
    }
    if (s.is_identity()) {
      offset += c.real();
    } else {
      terms.push_back({c.real(), s});
    }
  }
  return Hamiltonian(n_modes, std::move(terms), offset);
}

}  // namespace forge
