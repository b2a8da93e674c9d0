#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "forge/pauli.hpp"

namespace forge {

/// Binary quadratic objective, minimized over x in {0,1}^n:
///   sum_{i<=j} quadratic(i,j) x_i x_j + sum_i linear_i x_i + constant.
/// Each unordered pair is stored once (upper triangle); a diagonal entry
/// multiplies x_i^2 = x_i.
class QuadraticProgram {
 public:
  QuadraticProgram() = default;
  explicit QuadraticProgram(std::size_t n_vars);

  std::size_t n_vars() const { return n_vars_; }
  const std::vector<double>& linear() const { return linear_; }
  double constant() const { return constant_; }
  double quadratic(std::size_t i, std::size_t j) const;

  void add_linear(std::size_t i, double v);
  /// Adds v * x_i * x_j (order of i and j is irrelevant).
  void add_quadratic(std::size_t i, std::size_t j, double v);
  void add_constant(double v) { constant_ += v; }

  /// Objective at assignment bits (bit i of `x` is x_i).
  double evaluate(std::uint64_t x) const;
  double evaluate(std::span<const int> x) const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t n_vars_ = 0;
  std::vector<double> linear_;
  std::vector<double> upper_;  // row-major upper triangle incl. diagonal
  double constant_ = 0.0;
};

struct PortfolioSpec {
  std::vector<double> expected_returns;
  Eigen::MatrixXd covariance;
  double risk_factor = 0.5;
  std::size_t budget = 0;
  double penalty = 0.0;
};

/// Mean return vector and sample covariance of a (periods x assets) series.
PortfolioSpec portfolio_from_returns(const Eigen::MatrixXd& returns, double risk_factor,
                                     std::size_t budget, double penalty);

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 1.0;
};

struct GraphSpec {
  std::size_t n_nodes = 0;
  std::vector<Edge> edges;

  void validate() const;
  /// Weight of the undirected edge {i, j}, if present.
  std::optional<double> weight(std::size_t i, std::size_t j) const;
};

/// q x^T S x - mu^T x + P (sum x - B)^2.
QuadraticProgram portfolio_to_qp(const PortfolioSpec& spec);

/// Negated cut: -sum w (x_i + x_j - 2 x_i x_j).
QuadraticProgram maxcut_to_qp(const GraphSpec& g);

/// Cut weight of an assignment (bit i = side of node i).
double cut_value(const GraphSpec& g, std::uint64_t x);

enum class TspEncoding {
  /// n^2 one-hot variables x_{i,p} at index i*n + p.
  kFull,
  /// City 0 pinned to position 0; (n-1)^2 variables x_{i,p}, i,p >= 1, at
  /// index (i-1)*(n-1) + (p-1).
  kReduced,
};

/// 10 x the largest edge weight x the node count.
double default_tsp_penalty(const GraphSpec& g);

QuadraticProgram tsp_to_qp(const GraphSpec& g, double penalty,
                           TspEncoding encoding = TspEncoding::kFull);

/// Substitutes x_i = (1 - z_i)/2; the result holds only Z and ZZ terms.
Hamiltonian qp_to_ising(const QuadraticProgram& qp);

struct BruteForceResult {
  double value = 0.0;
  std::string bitstring;  // x_0 first
  std::uint64_t assignment = 0;
};

constexpr std::size_t kMaxBruteForceVars = 24;

/// Exhaustive minimum; ties go to the lexicographically smallest bitstring.
BruteForceResult brute_force_min(const QuadraticProgram& qp);

struct LadderOp {
  std::size_t mode = 0;
  bool dagger = false;

  bool operator==(const LadderOp&) const = default;
};

struct FermionicTerm {
  double coeff = 0.0;
  std::vector<LadderOp> factors;  // applied right to left, as written
};

struct FermionicOp {
  std::vector<FermionicTerm> terms;
};

/// Line format `coeff [+p|-p ...]` (`+` creation, `-` annihilation), `#` comments.
FermionicOp parse_fermionic_terms(std::string_view text);

/// Complex-weighted Pauli sum (intermediate form before Hermiticity checks).
using PauliSum = std::map<PauliString, Complex>;

/// Jordan-Wigner image without any Hermiticity requirement; entries with
/// |coeff| < 1e-12 are dropped.
PauliSum jordan_wigner_sum(const FermionicOp& f, std::size_t n_modes);

/// Jordan-Wigner image as a Hamiltonian. Throws ValidationError when a
/// surviving coefficient has imaginary part >= 1e-10.
Hamiltonian jordan_wigner(const FermionicOp& f, std::size_t n_modes);

}  // namespace forge
