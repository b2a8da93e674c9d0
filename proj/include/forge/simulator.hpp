#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "forge/circuit.hpp"
#include "forge/pauli.hpp"

namespace forge {

constexpr std::size_t kMaxSimQubits = 20;

/// Dense state over 2^n amplitudes; qubit 0 is the least-significant index bit.
class StateVector {
 public:
  /// |0...0>.
  explicit StateVector(std::size_t n_qubits);

  static StateVector basis(std::size_t n_qubits, std::uint64_t index);
  /// Takes amplitudes as given; they must already be normalized within 1e-10.
  static StateVector from_amplitudes(std::size_t n_qubits, std::vector<Complex> amplitudes);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm_squared() const;
  Eigen::VectorXcd to_eigen() const;

  void apply_1q(const Eigen::Matrix2cd& m, std::size_t q);
  /// Local index of the 4x4 kernel is bit(q0) + 2*bit(q1).
  void apply_2q(const Eigen::Matrix4cd& m, std::size_t q0, std::size_t q1);

 private:
  std::size_t n_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Applies `c` under `params` to `initial` (default |0...0>).
StateVector run(const Circuit& c, std::span<const double> params,
                const std::optional<StateVector>& initial = std::nullopt);

/// <s|P|s> for a single Pauli string (complex; real for Hermitian P).
Complex pauli_expectation(const StateVector& s, const PauliString& p);

/// <s|h|s> + offset.
double expectation(const StateVector& s, const Hamiltonian& h);

/// Path that never takes the diagonal shortcut (for cross-checks).
double expectation_general(const StateVector& s, const Hamiltonian& h);

/// Basis label, qubit 0 first ("10" is qubit 0 set).
std::string bitstring(std::uint64_t index, std::size_t n_qubits);

struct ShotCounts {
  std::map<std::string, std::size_t> counts;
  std::size_t shots = 0;

  /// Most frequent outcome; ties go to the smallest label.
  std::string most_frequent() const;
};

ShotCounts sample(const StateVector& s, std::size_t shots, std::uint64_t seed);

}  // namespace forge
