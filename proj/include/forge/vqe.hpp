#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/circuit.hpp"
#include "forge/pauli.hpp"

namespace forge {

enum class Optimizer { kAdam, kGradientDescent };

enum class GradientMode {
  /// Shift rule where the parameter allows it, central differences elsewhere.
  kAuto,
  /// Shift rule for every parameter; rejects circuits where it does not apply.
  kShiftOnly,
  kFiniteDifference,
};

enum class InitKind { kRandomUniform, kConstant, kVqeI };

struct InitStrategy {
  InitKind kind = InitKind::kRandomUniform;
  double value = 0.0;  // kConstant only

  static InitStrategy random_uniform() { return {InitKind::kRandomUniform, 0.0}; }
  static InitStrategy constant(double v) { return {InitKind::kConstant, v}; }
  static InitStrategy vqe_i() { return {InitKind::kVqeI, 0.0}; }
};

struct TrainConfig {
  Optimizer optimizer = Optimizer::kAdam;
  double learning_rate = 0.05;
  std::size_t max_epochs = 200;
  double convergence_tol = 1e-6;
  std::size_t convergence_window = 10;
  InitStrategy init;
  std::uint64_t seed = 7;
  GradientMode gradient_mode = GradientMode::kAuto;
  double fd_step = 1e-4;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;
};

struct EpochEnergy {
  std::size_t epoch = 0;
  double energy = 0.0;
};

struct TrainReport {
  std::vector<EpochEnergy> trajectory;
  std::size_t epochs_run = 0;
  std::optional<std::size_t> epochs_to_converge;
  double final_energy = 0.0;
  /// Parameters at the lowest recorded energy.
  std::vector<double> best_params;
  double best_energy = 0.0;
  std::size_t gate_count = 0;
};

/// Energy of the circuit's output state.
double energy(const Circuit& c, std::span<const double> params, const Hamiltonian& h);

/// d<h>/dθ_k for every parameter.
std::vector<double> gradient(const Circuit& c, std::span<const double> params,
                             const Hamiltonian& h, GradientMode mode = GradientMode::kAuto,
                             double fd_step = 1e-4);

/// Parameters eligible for the two-term shift rule: bound by exactly one slot
/// of exactly one instruction whose gate has a Pauli generator.
std::vector<bool> shift_rule_mask(const Circuit& c);

/// The circuit actually trained under `init` (vqe_i adds the sqrt(H) prefix).
Circuit prepare_circuit(const Circuit& c, const InitStrategy& init);

std::vector<double> initial_params(std::size_t n_params, const InitStrategy& init,
                                   std::uint64_t seed);

/// Runs the optimizer; epoch e takes one full-gradient step and records the
/// energy after it. Converged when max - min over the last
/// `convergence_window` energies is below `convergence_tol`.
TrainReport train(const Circuit& c, const Hamiltonian& h, const TrainConfig& cfg);

}  // namespace forge
