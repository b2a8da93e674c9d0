#include "forge/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "forge/error.hpp"
#include "forge/simulator.hpp"

namespace forge {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
  if (max_epochs < 1) throw ValidationError("max_epochs must be at least 1");
  if (!(fd_step > 0.0)) throw ValidationError("fd_step must be positive");
  if (convergence_window < 1) throw ValidationError("convergence_window must be at least 1");
  if (!(convergence_tol >= 0.0)) throw ValidationError("convergence_tol must be non-negative");
}

double energy(const Circuit& c, std::span<const double> params, const Hamiltonian& h) {
  return expectation(run(c, params), h);
}

std::vector<bool> shift_rule_mask(const Circuit& c) {
  std::vector<std::size_t> uses(c.n_params(), 0);
  std::vector<bool> eligible(c.n_params(), true);
  for (const auto& inst : c.instructions()) {
    for (const auto& b : inst.bindings) {
      if (!b.is_param) continue;
      ++uses[b.index];
      if (!has_shift_rule(inst.kind)) eligible[b.index] = false;
    }
  }
  for (std::size_t k = 0; k < c.n_params(); ++k) {
    if (uses[k] != 1) eligible[k] = false;
  }
  return eligible;
}

std::vector<double> gradient(const Circuit& c, std::span<const double> params,
                             const Hamiltonian& h, GradientMode mode, double fd_step) {
  if (params.size() != c.n_params()) {
    throw ValidationError("circuit has " + std::to_string(c.n_params()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  if (h.n_qubits() != c.n_qubits()) {
    throw ValidationError("Hamiltonian on " + std::to_string(h.n_qubits()) +
                          " qubits, circuit on " + std::to_string(c.n_qubits()));
  }
  const auto eligible = shift_rule_mask(c);
  std::vector<double> shifted(params.begin(), params.end());
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t k = 0; k < params.size(); ++k) {
    bool use_shift = false;
    switch (mode) {
      case GradientMode::kAuto:
        use_shift = eligible[k];
        break;
      case GradientMode::kShiftOnly:
        if (!eligible[k]) {
          throw ValidationError("parameter " + std::to_string(k) +
                                " does not admit the shift rule");
        }
        use_shift = true;
        break;
      case GradientMode::kFiniteDifference:
        break;
    }
    const double step = use_shift ? std::numbers::pi / 2 : fd_step;
    shifted[k] = params[k] + step;
    const double plus = energy(c, shifted, h);
    shifted[k] = params[k] - step;
    const double minus = energy(c, shifted, h);
    shifted[k] = params[k];
    grad[k] = use_shift ? (plus - minus) / 2 : (plus - minus) / (2 * step);
  }
  return grad;
}

Circuit prepare_circuit(const Circuit& c, const InitStrategy& init) {
  return init.kind == InitKind::kVqeI ? prefix_sqrt_h(c) : c;
}

std::vector<double> initial_params(std::size_t n_params, const InitStrategy& init,
                                   std::uint64_t seed) {
  if (init.kind == InitKind::kConstant) return std::vector<double>(n_params, init.value);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::vector<double> params(n_params);
  for (auto& p : params) p = angle(rng);
  return params;
}

TrainReport train(const Circuit& circuit, const Hamiltonian& h, const TrainConfig& cfg) {
  cfg.validate();
  if (h.n_qubits() != circuit.n_qubits()) {
    throw ValidationError("Hamiltonian on " + std::to_string(h.n_qubits()) +
                          " qubits, circuit on " + std::to_string(circuit.n_qubits()));
  }
  const Circuit c = prepare_circuit(circuit, cfg.init);
  std::vector<double> params = initial_params(c.n_params(), cfg.init, cfg.seed);

  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  std::vector<double> m(params.size(), 0.0);
  std::vector<double> v(params.size(), 0.0);

  TrainReport report;
  report.gate_count = gate_count(c);
  report.best_energy = std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto g = gradient(c, params, h, cfg.gradient_mode, cfg.fd_step);
    if (cfg.optimizer == Optimizer::kAdam) {
      const double t = static_cast<double>(epoch);
      for (std::size_t k = 0; k < params.size(); ++k) {
        m[k] = kBeta1 * m[k] + (1 - kBeta1) * g[k];
        v[k] = kBeta2 * v[k] + (1 - kBeta2) * g[k] * g[k];
        const double m_hat = m[k] / (1 - std::pow(kBeta1, t));
        const double v_hat = v[k] / (1 - std::pow(kBeta2, t));
        params[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + kEps);
      }
    } else {
      for (std::size_t k = 0; k < params.size(); ++k) params[k] -= cfg.learning_rate * g[k];
    }

    const double e = energy(c, params, h);
    if (!std::isfinite(e)) throw NumericalError(epoch, "energy is not finite");
    report.trajectory.push_back({epoch, e});
    report.epochs_run = epoch;
    report.final_energy = e;
    if (e < report.best_energy) {
      report.best_energy = e;
      report.best_params = params;
    }

    if (epoch >= cfg.convergence_window) {
      const auto window_begin = report.trajectory.end() - static_cast<std::ptrdiff_t>(cfg.convergence_window);
      const auto [lo, hi] = std::minmax_element(
          window_begin, report.trajectory.end(),
          [](const EpochEnergy& a, const EpochEnergy& b) { return a.energy < b.energy; });
      if (hi->energy - lo->energy < cfg.convergence_tol) {
        report.epochs_to_converge = epoch;
        break;
      }
    }
  }
  return report;
}

}  // namespace forge
