#include "forge/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <random>

#include "forge/error.hpp"

namespace forge {

namespace {

void check_sim_size(std::size_t n_qubits) {
  if (n_qubits > kMaxSimQubits) {
    throw ResourceError("statevector limited to " + std::to_string(kMaxSimQubits) +
                        " qubits, got " + std::to_string(n_qubits));
  }
}

// Inserts a zero bit at position `bit` of `x`.
inline std::uint64_t insert_zero(std::uint64_t x, std::size_t bit) {
  const std::uint64_t low = x & ((std::uint64_t{1} << bit) - 1);
  return ((x >> bit) << (bit + 1)) | low;
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
  check_sim_size(n_qubits);
  amplitudes_.assign(std::size_t{1} << n_qubits, Complex{});
  amplitudes_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw ValidationError("basis index out of range");
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::size_t n_qubits, std::vector<Complex> amplitudes) {
  StateVector s(n_qubits);
  if (amplitudes.size() != s.dim()) {
    throw DimensionError("expected " + std::to_string(s.dim()) + " amplitudes, got " +
                         std::to_string(amplitudes.size()));
  }
  s.amplitudes_ = std::move(amplitudes);
  if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
    throw ValidationError("amplitudes are not normalized");
  }
  return s;
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  return total;
}

Eigen::VectorXcd StateVector::to_eigen() const {
  return Eigen::Map<const Eigen::VectorXcd>(amplitudes_.data(),
                                            static_cast<Eigen::Index>(amplitudes_.size()));
}

void StateVector::apply_1q(const Eigen::Matrix2cd& m, std::size_t q) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  const std::uint64_t half = amplitudes_.size() / 2;
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::uint64_t k = 0; k < half; ++k) {
    const std::uint64_t i0 = insert_zero(k, q);
    const std::uint64_t i1 = i0 | bit;
    const Complex a0 = amplitudes_[i0];
    const Complex a1 = amplitudes_[i1];
    amplitudes_[i0] = m00 * a0 + m01 * a1;
    amplitudes_[i1] = m10 * a0 + m11 * a1;
  }
}

void StateVector::apply_2q(const Eigen::Matrix4cd& m, std::size_t q0, std::size_t q1) {
  const std::uint64_t b0 = std::uint64_t{1} << q0;
  const std::uint64_t b1 = std::uint64_t{1} << q1;
  const std::size_t lo = std::min(q0, q1);
  const std::size_t hi = std::max(q0, q1);
  const std::uint64_t quarter = amplitudes_.size() / 4;
  for (std::uint64_t k = 0; k < quarter; ++k) {
    const std::uint64_t base = insert_zero(insert_zero(k, lo), hi);
    const std::uint64_t idx[4] = {base, base | b0, base | b1, base | b0 | b1};
    Complex in[4];
    for (int j = 0; j < 4; ++j) in[j] = amplitudes_[idx[j]];
    for (int r = 0; r < 4; ++r) {
      amplitudes_[idx[r]] = m(r, 0) * in[0] + m(r, 1) * in[1] + m(r, 2) * in[2] + m(r, 3) * in[3];
    }
  }
}

StateVector run(const Circuit& c, std::span<const double> params,
                const std::optional<StateVector>& initial) {
  if (params.size() != c.n_params()) {
    throw ValidationError("circuit has " + std::to_string(c.n_params()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  if (initial && initial->n_qubits() != c.n_qubits()) {
    throw ValidationError("initial state has " + std::to_string(initial->n_qubits()) +
                          " qubits, circuit has " + std::to_string(c.n_qubits()));
  }
  StateVector state = initial ? *initial : StateVector(c.n_qubits());
  for (const auto& inst : c.instructions()) {
    const auto angles = c.angles(inst, params);
    const Eigen::MatrixXcd m = gate_matrix(inst.kind, angles);
    if (inst.qubits.size() == 1) {
      state.apply_1q(m, inst.qubits[0]);
    } else {
      state.apply_2q(m, inst.qubits[0], inst.qubits[1]);
    }
    assert(std::abs(state.norm_squared() - 1.0) < 1e-10);
  }
  return state;
}

Complex pauli_expectation(const StateVector& s, const PauliString& p) {
  if (p.n_qubits() != s.n_qubits()) {
    throw ValidationError("Pauli string on " + std::to_string(p.n_qubits()) +
                          " qubits, state on " + std::to_string(s.n_qubits()));
  }
  const std::uint64_t flip = p.flip_mask();
  const std::uint64_t phase = p.phase_mask();
  // P|x> = i^{#Y} (-1)^{|x & phase|} |x ^ flip>
  Complex sum{};
  const auto& amps = s.amplitudes();
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    const Complex term = std::conj(amps[x ^ flip]) * amps[x];
    sum += (std::popcount(x & phase) & 1) ? -term : term;
  }
  return sum * Phase{static_cast<int>(p.y_count() % 4)}.value();
}

double expectation_general(const StateVector& s, const Hamiltonian& h) {
  if (h.n_qubits() != s.n_qubits()) {
    throw ValidationError("Hamiltonian on " + std::to_string(h.n_qubits()) +
                          " qubits, state on " + std::to_string(s.n_qubits()));
  }
  double total = h.offset();
  for (const auto& term : h.terms()) total += term.coeff * pauli_expectation(s, term.string).real();
  return total;
}

double expectation(const StateVector& s, const Hamiltonian& h) {
  if (!h.is_diagonal()) return expectation_general(s, h);
  if (h.n_qubits() != s.n_qubits()) {
    throw ValidationError("Hamiltonian on " + std::to_string(h.n_qubits()) +
                          " qubits, state on " + std::to_string(s.n_qubits()));
  }
  double total = 0.0;
  const auto& amps = s.amplitudes();
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    const double p = std::norm(amps[x]);
    if (p != 0.0) total += p * h.basis_energy(x);
  }
  return total;
}

std::string bitstring(std::uint64_t index, std::size_t n_qubits) {
  std::string out(n_qubits, '0');
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if ((index >> q) & 1) out[q] = '1';
  }
  return out;
}

std::string ShotCounts::most_frequent() const {
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [label, count] : counts) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

ShotCounts sample(const StateVector& s, std::size_t shots, std::uint64_t seed) {
  if (shots < 1) throw ValidationError("shots must be at least 1");
  const auto& amps = s.amplitudes();
  std::vector<double> cumulative(amps.size());
  double running = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    running += std::norm(amps[i]);
    cumulative[i] = running;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, running);
  std::vector<std::size_t> hits(amps.size(), 0);
  for (std::size_t shot = 0; shot < shots; ++shot) {
    const double u = uniform(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    // Skip zero-probability outcomes that share a cumulative boundary.
    while (it != cumulative.begin() && std::norm(amps[it - cumulative.begin()]) == 0.0) --it;
    ++hits[static_cast<std::size_t>(it - cumulative.begin())];
  }
  ShotCounts out;
  out.shots = shots;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i]) out.counts[bitstring(i, s.n_qubits())] = hits[i];
  }
  return out;
}

}  // namespace forge
