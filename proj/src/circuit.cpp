#include "forge/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "forge/error.hpp"

namespace forge {

void Circuit::append(GateKind kind, std::vector<std::size_t> qubits,
                     std::vector<Binding> bindings) {
  const auto& info = gate_info(kind);
  if (qubits.size() != info.arity) {
    throw ValidationError(std::string(info.name) + " acts on " + std::to_string(info.arity) +
                          " qubits, got " + std::to_string(qubits.size()));
  }
  for (std::size_t q : qubits) {
    if (q >= n_qubits_) {
      throw ValidationError(std::string(info.name) + ": qubit " + std::to_string(q) +
                            " out of range for " + std::to_string(n_qubits_) + " qubits");
    }
  }
  if (qubits.size() == 2 && qubits[0] == qubits[1]) {
    throw ValidationError(std::string(info.name) + ": qubits must be distinct");
  }
  if (bindings.size() != info.param_count) {
    throw ValidationError(std::string(info.name) + " takes " +
                          std::to_string(info.param_count) + " angles, got " +
                          std::to_string(bindings.size()));
  }
  std::size_t next = n_params_;
  for (const auto& b : bindings) {
    if (!b.is_param) continue;
    if (b.index > next) {
      throw ValidationError("parameter index " + std::to_string(b.index) +
                            " skips unallocated indices");
    }
    if (b.index == next) ++next;
  }
  n_params_ = next;
  instructions_.push_back({kind, std::move(qubits), std::move(bindings)});
}

void Circuit::append_parametric(GateKind kind, std::vector<std::size_t> qubits) {
  std::vector<Binding> bindings;
  for (std::size_t i = 0; i < gate_info(kind).param_count; ++i) {
    bindings.push_back(Binding::param(n_params_ + i));
  }
  append(kind, std::move(qubits), std::move(bindings));
}

void Circuit::append_fixed(GateKind kind, std::vector<std::size_t> qubits,
                           std::vector<double> angles) {
  std::vector<Binding> bindings;
  bindings.reserve(angles.size());
  for (double a : angles) bindings.push_back(Binding::fixed(a));
  append(kind, std::move(qubits), std::move(bindings));
}

std::vector<double> Circuit::angles(const Instruction& inst,
                                    std::span<const double> params) const {
  std::vector<double> out;
  out.reserve(inst.bindings.size());
  for (const auto& b : inst.bindings) out.push_back(b.is_param ? params[b.index] : b.value);
  return out;
}

Circuit concat(const Circuit& first, const Circuit& second) {
  if (first.n_qubits() != second.n_qubits()) {
    throw DimensionError("cannot concatenate circuits on " +
                         std::to_string(first.n_qubits()) + " and " +
                         std::to_string(second.n_qubits()) + " qubits");
  }
  Circuit out = first;
  const std::size_t shift = first.n_params();
  for (const auto& inst : second.instructions()) {
    auto bindings = inst.bindings;
    for (auto& b : bindings) {
      if (b.is_param) b.index += shift;
    }
    out.append(inst.kind, inst.qubits, std::move(bindings));
  }
  return out;
}

std::size_t gate_count(const Circuit& c) { return c.instructions().size(); }

const std::array<BlockTemplate, kNumBlockTemplates>& block_templates() {
  // Descriptions are the design-space text handed to the proposer.
  static const std::array<BlockTemplate, kNumBlockTemplates> kTemplates = {{
      {0, "U3+CU3",
       "U3+CU3 -- One block has a U3 layer with one U3 gate on each qubit and a CU3 layer.",
       9, 3},
      {1, "ZZ+RY", "ZZ+RY -- One block contains one layer of ZZ gate and one RY layer.", 3, 3},
      {2, "RXYZ", "RXYZ -- One block has four layers: RX, RY, RZ, and CZ.", 6, 7},
      {3, "ZX+XX",
       "ZX+XX -- Based on their MNIST circuit design, one block has two layers: ZX and XX.", 2,
       2},
      {4, "RXYZ+U1+CU3",
       "RXYZ+U1+CU3 -- Based on their random circuit basis gate set, we propose a design "
       "space in which one block has six layers in the order of RX, RY, RZ, CZ, U1, and CU3.",
       11, 10},
      {5, "IBMQ Basis",
       "IBMQ Basis -- One block with the basis gate set of IBMQ devices, in which one block "
       "has six layers in the order of RZ, X, RZ, SX, RZ, and CNOT.",
       6, 11},
  }};
  return kTemplates;
}

void append_block(Circuit& c, int id, std::size_t a, std::size_t b) {
  switch (id) {
    case 0:
      c.append_parametric(GateKind::U3, {a});
      c.append_parametric(GateKind::U3, {b});
      c.append_parametric(GateKind::CU3, {a, b});
      return;
    case 1:
      c.append_parametric(GateKind::RZZ, {a, b});
      c.append_parametric(GateKind::RY, {a});
      c.append_parametric(GateKind::RY, {b});
      return;
    case 2:
    case 4:
      for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
        c.append_parametric(k, {a});
        c.append_parametric(k, {b});
      }
      c.append_fixed(GateKind::CZ, {a, b});
      if (id == 4) {
        c.append_parametric(GateKind::U1, {a});
        c.append_parametric(GateKind::U1, {b});
        c.append_parametric(GateKind::CU3, {a, b});
      }
      return;
    case 3:
      c.append_parametric(GateKind::RZX, {a, b});
      c.append_parametric(GateKind::RXX, {a, b});
      return;
    case 5:
      for (std::size_t q : {a, b}) {
        c.append_parametric(GateKind::RZ, {q});
        c.append_fixed(GateKind::X, {q});
        c.append_parametric(GateKind::RZ, {q});
        c.append_fixed(GateKind::SX, {q});
        c.append_parametric(GateKind::RZ, {q});
      }
      c.append_fixed(GateKind::CNOT, {a, b});
      return;
    default:
      throw ValidationError("block id " + std::to_string(id) + " out of range 0-5");
  }
}

std::string format_genome(const AnsatzGenome& g) {
  std::ostringstream out;
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    const auto& b = g.blocks[i];
    if (i) out << ", ";
    out << '[' << b.block_id << ", (" << b.a << ',' << b.b << ")]";
  }
  return out.str();
}

void validate_genome(const AnsatzGenome& g, std::size_t n_qubits) {
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    const auto& b = g.blocks[i];
    const std::string where = "block " + std::to_string(i);
    if (b.block_id < 0 || b.block_id >= kNumBlockTemplates) {
      throw ValidationError(where + ": block id " + std::to_string(b.block_id) +
                            " out of range 0-5");
    }
    if (b.a >= n_qubits || b.b >= n_qubits) {
      throw ValidationError(where + ": qubit pair (" + std::to_string(b.a) + "," +
                            std::to_string(b.b) + ") out of range for " +
                            std::to_string(n_qubits) + " qubits");
    }
    if (b.a == b.b) {
      throw ValidationError(where + ": qubit pair must be distinct");
    }
  }
}

Circuit decode(const AnsatzGenome& g, std::size_t n_qubits) {
  validate_genome(g, n_qubits);
  Circuit c(n_qubits);
  for (const auto& b : g.blocks) append_block(c, b.block_id, b.a, b.b);
  return c;
}

namespace {

template <typename RotationLayer>
Circuit layered(std::size_t n_qubits, std::size_t reps, Entanglement entanglement,
                RotationLayer rotations) {
  if (reps < 1) throw ValidationError("reps must be at least 1");
  if (n_qubits < 2) throw ValidationError("entangling layers need at least 2 qubits");
  Circuit c(n_qubits);
  for (std::size_t r = 0; r < reps; ++r) {
    rotations(c);
    if (entanglement == Entanglement::kFull) {
      for (std::size_t i = 0; i < n_qubits; ++i) {
        for (std::size_t j = i + 1; j < n_qubits; ++j) c.append_fixed(GateKind::CNOT, {i, j});
      }
    } else {
      for (std::size_t i = 0; i + 1 < n_qubits; ++i) c.append_fixed(GateKind::CNOT, {i, i + 1});
    }
  }
  rotations(c);
  return c;
}

}  // namespace

Circuit real_amplitudes(std::size_t n_qubits, std::size_t reps, Entanglement entanglement) {
  return layered(n_qubits, reps, entanglement, [n_qubits](Circuit& c) {
    for (std::size_t q = 0; q < n_qubits; ++q) c.append_parametric(GateKind::RY, {q});
  });
}

Circuit two_local(std::size_t n_qubits, std::size_t reps, Entanglement entanglement) {
  return layered(n_qubits, reps, entanglement, [n_qubits](Circuit& c) {
    for (std::size_t q = 0; q < n_qubits; ++q) {
      c.append_parametric(GateKind::RY, {q});
      c.append_parametric(GateKind::RZ, {q});
    }
  });
}

Circuit prefix_sqrt_h(const Circuit& c) {
  Circuit prefix(c.n_qubits());
  for (std::size_t q = 0; q < c.n_qubits(); ++q) prefix.append_fixed(GateKind::SQRT_H, {q});
  return concat(prefix, c);
}

}  // namespace forge
