#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "forge/pauli.hpp"

namespace forge {

enum class GateKind {
  RX,
  RY,
  RZ,
  U1,
  U3,
  SX,
  X,
  H,
  SQRT_H,
  CZ,
  CNOT,
  CU3,
  RZZ,
  RXX,
  RZX,
};

inline constexpr std::array<GateKind, 15> kAllGateKinds = {
    GateKind::RX, GateKind::RY,     GateKind::RZ, GateKind::U1,   GateKind::U3,
    GateKind::SX, GateKind::X,      GateKind::H,  GateKind::SQRT_H, GateKind::CZ,
    GateKind::CNOT, GateKind::CU3,  GateKind::RZZ, GateKind::RXX, GateKind::RZX,
};

struct GateInfo {
  std::string_view name;
  std::size_t arity;
  std::size_t param_count;
  std::string_view qasm_name;
};

const GateInfo& gate_info(GateKind kind);

/// Unitary of the gate. Two-qubit gates act on (q0, q1) with local index
/// bit(q0) + 2*bit(q1); controlled gates use q0 as control.
Eigen::MatrixXcd gate_matrix(GateKind kind, std::span<const double> angles);

/// True when the gate's single parameter enters as exp(-iθP/2) for one Pauli
/// string P (up to global phase), so the two-term shift rule is exact.
bool has_shift_rule(GateKind kind);

}  // namespace forge
