#include "forge/gates.hpp"

#include <cmath>
#include <string>

#include "forge/error.hpp"

namespace forge {

namespace {

constexpr Complex kI{0.0, 1.0};

const GateInfo kGateTable[] = {
    {"RX", 1, 1, "rx"},     {"RY", 1, 1, "ry"},   {"RZ", 1, 1, "rz"},
    {"U1", 1, 1, "u1"},     {"U3", 1, 3, "u3"},   {"SX", 1, 0, "sx"},
    {"X", 1, 0, "x"},       {"H", 1, 0, "h"},     {"SQRT_H", 1, 0, "sqrt_h"},
    {"CZ", 2, 0, "cz"},     {"CNOT", 2, 0, "cx"}, {"CU3", 2, 3, "cu3"},
    {"RZZ", 2, 1, "rzz"},   {"RXX", 2, 1, "rxx"}, {"RZX", 2, 1, "rzx"},
};

// exp(-iθP/2) for a Pauli string in local qubit order.
Eigen::MatrixXcd pauli_rotation(std::string_view letters, double theta) {
  const Eigen::MatrixXcd p = to_dense(PauliString::parse(letters));
  const auto dim = p.rows();
  return std::cos(theta / 2) * Eigen::MatrixXcd::Identity(dim, dim) -
         kI * std::sin(theta / 2) * p;
}

Eigen::Matrix2cd u3(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  m << c, -std::exp(kI * lambda) * s, std::exp(kI * phi) * s,
      std::exp(kI * (phi + lambda)) * c;
  return m;
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

}  // namespace

const GateInfo& gate_info(GateKind kind) { return kGateTable[static_cast<int>(kind)]; }

Eigen::MatrixXcd gate_matrix(GateKind kind, std::span<const double> angles) {
  const auto& info = gate_info(kind);
  if (angles.size() != info.param_count) {
    throw ValidationError(std::string(info.name) + " takes " +
                          std::to_string(info.param_count) + " angles, got " +
                          std::to_string(angles.size()));
  }
  switch (kind) {
    case GateKind::RX:
      return pauli_rotation("X", angles[0]);
    case GateKind::RY:
      return pauli_rotation("Y", angles[0]);
    case GateKind::RZ:
      return pauli_rotation("Z", angles[0]);
    case GateKind::U1: {
      Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
      m(1, 1) = std::exp(kI * angles[0]);
      return m;
    }
    case GateKind::U3:
      return u3(angles[0], angles[1], angles[2]);
    case GateKind::SX: {
      Eigen::Matrix2cd m;
      m << Complex(1, 1), Complex(1, -1), Complex(1, -1), Complex(1, 1);
      return m / 2.0;
    }
    case GateKind::X: {
      Eigen::Matrix2cd m;
      m << 0, 1, 1, 0;
      return m;
    }
    case GateKind::H:
      return hadamard();
    case GateKind::SQRT_H:
      return (Complex(1, 1) * Eigen::Matrix2cd::Identity() + Complex(1, -1) * hadamard()) /
             2.0;
    case GateKind::CZ: {
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
      m(3, 3) = -1;
      return m;
    }
    case GateKind::CNOT: {
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
      m(0, 0) = 1;
      m(2, 2) = 1;
      m(3, 1) = 1;
      m(1, 3) = 1;
      return m;
    }
    case GateKind::CU3: {
      const Eigen::Matrix2cd u = u3(angles[0], angles[1], angles[2]);
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
      m(1, 1) = u(0, 0);
      m(1, 3) = u(0, 1);
      m(3, 1) = u(1, 0);
      m(3, 3) = u(1, 1);
      return m;
    }
    case GateKind::RZZ:
      return pauli_rotation("ZZ", angles[0]);
    case GateKind::RXX:
      return pauli_rotation("XX", angles[0]);
    case GateKind::RZX:
      return pauli_rotation("ZX", angles[0]);
  }
  throw ValidationError("unknown gate kind");
}

bool has_shift_rule(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::U1:
    case GateKind::RZZ:
    case GateKind::RXX:
    case GateKind::RZX:
      return true;
    default:
      return false;
  }
}

}  // namespace forge
