#include "forge/qasm.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "forge/error.hpp"

namespace forge {

namespace {

std::string angle(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool uses(const Circuit& c, GateKind kind) {
  return std::any_of(c.instructions().begin(), c.instructions().end(),
                     [kind](const Instruction& i) { return i.kind == kind; });
}

}  // namespace

std::string emit_qasm(const Circuit& c, std::span<const double> params) {
  if (params.size() != c.n_params()) {
    throw ValidationError("circuit has " + std::to_string(c.n_params()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  if (uses(c, GateKind::RZX)) {
    out << "gate rzx(theta) a,b { h b; cx a,b; rz(theta) b; cx a,b; h b; }\n";
  }
  if (uses(c, GateKind::SQRT_H)) {
    // Principal square root of H up to a global phase of exp(i*pi/4).
    out << "gate sqrt_h a { ry(-pi/4) a; rz(pi/2) a; ry(pi/4) a; }\n";
  }
  out << "qreg q[" << c.n_qubits() << "];\n";
  for (const auto& inst : c.instructions()) {
    out << gate_info(inst.kind).qasm_name;
    const auto values = c.angles(inst, params);
    if (!values.empty()) {
      out << '(';
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        out << angle(values[i]);
      }
      out << ')';
    }
    out << ' ';
    for (std::size_t i = 0; i < inst.qubits.size(); ++i) {
      if (i) out << ',';
      out << "q[" << inst.qubits[i] << ']';
    }
    out << ";\n";
  }
  return out.str();
}

}  // namespace forge
