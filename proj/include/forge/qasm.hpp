#pragma once

#include <span>
#include <string>

#include "forge/circuit.hpp"

namespace forge {

/// OpenQASM 2.0 text against qelib1.inc. Gates qelib1 lacks (rzx, sqrt_h) are
/// defined inline after the include line when the circuit uses them. Angles
/// print with 17 significant digits so output is byte-stable.
std::string emit_qasm(const Circuit& c, std::span<const double> params);

}  // namespace forge
