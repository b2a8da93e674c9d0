#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qasm_check {

struct Diagnostic {
  int line = 0;
  std::string message;
};

/// Parses an OpenQASM 2.0 program and checks it against the qelib1.inc gate
/// set plus any gates it declares: statement syntax, register declarations
/// and bounds, gate arity and parameter counts, distinct operands.
std::vector<Diagnostic> check(std::string_view program);

std::string format(const std::vector<Diagnostic>& diags);

}  // namespace qasm_check
