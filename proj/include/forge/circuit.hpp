#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/gates.hpp"

namespace forge {

/// A gate slot is either a free parameter (by index) or a fixed angle.
struct Binding {
  bool is_param = false;
  std::size_t index = 0;
  double value = 0.0;

  static Binding param(std::size_t i) { return {true, i, 0.0}; }
  static Binding fixed(double v) { return {false, 0, v}; }

  bool operator==(const Binding&) const = default;
};

struct Instruction {
  GateKind kind;
  std::vector<std::size_t> qubits;
  std::vector<Binding> bindings;

  bool operator==(const Instruction&) const = default;
};

/// Gate sequence over a flat parameter vector. Parameter indices are assigned
/// in first-appearance order and every index is bound at least once.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t n_params() const { return n_params_; }
  const std::vector<Instruction>& instructions() const { return instructions_; }

  /// A parameter binding may reference an existing index or exactly
  /// n_params() (which allocates the next one).
  void append(GateKind kind, std::vector<std::size_t> qubits, std::vector<Binding> bindings);

  /// Binds every slot of the gate to a fresh parameter.
  void append_parametric(GateKind kind, std::vector<std::size_t> qubits);

  void append_fixed(GateKind kind, std::vector<std::size_t> qubits,
                    std::vector<double> angles = {});

  /// Resolved angles of one instruction under `params`.
  std::vector<double> angles(const Instruction& inst, std::span<const double> params) const;

  bool operator==(const Circuit&) const = default;

 private:
  std::size_t n_qubits_ = 0;
  std::size_t n_params_ = 0;
  std::vector<Instruction> instructions_;
};

/// `first` followed by `second`; parameters of `second` are renumbered after
/// those of `first`.
Circuit concat(const Circuit& first, const Circuit& second);

std::size_t gate_count(const Circuit& c);

/// One entry of the six-block design space.
struct BlockTemplate {
  int id;
  std::string_view name;
  std::string_view description;
  std::size_t param_count;
  std::size_t instruction_count;
};

inline constexpr int kNumBlockTemplates = 6;

const std::array<BlockTemplate, kNumBlockTemplates>& block_templates();

/// Appends template `id` on the ordered pair (a, b).
void append_block(Circuit& c, int id, std::size_t a, std::size_t b);

struct GenomeBlock {
  int block_id = 0;
  std::size_t a = 0;
  std::size_t b = 0;

  auto operator<=>(const GenomeBlock&) const = default;
};

/// Ordered list of (block id, qubit pair).
struct AnsatzGenome {
  static constexpr std::size_t kDefaultLength = 6;

  std::vector<GenomeBlock> blocks;

  auto operator<=>(const AnsatzGenome&) const = default;
};

/// Bracket syntax: `[1, (0,1)], [2, (1,2)]`.
std::string format_genome(const AnsatzGenome& g);

/// Throws ValidationError naming the offending block position.
void validate_genome(const AnsatzGenome& g, std::size_t n_qubits);

Circuit decode(const AnsatzGenome& g, std::size_t n_qubits);

enum class Entanglement { kFull, kLinear };

/// [RY layer; CX entangler] x reps, then a final RY layer.
Circuit real_amplitudes(std::size_t n_qubits, std::size_t reps,
                        Entanglement entanglement = Entanglement::kFull);

/// As real_amplitudes with RY-then-RZ rotation layers.
Circuit two_local(std::size_t n_qubits, std::size_t reps,
                  Entanglement entanglement = Entanglement::kFull);

/// Prepends a parameterless SQRT_H on every qubit.
Circuit prefix_sqrt_h(const Circuit& c);

}  // namespace forge
