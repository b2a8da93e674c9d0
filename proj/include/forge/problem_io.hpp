#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "forge/pauli.hpp"
#include "forge/problems.hpp"

namespace forge {

enum class ProblemKind { kPortfolio, kMaxCut, kTsp, kFermionic, kPauli };

std::string_view to_string(ProblemKind kind);

/// A benchmark instance reduced to its Hamiltonian. Classical kinds keep the
/// quadratic program so brute force can serve as the reference.
struct Problem {
  ProblemKind kind = ProblemKind::kPauli;
  std::string name;
  Hamiltonian hamiltonian;
  std::optional<QuadraticProgram> qp;
  std::optional<GraphSpec> graph;
  nlohmann::json source;
};

/// Problem documents carry a `kind` discriminator (portfolio | maxcut | tsp |
/// fermionic | pauli). Relative file references resolve against `base_dir`.
Problem problem_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);

Problem load_problem(const std::filesystem::path& file);

/// Whole-file read; throws IoError.
std::string read_text_file(const std::filesystem::path& file);

/// Writes through a temporary file in the same directory and renames it over
/// `file`, so readers never see a partial document.
void write_text_file_atomic(const std::filesystem::path& file, const std::string& text);

/// Returns series as (periods x assets); the first line is a header.
Eigen::MatrixXd parse_returns_csv(std::string_view text);

}  // namespace forge
