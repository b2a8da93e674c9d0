#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace forge {

using Complex = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);

/// Tensor product of single-qubit Paulis; letter i acts on qubit i.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits) : letters_(n_qubits, Pauli::I) {}
  explicit PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {}

  /// Parses letters over {I, X, Y, Z}, qubit 0 first.
  static PauliString parse(std::string_view letters);

  /// Single non-identity letter on `qubit`.
  static PauliString single(std::size_t n_qubits, std::size_t qubit, Pauli p);

  std::size_t n_qubits() const { return letters_.size(); }
  Pauli operator[](std::size_t q) const { return letters_[q]; }
  void set(std::size_t q, Pauli p) { letters_[q] = p; }
  const std::vector<Pauli>& letters() const { return letters_; }

  bool is_identity() const;
  /// Only I and Z letters.
  bool is_diagonal() const;

  /// Bit masks over qubits: X-type flips (X or Y) and Z-type phases (Z or Y).
  std::uint64_t flip_mask() const;
  std::uint64_t phase_mask() const;
  std::size_t y_count() const;

  std::string str() const;

  auto operator<=>(const PauliString&) const = default;
  bool operator==(const PauliString&) const = default;

 private:
  std::vector<Pauli> letters_;
};

/// Phase i^power, power in {0,1,2,3}.
struct Phase {
  int power = 0;

  Complex value() const;
  Phase operator*(Phase other) const { return Phase{(power + other.power) % 4}; }
  bool operator==(const Phase&) const = default;
};

/// Operator product p·q = phase·r.
std::pair<Phase, PauliString> multiply(const PauliString& p, const PauliString& q);

struct PauliTerm {
  double coeff = 0.0;
  PauliString string;
};

/// Real-weighted sum of Pauli strings plus an identity offset.
///
/// Construction canonicalizes: identity strings fold into the offset,
/// duplicate strings merge, terms with |coeff| < kMergeTolerance are dropped
/// and the remaining terms are sorted by string.
class Hamiltonian {
 public:
  static constexpr double kMergeTolerance = 1e-12;

  Hamiltonian() = default;
  explicit Hamiltonian(std::size_t n_qubits, double offset = 0.0)
      : n_qubits_(n_qubits), offset_(offset) {}
  Hamiltonian(std::size_t n_qubits, std::vector<PauliTerm> terms, double offset = 0.0);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  double offset() const { return offset_; }

  bool is_diagonal() const;

  /// Energy of computational basis state `index` (diagonal Hamiltonians only).
  double basis_energy(std::uint64_t index) const;

  bool operator==(const Hamiltonian&) const;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
  double offset_ = 0.0;
};

constexpr std::size_t kMaxDenseQubits = 12;

/// Dense 2^n x 2^n matrix; qubit 0 is the least-significant index bit.
Eigen::MatrixXcd to_dense(const Hamiltonian& h);

/// Matrix of a single Pauli string under the same convention.
Eigen::MatrixXcd to_dense(const PauliString& p);

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXcd state;
};

/// Smallest eigenpair. Diagonal Hamiltonians take the exhaustive-bitstring path.
GroundState min_eigenvalue(const Hamiltonian& h);

/// Always diagonalizes the dense matrix (LAPACK zheevr).
GroundState min_eigenvalue_dense(const Hamiltonian& h);

/// Exhaustive minimum over basis states; requires a diagonal Hamiltonian.
GroundState min_eigenvalue_diagonal(const Hamiltonian& h);

/// Line format: `<coefficient> <letters, qubit 0 first>`, `#` comments.
Hamiltonian parse_hamiltonian_file(std::string_view text);
std::string format_hamiltonian_file(const Hamiltonian& h);

}  // namespace forge
