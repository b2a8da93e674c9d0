#include "forge/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include <lapacke.h>

#include "forge/error.hpp"

namespace forge {

char to_char(Pauli p) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  return kLetters[static_cast<int>(p)];
}

PauliString PauliString::parse(std::string_view letters) {
  std::vector<Pauli> out;
  out.reserve(letters.size());
  for (char c : letters) {
    switch (c) {
      case 'I':
        out.push_back(Pauli::I);
        break;
      case 'X':
        out.push_back(Pauli::X);
        break;
      case 'Y':
        out.push_back(Pauli::Y);
        break;
      case 'Z':
        out.push_back(Pauli::Z);
        break;
      default:
        throw ValidationError(std::string("invalid Pauli letter '") + c + "'");
    }
  }
  return PauliString(std::move(out));
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, Pauli p) {
  if (qubit >= n_qubits) {
    throw DimensionError("qubit " + std::to_string(qubit) + " out of range for " +
                         std::to_string(n_qubits) + " qubits");
  }
  PauliString s(n_qubits);
  s.set(qubit, p);
  return s;
}

bool PauliString::is_identity() const {
  return std::all_of(letters_.begin(), letters_.end(),
                     [](Pauli p) { return p == Pauli::I; });
}

bool PauliString::is_diagonal() const {
  return std::all_of(letters_.begin(), letters_.end(),
                     [](Pauli p) { return p == Pauli::I || p == Pauli::Z; });
}

std::uint64_t PauliString::flip_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    if (letters_[q] == Pauli::X || letters_[q] == Pauli::Y) mask |= std::uint64_t{1} << q;
  }
  return mask;
}

std::uint64_t PauliString::phase_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    if (letters_[q] == Pauli::Z || letters_[q] == Pauli::Y) mask |= std::uint64_t{1} << q;
  }
  return mask;
}

std::size_t PauliString::y_count() const {
  return static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), Pauli::Y));
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (Pauli p : letters_) s.push_back(to_char(p));
  return s;
}

Complex Phase::value() const {
  switch (power & 3) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

std::pair<Phase, PauliString> multiply(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits()) {
    throw DimensionError("cannot multiply Pauli strings of lengths " +
                         std::to_string(p.n_qubits()) + " and " +
                         std::to_string(q.n_qubits()));
  }
  Phase phase;
  PauliString r(p.n_qubits());
  for (std::size_t i = 0; i < p.n_qubits(); ++i) {
    const int a = static_cast<int>(p[i]);
    const int b = static_cast<int>(q[i]);
    if (a == 0) {
      r.set(i, q[i]);
    } else if (b == 0) {
      r.set(i, p[i]);
    } else if (a == b) {
      r.set(i, Pauli::I);
    } else {
      // X=1, Y=2, Z=3: the product letter is the third one; cyclic order gives +i.
      r.set(i, static_cast<Pauli>(6 - a - b));
      phase = phase * Phase{((b - a + 3) % 3 == 1) ? 1 : 3};
    }
  }
  return {phase, std::move(r)};
}

Hamiltonian::Hamiltonian(std::size_t n_qubits, std::vector<PauliTerm> terms, double offset)
    : n_qubits_(n_qubits), offset_(offset) {
  std::map<PauliString, double> merged;
  for (auto& term : terms) {
    if (term.string.n_qubits() != n_qubits) {
      throw DimensionError("term " + term.string.str() + " does not act on " +
                           std::to_string(n_qubits) + " qubits");
    }
    if (!std::isfinite(term.coeff)) {
      throw ValidationError("non-finite coefficient on term " + term.string.str());
    }
    if (term.string.is_identity()) {
      offset_ += term.coeff;
    } else {
      merged[term.string] += term.coeff;
    }
  }
  terms_.reserve(merged.size());
  for (auto& [string, coeff] : merged) {
    if (std::abs(coeff) >= kMergeTolerance) terms_.push_back({coeff, string});
  }
}

bool Hamiltonian::is_diagonal() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const PauliTerm& t) { return t.string.is_diagonal(); });
}

double Hamiltonian::basis_energy(std::uint64_t index) const {
  double energy = 0.0;
  for (const auto& term : terms_) {
    const bool odd = std::popcount(index & term.string.phase_mask()) & 1;
    energy += odd ? -term.coeff : term.coeff;
  }
  return energy + offset_;
}

bool Hamiltonian::operator==(const Hamiltonian& other) const {
  if (n_qubits_ != other.n_qubits_ || offset_ != other.offset_ ||
      terms_.size() != other.terms_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coeff != other.terms_[i].coeff ||
        terms_[i].string != other.terms_[i].string) {
      return false;
    }
  }
  return true;
}

namespace {

void check_dense_size(std::size_t n_qubits) {
  if (n_qubits > kMaxDenseQubits) {
    throw ResourceError("dense representation limited to " +
                        std::to_string(kMaxDenseQubits) + " qubits, got " +
                        std::to_string(n_qubits));
  }
}

// Accumulates coeff * P into m using P|c> = i^{#Y} (-1)^{|c & zmask|} |c ^ xmask>.
void accumulate(Eigen::MatrixXcd& m, const PauliString& p, double coeff) {
  const std::uint64_t flip = p.flip_mask();
  const std::uint64_t phase = p.phase_mask();
  const Complex base = Phase{static_cast<int>(p.y_count() % 4)}.value();
  const auto dim = static_cast<std::uint64_t>(m.rows());
  for (std::uint64_t col = 0; col < dim; ++col) {
    const bool odd = std::popcount(col & phase) & 1;
    const Complex factor = odd ? -base : base;
    // Real factors keep the diagonal accumulation bit-identical to basis_energy.
    const Complex value = factor.imag() == 0.0 ? Complex(coeff * factor.real(), 0.0)
                                               : Complex(0.0, coeff * factor.imag());
    m(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) += value;
  }
}

}  // namespace

Eigen::MatrixXcd to_dense(const PauliString& p) {
  check_dense_size(p.n_qubits());
  const auto dim = Eigen::Index{1} << p.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  accumulate(m, p, 1.0);
  return m;
}

Eigen::MatrixXcd to_dense(const Hamiltonian& h) {
  check_dense_size(h.n_qubits());
  const auto dim = Eigen::Index{1} << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : h.terms()) accumulate(m, term.string, term.coeff);
  for (Eigen::Index i = 0; i < dim; ++i) m(i, i) += h.offset();
  return m;
}

GroundState min_eigenvalue_dense(const Hamiltonian& h) {
  Eigen::MatrixXcd m = to_dense(h);
  const auto n = static_cast<lapack_int>(m.rows());
  lapack_int found = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  Eigen::MatrixXcd z(n, 1);
  std::vector<lapack_int> support(2);
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', n,
      reinterpret_cast<lapack_complex_double*>(m.data()), n, 0.0, 0.0, 1, 1, abstol,
      &found, w.data(), reinterpret_cast<lapack_complex_double*>(z.data()), n,
      support.data());
  if (info != 0 || found < 1) {
    throw Error(ErrorKind::kNumerical,
                "eigensolver failed with info " + std::to_string(info));
  }
  return {w[0], z.col(0)};
}

GroundState min_eigenvalue_diagonal(const Hamiltonian& h) {
  if (!h.is_diagonal()) throw ValidationError("Hamiltonian is not diagonal");
  check_dense_size(h.n_qubits());
  const std::uint64_t dim = std::uint64_t{1} << h.n_qubits();
  std::uint64_t best = 0;
  double best_energy = std::numeric_limits<double>::infinity();
  for (std::uint64_t index = 0; index < dim; ++index) {
    const double e = h.basis_energy(index);
    if (e < best_energy) {
      best_energy = e;
      best = index;
    }
  }
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  state(static_cast<Eigen::Index>(best)) = 1.0;
  return {best_energy, std::move(state)};
}

GroundState min_eigenvalue(const Hamiltonian& h) {
  return h.is_diagonal() ? min_eigenvalue_diagonal(h) : min_eigenvalue_dense(h);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool looks_complex(std::string_view token) {
  return token.find_first_of("ijJ(") != std::string_view::npos &&
         token.find("inf") == std::string_view::npos;
}

}  // namespace

Hamiltonian parse_hamiltonian_file(std::string_view text) {
  std::vector<PauliTerm> terms;
  double offset = 0.0;
  std::size_t n_qubits = 0;
  bool sized = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto split = line.find_first_of(" \t");
    if (split == std::string_view::npos) {
      throw ParseError(line_no, "expected '<coefficient> <letters>'");
    }
    const std::string_view coeff_token = line.substr(0, split);
    const std::string_view letters = trim(line.substr(split));
    if (letters.find_first_of(" \t") != std::string_view::npos) {
      throw ParseError(line_no, "unexpected trailing tokens");
    }

    double coeff = 0.0;
    const char* first = coeff_token.data();
    const char* last = first + coeff_token.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, coeff);
    if (ec != std::errc() || ptr != last) {
      if (looks_complex(coeff_token)) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": non-real coefficient '" + std::string(coeff_token) + "'");
      }
      throw ParseError(line_no, "malformed coefficient '" + std::string(coeff_token) + "'");
    }
    if (!std::isfinite(coeff)) {
      throw ValidationError("line " + std::to_string(line_no) + ": non-finite coefficient");
    }

    PauliString string;
    try {
      string = PauliString::parse(letters);
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
    if (!sized) {
      n_qubits = string.n_qubits();
      sized = true;
    } else if (string.n_qubits() != n_qubits) {
      throw ParseError(line_no, "term acts on " + std::to_string(string.n_qubits()) +
                                    " qubits, expected " + std::to_string(n_qubits));
    }
    if (string.is_identity()) {
      offset += coeff;
    } else {
      terms.push_back({coeff, std::move(string)});
    }
  }
  return Hamiltonian(n_qubits, std::move(terms), offset);
}

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string format_hamiltonian_file(const Hamiltonian& h) {
  std::ostringstream out;
  // The identity line is always written so the qubit count survives a round trip.
  out << format_real(h.offset()) << ' ' << std::string(h.n_qubits(), 'I') << '\n';
  for (const auto& term : h.terms()) {
    out << format_real(term.coeff) << ' ' << term.string.str() << '\n';
  }
  return out.str();
}

}  // namespace forge
