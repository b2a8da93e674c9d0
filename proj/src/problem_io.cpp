#include "forge/problem_io.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "forge/error.hpp"

namespace forge {

using nlohmann::json;

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kPortfolio:
      return "portfolio";
    case ProblemKind::kMaxCut:
      return "maxcut";
    case ProblemKind::kTsp:
      return "tsp";
    case ProblemKind::kFermionic:
      return "fermionic";
    case ProblemKind::kPauli:
      return "pauli";
  }
  return "unknown";
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& file, const std::string& text) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::filesystem::path tmp = file;
  tmp += ".tmp" + std::to_string(rng());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename onto " + file.string() + ": " + ec.message());
  }
}

Eigen::MatrixXd parse_returns_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      width = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
      continue;
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ParseError(line_no, "malformed number '" + cell + "'");
      }
    }
    if (row.size() != width) {
      throw ParseError(line_no, "expected " + std::to_string(width) + " columns");
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& ref) {
  const std::filesystem::path p(ref);
  return p.is_absolute() ? p : base / p;
}

GraphSpec graph_from_json(const json& doc) {
  GraphSpec g;
  g.n_nodes = doc.at("n_nodes").get<std::size_t>();
  for (const auto& e : doc.at("edges")) {
    Edge edge;
    if (e.is_array()) {
      if (e.size() < 2 || e.size() > 3) throw ValidationError("edge must be [i, j] or [i, j, w]");
      edge.i = e[0].get<std::size_t>();
      edge.j = e[1].get<std::size_t>();
      if (e.size() == 3) edge.weight = e[2].get<double>();
    } else {
      edge.i = e.at("i").get<std::size_t>();
      edge.j = e.at("j").get<std::size_t>();
      edge.weight = e.value("weight", 1.0);
    }
    g.edges.push_back(edge);
  }
  g.validate();
  return g;
}

std::string lines_or_file(const json& doc, const char* inline_key, const char* file_key,
                          const std::filesystem::path& base_dir) {
  if (doc.contains(file_key)) {
    return read_text_file(resolve(base_dir, doc.at(file_key).get<std::string>()));
  }
  std::string text;
  for (const auto& line : doc.at(inline_key)) text += line.get<std::string>() + "\n";
  return text;
}

Problem build(const json& doc, const std::filesystem::path& base_dir) {
  Problem p;
  p.source = doc;
  const auto kind = doc.at("kind").get<std::string>();
  if (kind == "portfolio") {
    p.kind = ProblemKind::kPortfolio;
    const double q = doc.value("risk_factor", 0.5);
    PortfolioSpec spec;
    if (doc.contains("returns_csv")) {
      const auto series = parse_returns_csv(
          read_text_file(resolve(base_dir, doc.at("returns_csv").get<std::string>())));
      const auto n = static_cast<std::size_t>(series.cols());
      spec = portfolio_from_returns(series, q, doc.value("budget", n / 2),
                                    doc.value("penalty", static_cast<double>(n)));
    } else {
      spec.expected_returns = doc.at("expected_returns").get<std::vector<double>>();
      const auto rows = doc.at("covariance").get<std::vector<std::vector<double>>>();
      const auto n = spec.expected_returns.size();
      spec.covariance.resize(static_cast<Eigen::Index>(rows.size()),
                             static_cast<Eigen::Index>(rows.empty() ? 0 : rows[0].size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) throw ValidationError("ragged covariance matrix");
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
          spec.covariance(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
      }
      spec.risk_factor = q;
      spec.budget = doc.value("budget", n / 2);
      spec.penalty = doc.value("penalty", static_cast<double>(n));
    }
    p.qp = portfolio_to_qp(spec);
    p.name = doc.value("name", std::to_string(spec.expected_returns.size()) +
                                   "-asset portfolio optimization");
  } else if (kind == "maxcut") {
    p.kind = ProblemKind::kMaxCut;
    p.graph = graph_from_json(doc);
    p.qp = maxcut_to_qp(*p.graph);
    p.name = doc.value("name", std::to_string(p.graph->n_nodes) + "-node Max-Cut");
  } else if (kind == "tsp") {
    p.kind = ProblemKind::kTsp;
    p.graph = graph_from_json(doc);
    const double penalty = doc.contains("penalty") ? doc.at("penalty").get<double>()
                                                   : default_tsp_penalty(*p.graph);
    const auto encoding = doc.value("encoding", std::string("full"));
    if (encoding != "full" && encoding != "reduced") {
      throw ValidationError("tsp encoding must be 'full' or 'reduced'");
    }
    p.qp = tsp_to_qp(*p.graph, penalty,
                     encoding == "full" ? TspEncoding::kFull : TspEncoding::kReduced);
    p.name = doc.value("name", std::to_string(p.graph->n_nodes) + "-city traveling salesman");
  } else if (kind == "fermionic") {
    p.kind = ProblemKind::kFermionic;
    const auto n_modes = doc.at("n_modes").get<std::size_t>();
    p.hamiltonian =
        jordan_wigner(parse_fermionic_terms(lines_or_file(doc, "terms", "terms_file", base_dir)),
                      n_modes);
    p.name = doc.value("name", "fermionic system");
  } else if (kind == "pauli") {
    p.kind = ProblemKind::kPauli;
    p.hamiltonian =
        parse_hamiltonian_file(lines_or_file(doc, "terms", "hamiltonian_file", base_dir));
    if (doc.contains("n_qubits") && doc.at("n_qubits").get<std::size_t>() != p.hamiltonian.n_qubits()) {
      throw ValidationError("n_qubits does not match the Pauli terms");
    }
    p.name = doc.value("name", "Pauli Hamiltonian");
  } else {
    throw ValidationError("unknown problem kind '" + kind + "'");
  }
  if (p.qp) p.hamiltonian = qp_to_ising(*p.qp);
  return p;
}

}  // namespace

Problem problem_from_json(const json& doc, const std::filesystem::path& base_dir) {
  try {
    return build(doc, base_dir);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("problem document: ") + e.what());
  }
}

Problem load_problem(const std::filesystem::path& file) {
  json doc;
  try {
    doc = json::parse(read_text_file(file));
  } catch (const json::parse_error& e) {
    throw FormatError(file.string() + ": " + e.what());
  }
  return problem_from_json(doc, file.parent_path());
}

}  // namespace forge
