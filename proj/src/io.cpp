#include "gsp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gsp/errors.hpp"

namespace gsp {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  return out;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s, long line) {
  size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'", line);
  }
  if (!blank(s.substr(used))) throw ParseError("trailing characters in '" + s + "'", line);
  return v;
}

}  // namespace

Graph read_matrix_market(std::istream& in) {
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" ||
      lower(format) != "coordinate") {
    throw ParseError("expected '%%MatrixMarket matrix coordinate ...' header", lineno);
  }
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer") throw ParseError("unsupported field '" + field + "'", lineno);
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  }
  const bool directed = symmetry == "general";

  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> rows >> cols >> nnz) || (ss >> extra)) throw ParseError("malformed size line", lineno);
    break;
  }
  if (rows < 0) throw ParseError("missing size line", lineno);
  if (rows != cols) throw ParseError("adjacency matrix must be square", lineno);
  if (nnz < 0) throw ParseError("negative entry count", lineno);
  if (rows > std::numeric_limits<int>::max()) throw ParseError("too many nodes", lineno);

  const int n = static_cast<int>(rows);
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(nnz));
  std::vector<std::pair<long, long>> seen;
  seen.reserve(static_cast<size_t>(nnz));
  std::vector<long> origin;
  while (static_cast<long>(edges.size()) < nnz && std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    std::istringstream ss(line);
    long i, j;
    std::string wtok, extra;
    if (!(ss >> i >> j >> wtok) || (ss >> extra)) throw ParseError("malformed entry", lineno);
    const double w = parse_double(wtok, lineno);
    if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("index out of bounds", lineno);
    if (!(w > 0.0) || !std::isfinite(w)) throw ParseError("non-positive weight", lineno);
    if (i == j) throw ParseError("self-loop", lineno);
    long a = i - 1, b = j - 1;
    if (!directed && a < b) std::swap(a, b);
    seen.emplace_back(a, b);
    origin.push_back(lineno);
    edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), w});
  }
  if (static_cast<long>(edges.size()) < nnz) throw ParseError("fewer entries than declared", lineno);

  std::vector<size_t> order(seen.size());
  for (size_t t = 0; t < order.size(); ++t) order[t] = t;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return seen[x] < seen[y]; });
  for (size_t t = 1; t < order.size(); ++t) {
    if (seen[order[t]] == seen[order[t - 1]]) {
      throw ParseError("duplicate entry", std::max(origin[order[t]], origin[order[t - 1]]));
    }
  }
  return Graph::from_edges(n, edges, directed);
}

void write_matrix_market(const Graph& g, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real " << (g.directed() ? "general" : "symmetric")
      << "\n";
  const auto edges = g.edges();
  out << g.num_nodes() << " " << g.num_nodes() << " " << edges.size() << "\n";
  out << std::setprecision(17);
  for (const auto& e : edges) {
    // Symmetric files keep the lower triangle.
    int i = e.src, j = e.dst;
    if (!g.directed()) std::swap(i, j);
    out << i + 1 << " " << j + 1 << " " << e.weight << "\n";
  }
}

Graph load_graph(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_market(in);
}

void save_graph(const Graph& g, const std::string& path) {
  auto out = open_out(path);
  write_matrix_market(g, out);
}

FeatureMatrix read_features(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::vector<double> row;
    for (const auto& cell : split_commas(line)) {
      const double v = parse_double(cell, lineno);
      if (!std::isfinite(v)) throw ParseError("non-finite feature", lineno);
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("row length differs from first row", lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no feature rows", lineno);
  FeatureMatrix x(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) x(i, j) = rows[i][j];
  }
  return x;
}

FeatureMatrix load_features(const std::string& path) {
  auto in = open_in(path);
  return read_features(in);
}

std::vector<int> load_labels(const std::string& path) {
  auto in = open_in(path);
  std::vector<int> labels;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto cells = split_commas(line);
    const double v = parse_double(cells.back(), lineno);
    if (v != std::floor(v)) throw ParseError("label is not an integer", lineno);
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

void save_signal(const Eigen::VectorXd& f, const std::string& path) {
  auto out = open_out(path);
  out << "node,value\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < f.size(); ++i) out << i << "," << f[i] << "\n";
}

Eigen::VectorXd load_signal(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  long lineno = 0;
  std::vector<std::pair<long, double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto cells = split_commas(line);
    if (cells.size() != 2) throw ParseError("expected node,value", lineno);
    if (lineno == 1 && cells[0] == "node") continue;
    const double node = parse_double(cells[0], lineno);
    rows.emplace_back(static_cast<long>(node), parse_double(cells[1], lineno));
  }
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));
  for (const auto& [node, value] : rows) {
    if (node < 0 || node >= f.size()) throw ParseError("node index out of range", lineno);
    f[node] = value;
  }
  return f;
}

}  // namespace gsp
