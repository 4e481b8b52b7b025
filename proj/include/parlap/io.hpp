#pragma once

// Text formats: `u v w` edge lists, symmetric Matrix Market files holding a
// Laplacian or an adjacency matrix, and one-value-per-line vectors.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "parlap/core/error.hpp"
#include "parlap/multigraph.hpp"

namespace parlap::io {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

/// Drops a trailing `#` comment and surrounding whitespace.
inline std::string content_of(const std::string& line) { return trim(line.substr(0, line.find('#'))); }

[[noreturn]] inline void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Parse, source + ":" + std::to_string(line) + ": " + what);
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  return out;
}

/// Reads a vertex id; rejects signs, fractions and trailing garbage.
inline bool read_id(std::istream& in, std::uint64_t& id) {
  std::string token;
  if (!(in >> token) || token.empty()) return false;
  if (!std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); })) return false;
  try {
    id = std::stoull(token);
  } catch (...) {
    return false;
  }
  return true;
}

inline bool read_real(std::istream& in, double& x) {
  std::string token;
  if (!(in >> token)) return false;
  try {
    std::size_t used = 0;
    x = std::stod(token, &used);
    return used == token.size();
  } catch (...) {
    return false;
  }
}

inline void write_real(std::ostream& out, double x) { out << std::setprecision(17) << x; }

}  // namespace detail

/// One `u v w` triple per line with 0-based ids; `#` starts a comment. The
/// vertex count is the largest id plus one, or `min_vertices` if larger.
inline WeightedMultiGraph read_edge_list(std::istream& in, const std::string& source = "<edge list>",
                                         std::size_t min_vertices = 0) {
  std::vector<Edge> edges;
  std::size_t n = min_vertices;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const std::string body = detail::content_of(line);
    if (body.empty()) continue;
    std::istringstream fields(body);
    std::uint64_t u = 0, v = 0;
    double w = 0.0;
    if (!detail::read_id(fields, u) || !detail::read_id(fields, v) || !detail::read_real(fields, w))
      detail::parse_error(source, number, "expected `u v w`");
    std::string extra;
    if (fields >> extra) detail::parse_error(source, number, "unexpected trailing field `" + extra + "`");
    if (u >= kNoVertex || v >= kNoVertex) detail::parse_error(source, number, "vertex id too large");
    if (!(w > 0.0) || !std::isfinite(w)) detail::parse_error(source, number, "weight must be positive and finite");
    if (u == v) detail::parse_error(source, number, "self-loop at vertex " + std::to_string(u));
    n = std::max<std::size_t>(n, std::max(u, v) + 1);
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
  }
  return WeightedMultiGraph::from_edge_list(n, std::move(edges));
}

inline WeightedMultiGraph read_edge_list(const std::string& path, std::size_t min_vertices = 0) {
  auto in = detail::open_input(path);
  return read_edge_list(in, path, min_vertices);
}

inline void write_edge_list(std::ostream& out, const WeightedMultiGraph& g) {
  for (const Edge& e : g.edges()) {
    out << e.u << ' ' << e.v << ' ';
    detail::write_real(out, e.w);
    out << '\n';
  }
}

/// Symmetric coordinate Matrix Market (1-based). Negative off-diagonals are
/// read as a Laplacian, whose diagonal must equal the off-diagonal row sums;
/// positive (or pattern) entries are read as an adjacency matrix, which may
/// not carry a diagonal. Explicit zeros are skipped; mixed signs and repeated
/// pairs are rejected.
inline WeightedMultiGraph read_matrix_market(std::istream& in, const std::string& source = "<matrix market>") {
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) detail::parse_error(source, 1, "empty file");
  ++number;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  if (tag != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate")
    detail::parse_error(source, number, "expected `%%MatrixMarket matrix coordinate ...` banner");
  field = lower(field);
  if (field != "real" && field != "integer" && field != "pattern")
    detail::parse_error(source, number, "unsupported field `" + field + "`");
  if (lower(symmetry) != "symmetric") detail::parse_error(source, number, "only symmetric matrices are accepted");
  const bool pattern = field == "pattern";

  std::uint64_t rows = 0, cols = 0, nnz = 0;
  bool have_size = false;
  while (!have_size && std::getline(in, line)) {
    ++number;
    const std::string body = detail::trim(line);
    if (body.empty() || body[0] == '%') continue;
    std::istringstream fields(body);
    if (!detail::read_id(fields, rows) || !detail::read_id(fields, cols) || !detail::read_id(fields, nnz))
      detail::parse_error(source, number, "expected `rows cols entries`");
    have_size = true;
  }
  if (!have_size) detail::parse_error(source, number, "missing size line");
  if (rows != cols) detail::parse_error(source, number, "matrix is not square");
  if (rows >= kNoVertex) detail::parse_error(source, number, "matrix too large");

  const std::size_t n = rows;
  std::vector<double> diagonal(n, 0.0);
  std::vector<char> has_diagonal(n, 0);
  std::map<std::pair<VertexId, VertexId>, double> off;
  std::size_t read = 0;
  int sign = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = detail::trim(line);
    if (body.empty() || body[0] == '%') continue;
    std::istringstream fields(body);
    std::uint64_t i = 0, j = 0;
    double a = 1.0;
    if (!detail::read_id(fields, i) || !detail::read_id(fields, j) || (!pattern && !detail::read_real(fields, a)))
      detail::parse_error(source, number, pattern ? "expected `i j`" : "expected `i j value`");
    if (i == 0 || j == 0 || i > n || j > n) detail::parse_error(source, number, "index out of range");
    if (!std::isfinite(a)) detail::parse_error(source, number, "non-finite value");
    ++read;
    const auto r = static_cast<VertexId>(i - 1);
    const auto c = static_cast<VertexId>(j - 1);
    if (r == c) {
      if (has_diagonal[r]) detail::parse_error(source, number, "repeated diagonal entry");
      has_diagonal[r] = 1;
      diagonal[r] = a;
      continue;
    }
    if (a == 0.0) continue;
    const int s = a < 0.0 ? -1 : 1;
    if (sign != 0 && s != sign) detail::parse_error(source, number, "off-diagonal entries have mixed signs");
    sign = s;
    const auto key = std::minmax(r, c);
    if (!off.emplace(std::pair<VertexId, VertexId>(key.first, key.second), a).second)
      detail::parse_error(source, number, "repeated entry for pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  if (read != nnz)
    detail::parse_error(source, number, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(read));

  std::vector<Edge> edges;
  edges.reserve(off.size());
  std::vector<double> row_sum(n, 0.0);
  for (const auto& [key, a] : off) {
    const double w = std::abs(a);
    edges.push_back({key.first, key.second, w});
    row_sum[key.first] += w;
    row_sum[key.second] += w;
  }
  const bool laplacian = sign < 0 || (sign == 0 && std::any_of(diagonal.begin(), diagonal.end(), [](double d) { return d != 0.0; }));
  for (std::size_t v = 0; v < n; ++v) {
    if (laplacian) {
      if (std::abs(diagonal[v] - row_sum[v]) > 1e-9 * std::max(1.0, row_sum[v]))
        throw Error(ErrorCode::Parse, source + ": diagonal of row " + std::to_string(v + 1) +
                                          " does not match its off-diagonal sum");
    } else if (diagonal[v] != 0.0) {
      throw Error(ErrorCode::SelfLoop, source + ": adjacency matrix has a diagonal entry in row " + std::to_string(v + 1));
    }
  }
  return WeightedMultiGraph::from_edge_list(n, std::move(edges));
}

inline WeightedMultiGraph read_matrix_market(const std::string& path) {
  auto in = detail::open_input(path);
  return read_matrix_market(in, path);
}

/// One real per line; blank lines and `#` comments ignored.
inline std::vector<double> read_vector(std::istream& in, const std::string& source = "<vector>") {
  std::vector<double> x;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const std::string body = detail::content_of(line);
    if (body.empty()) continue;
    std::istringstream fields(body);
    double v = 0.0;
    std::string extra;
    if (!detail::read_real(fields, v) || (fields >> extra)) detail::parse_error(source, number, "expected one number");
    if (!std::isfinite(v)) detail::parse_error(source, number, "non-finite value");
    x.push_back(v);
  }
  return x;
}

inline std::vector<double> read_vector(const std::string& path) {
  auto in = detail::open_input(path);
  return read_vector(in, path);
}

inline void write_vector(std::ostream& out, std::span<const double> x) {
  for (double v : x) {
    detail::write_real(out, v);
    out << '\n';
  }
}

inline void write_vector(const std::string& path, std::span<const double> x) {
  auto out = detail::open_output(path);
  write_vector(out, x);
}

/// One vertex id per line, no repeats.
inline std::vector<VertexId> read_terminals(std::istream& in, const std::string& source = "<terminals>") {
  std::vector<VertexId> ids;
  std::unordered_set<VertexId> seen;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const std::string body = detail::content_of(line);
    if (body.empty()) continue;
    std::istringstream fields(body);
    std::uint64_t id = 0;
    std::string extra;
    if (!detail::read_id(fields, id) || (fields >> extra)) detail::parse_error(source, number, "expected one vertex id");
    if (id >= kNoVertex) detail::parse_error(source, number, "vertex id too large");
    if (!seen.insert(static_cast<VertexId>(id)).second)
      detail::parse_error(source, number, "terminal " + std::to_string(id) + " listed twice");
    ids.push_back(static_cast<VertexId>(id));
  }
  return ids;
}

inline std::vector<VertexId> read_terminals(const std::string& path) {
  auto in = detail::open_input(path);
  return read_terminals(in, path);
}

/// Edge list over local ids 0..k-1 preceded by `# map local original` lines,
/// so the output is itself a readable edge list.
inline void write_schur(std::ostream& out, const WeightedMultiGraph& g, std::span<const VertexId> terminals) {
  out << "# vertices " << terminals.size() << '\n';
  out << "# map local original\n";
  for (std::size_t i = 0; i < terminals.size(); ++i) out << "# " << i << ' ' << terminals[i] << '\n';
  write_edge_list(out, g);
}

}  // namespace parlap::io
