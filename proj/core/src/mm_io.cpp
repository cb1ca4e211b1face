#include "intgmres/mm_io.hpp"

#include "intgmres/split.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace intgmres {

namespace {

[[noreturn]] void fail(const std::string& path, long line,
                       const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

CsrMatrixF load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") fail(path, lineno, "missing MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate")
    fail(path, lineno, "only coordinate matrices are supported");
  if (field != "real" && field != "integer")
    fail(path, lineno, "unsupported field type '" + field + "'");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    fail(path, lineno, "unsupported symmetry '" + symmetry + "'");

  long rows = -1, cols = -1, entries = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> entries))
      fail(path, lineno, "malformed size line");
    break;
  }
  if (rows < 0) fail(path, lineno, "missing size line");
  if (rows != cols) fail(path, lineno, "matrix must be square");
  if (rows == 0) fail(path, lineno, "matrix must be non-empty");

  std::vector<std::tuple<int, int, double>> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
  std::set<std::pair<int, int>> seen;
  long parsed = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    if (parsed == entries) fail(path, lineno, "more entries than declared");
    std::istringstream es(line);
    long i, j;
    double v;
    if (!(es >> i >> j >> v)) fail(path, lineno, "malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols)
      fail(path, lineno, "index out of range");
    if (symmetric && j > i)
      fail(path, lineno, "symmetric file stores only the lower triangle");
    if (!seen.emplace(static_cast<int>(i), static_cast<int>(j)).second)
      fail(path, lineno, "duplicate entry");
    ++parsed;
    t.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (symmetric && i != j)
      t.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
  }
  if (parsed != entries)
    fail(path, lineno, "fewer entries than declared (" +
                           std::to_string(parsed) + " of " +
                           std::to_string(entries) + ")");

  return from_triplets(static_cast<int>(rows), std::move(t));
}

void save_matrix_market(const std::string& path, const CsrMatrixF& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.n << " " << m.n << " " << m.nnz() << "\n";
  char buf[64];
  for (int i = 0; i < m.n; ++i) {
    for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, m.col_idx[k] + 1,
                    m.vals[k]);
      out << buf;
    }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace intgmres
