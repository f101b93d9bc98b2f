#include "newstag/graph_io.hpp"
#include "newstag/report.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace newstag {

namespace {

// (row, col, value) with row < col (or row <= col), sorted row-major.
std::vector<std::tuple<Index, Index, double>> upper_entries(const SparseMatrix<double>& m,
                                                            bool with_diagonal) {
  std::vector<std::tuple<Index, Index, double>> entries;
  for (Index col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
      if (it.row() < it.col() || (with_diagonal && it.row() == it.col())) {
        entries.emplace_back(it.row(), it.col(), it.value());
      }
    }
  }
  std::sort(entries.begin(), entries.end());
  return entries;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

const char* dot_color(const char* cls) {
  const std::string c = cls;
  return c == "high" ? "blue" : c == "low" ? "red" : "gray";
}

}  // namespace

const char* color_class(double credibility) {
  if (credibility >= 0.9) return "high";
  if (credibility <= -0.9) return "low";
  return "mid";
}

void write_edge_list(std::ostream& out, const Vocabulary& vocab, const SparseMatrix<double>& matrix) {
  out << "hashtag_a\thashtag_b\tweight\n";
  for (const auto& [r, c, v] : upper_entries(matrix, false)) {
    out << vocab.token(r) << '\t' << vocab.token(c) << '\t' << format_double(v) << '\n';
  }
}

void write_node_table(std::ostream& out, const Vocabulary& vocab,
                      const CredibilityVector<double>& credibility) {
  out << "hashtag\tcredibility\tcolor_class\n";
  for (Index k = 0; k < vocab.size(); ++k) {
    const double c = credibility.values(k);
    out << vocab.token(k) << '\t' << format_double(c) << '\t' << color_class(c) << '\n';
  }
}

void write_dot(std::ostream& out, const Vocabulary& vocab, const SparseMatrix<double>& matrix,
               const CredibilityVector<double>* credibility) {
  out << "graph hashtags {\n";
  for (Index k = 0; k < vocab.size(); ++k) {
    out << "  " << quoted(vocab.token(k));
    if (credibility) {
      const double c = credibility->values(k);
      out << " [credibility=" << format_double(c) << ", color=" << dot_color(color_class(c)) << "]";
    }
    out << ";\n";
  }
  for (const auto& [r, c, v] : upper_entries(matrix, false)) {
    out << "  " << quoted(vocab.token(r)) << " -- " << quoted(vocab.token(c))
        << " [weight=" << format_double(v) << "];\n";
  }
  out << "}\n";
}

void write_triplet(std::ostream& out, const RelationMatrix<double>& matrix) {
  const auto entries = upper_entries(matrix.values, true);
  out << "%%newstag-relation " << to_string(matrix.kind) << ' ' << matrix.terms << '\n';
  out << matrix.values.rows() << ' ' << matrix.values.cols() << ' ' << entries.size() << '\n';
  for (const auto& [r, c, v] : entries) out << r << ' ' << c << ' ' << format_double(v) << '\n';
}

RelationMatrix<double> read_triplet(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DataError("empty relation file");
  std::istringstream h(header);
  std::string magic, kind;
  int terms = 0;
  if (!(h >> magic >> kind >> terms) || magic != "%%newstag-relation") {
    throw DataError("not a newstag relation file");
  }
  RelationMatrix<double> m;
  if (kind == "normalized_direct") m.kind = RelationKind::normalized_direct;
  else if (kind == "all_relations_truncated") m.kind = RelationKind::all_relations_truncated;
  else if (kind == "all_relations_exact") m.kind = RelationKind::all_relations_exact;
  else throw DataError("unknown relation kind: " + kind);
  m.terms = terms;

  Index rows = 0, cols = 0, nnz = 0;
  if (!(in >> rows >> cols >> nnz) || rows != cols || rows < 0 || nnz < 0) {
    throw DataError("bad relation dimensions");
  }
  std::vector<Eigen::Triplet<double, Index>> entries;
  for (Index e = 0; e < nnz; ++e) {
    Index r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) throw DataError("truncated relation file");
    if (r < 0 || c >= cols || r > c) throw DataError("relation entry outside the upper triangle");
    entries.emplace_back(r, c, v);
    if (r != c) entries.emplace_back(c, r, v);
  }
  m.values.resize(rows, cols);
  m.values.setFromTriplets(entries.begin(), entries.end());
  m.values.makeCompressed();
  return m;
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (const auto& token : vocab.tokens()) out << token << '\n';
}

Vocabulary read_vocabulary(std::istream& in) {
  std::vector<std::string> tokens;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) tokens.push_back(line);
  }
  return Vocabulary(std::move(tokens));
}

void write_credibility(std::ostream& out, const Vocabulary& vocab,
                       const CredibilityVector<double>& credibility) {
  out << "hashtag\tscore\tprovenance\n";
  for (Index k = 0; k < vocab.size(); ++k) {
    out << vocab.token(k) << '\t' << format_double(credibility.values(k)) << '\t'
        << to_string(credibility.provenance) << '\n';
  }
}

}  // namespace newstag
