#ifndef NEWSTAG_GRAPH_IO_HPP
#define NEWSTAG_GRAPH_IO_HPP

#include "newstag/credibility.hpp"
#include "newstag/hashtag_graph.hpp"

#include <iosfwd>
#include <string>

namespace newstag {

/// Node colouring: "high" at >= 0.9, "low" at <= -0.9, else "mid".
const char* color_class(double credibility);

/// `hashtag_a\thashtag_b\tweight` rows for the strict upper triangle, header first.
void write_edge_list(std::ostream& out, const Vocabulary& vocab,
                     const SparseMatrix<double>& matrix);

/// `hashtag\tcredibility\tcolor_class` rows, header first.
void write_node_table(std::ostream& out, const Vocabulary& vocab,
                      const CredibilityVector<double>& credibility);

/// Undirected Graphviz graph; nodes are coloured by credibility when given.
void write_dot(std::ostream& out, const Vocabulary& vocab, const SparseMatrix<double>& matrix,
               const CredibilityVector<double>* credibility = nullptr);

/// Sparse triplet text format:
///
///     %%newstag-relation <kind> <terms>
///     <rows> <cols> <nnz in upper triangle>
///     <row> <col> <value>        (0-based, row <= col, one line per entry)
///
/// Values are written with round-trip precision.
void write_triplet(std::ostream& out, const RelationMatrix<double>& matrix);
RelationMatrix<double> read_triplet(std::istream& in);

/// One hashtag per line, in index order.
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in);

/// `hashtag\tscore\tprovenance` rows, header first.
void write_credibility(std::ostream& out, const Vocabulary& vocab,
                       const CredibilityVector<double>& credibility);

}  // namespace newstag

#endif  // NEWSTAG_GRAPH_IO_HPP
