#include "newstag/hashtag_graph.hpp"

namespace newstag {

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  index_.reserve(tokens_.size());
  for (std::size_t k = 0; k < tokens_.size(); ++k) {
    if (!index_.emplace(tokens_[k], static_cast<Index>(k)).second) {
      throw DataError("duplicate vocabulary entry: " + tokens_[k]);
    }
  }
}

std::optional<Index> Vocabulary::find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::int64_t HashtagGraph::weight(Index k, Index l) const {
  if (k == l) return 0;
  if (k > l) std::swap(k, l);
  return upper.coeff(k, l);
}

std::vector<std::int64_t> HashtagGraph::row_sums() const {
  std::vector<std::int64_t> sums(static_cast<std::size_t>(size()), 0);
  for (Index col = 0; col < upper.outerSize(); ++col) {
    for (SparseMatrix<std::int64_t>::InnerIterator it(upper, col); it; ++it) {
      sums[static_cast<std::size_t>(it.row())] += it.value();
      sums[static_cast<std::size_t>(it.col())] += it.value();
    }
  }
  return sums;
}

HashtagGraph build_direct_graph(const Corpus& corpus, bool weighted) {
  HashtagGraph graph;
  graph.vocab = Vocabulary(corpus.vocabulary());
  const Index q = graph.vocab.size();

  std::vector<Eigen::Triplet<std::int64_t, Index>> pairs;
  std::vector<Index> ids;
  for (const auto& news : corpus.news()) {
    for (const auto& post : news.posts) {
      ids.clear();
      for (const auto& tag : post.hashtags) ids.push_back(*graph.vocab.find(tag));
      std::sort(ids.begin(), ids.end());
      for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
          pairs.emplace_back(ids[a], ids[b], 1);
        }
      }
    }
  }
  graph.upper.resize(q, q);
  graph.upper.setFromTriplets(pairs.begin(), pairs.end());
  if (!weighted) {
    for (Index col = 0; col < graph.upper.outerSize(); ++col) {
      for (SparseMatrix<std::int64_t>::InnerIterator it(graph.upper, col); it; ++it) it.valueRef() = 1;
    }
  }
  graph.upper.makeCompressed();
  return graph;
}

const char* to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::normalized_direct:
      return "normalized_direct";
    case RelationKind::all_relations_truncated:
      return "all_relations_truncated";
    case RelationKind::all_relations_exact:
      return "all_relations_exact";
  }
  return "unknown";
}

void ClosureOptions::validate() const {
  if (k1 < 1) throw ValidationError("k1 must be >= 1");
  if (!(drop_tolerance >= 0.0)) throw ValidationError("drop tolerance must be >= 0");
  if (!(convergence_tolerance >= 0.0)) throw ValidationError("closure tolerance must be >= 0");
  if (!(dense_switch_density >= 0.0)) throw ValidationError("dense switch density must be >= 0");
}

}  // namespace newstag
