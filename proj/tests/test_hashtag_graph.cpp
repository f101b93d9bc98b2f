#include "doctest.h"

#include "newstag/graph_io.hpp"
#include "newstag/hashtag_graph.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace newstag;
using testing::make_news;

namespace {

Corpus abc_corpus() {
  return Corpus({make_news("n1", Label::real, {{"a", "b", "c"}}),
                 make_news("n2", Label::fake, {{"b", "c"}})});
}

HashtagGraph path_graph() {
  // a - b - c with unit weights
  return build_direct_graph(Corpus({make_news("n1", Label::real, {{"a", "b"}, {"b", "c"}})}));
}

Eigen::MatrixXd dense(const SparseMatrix<double>& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST_CASE("build_direct_graph counts co-occurring posts") {
  const auto g = build_direct_graph(abc_corpus());
  const Index a = *g.vocab.find("a"), b = *g.vocab.find("b"), c = *g.vocab.find("c");
  CHECK(g.weight(a, b) == 1);
  CHECK(g.weight(a, c) == 1);
  CHECK(g.weight(b, c) == 2);
  CHECK(g.weight(c, b) == 2);
  CHECK(g.weight(a, a) == 0);
  CHECK(g.vocab.tokens() == std::vector<std::string>{"a", "b", "c"});

  const auto unweighted = build_direct_graph(abc_corpus(), false);
  CHECK(unweighted.weight(a, b) == 1);
  CHECK(unweighted.weight(a, c) == 1);
  CHECK(unweighted.weight(b, c) == 1);
}

TEST_CASE("build_direct_graph matches pair enumeration on random corpora") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> tag(0, 29), size(0, 5), posts(0, 4);
  for (int round = 0; round < 10; ++round) {
    std::vector<NewsItem> news;
    for (int i = 0; i < 25; ++i) {
      std::vector<std::vector<std::string>> ps;
      for (int j = posts(rng); j > 0; --j) {
        std::vector<std::string> tags;
        for (int t = size(rng); t > 0; --t) {
          const auto s = "h" + std::to_string(tag(rng));
          if (std::find(tags.begin(), tags.end(), s) == tags.end()) tags.push_back(s);
        }
        ps.push_back(tags);
      }
      news.push_back(make_news("n" + std::to_string(i), Label::real, ps));
    }
    const Corpus corpus(news);
    const auto g = build_direct_graph(corpus);
    const auto expected = testing::enumerate_pairs(corpus);
    std::int64_t total = 0;
    for (const auto& [pair, count] : expected) {
      CHECK(g.weight(*g.vocab.find(pair.first), *g.vocab.find(pair.second)) == count);
      total += count;
    }
    std::int64_t stored = 0;
    for (Index k = 0; k < g.upper.outerSize(); ++k)
      for (SparseMatrix<std::int64_t>::InnerIterator it(g.upper, k); it; ++it) {
        CHECK(it.row() < it.col());
        stored += it.value();
      }
    CHECK(stored == total);
    CHECK(static_cast<std::size_t>(g.size()) == corpus.vocabulary().size());
  }
}

TEST_CASE("single-hashtag posts give an edgeless graph that cannot be normalized") {
  const auto g = build_direct_graph(Corpus({make_news("n", Label::real, {{"a"}, {"b"}})}));
  CHECK(g.size() == 2);
  CHECK(g.edge_count() == 0);
  CHECK_THROWS_WITH_AS(normalize<double>(g), "cannot normalize edgeless graph", DataError);
}

TEST_CASE("normalize divides by the maximum weighted degree") {
  const auto n = normalize<double>(path_graph());
  Eigen::MatrixXd expected(3, 3);
  expected << 0, .5, 0, .5, 0, .5, 0, .5, 0;
  CHECK((dense(n.values) - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(dense(n.values).rowwise().sum().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));

  const auto single = normalize<double>(build_direct_graph(Corpus({make_news(
      "n", Label::real, {{"x", "y"}, {"x", "y"}, {"x", "y"}, {"x", "y"}, {"x", "y"}, {"x", "y"},
                         {"x", "y"}})})));
  CHECK(dense(single.values)(0, 1) == 1.0);
  CHECK(dense(single.values)(1, 0) == 1.0);
}

TEST_CASE("normalize is exactly invariant to replicating every post") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 5; ++round) {
    auto base = testing::random_graph(rng, 20, 0.3, 6);
    if (base.graph.edge_count() == 0) continue;
    for (std::int64_t alpha : {2, 3, 17}) {
      HashtagGraph scaled = base.graph;
      scaled.upper = scaled.upper * alpha;
      CHECK((dense(normalize<double>(scaled).values) - dense(normalize<double>(base.graph).values))
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("truncated closure on the path graph") {
  const auto n = normalize<double>(path_graph());
  const auto k1 = all_relations_truncated(n, {.k1 = 1});
  CHECK((dense(k1.matrix.values) - dense(n.values)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(k1.matrix.terms == 1);

  const auto k2 = all_relations_truncated(n, {.k1 = 2});
  // Frozen from the dense power-sum oracle: N + N^2.
  const Eigen::MatrixXd oracle = testing::dense_power_sum(dense(n.values), 2);
  Eigen::MatrixXd expected(3, 3);
  expected << .25, .5, .25, .5, .5, .5, .25, .5, .25;
  CHECK((oracle - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((dense(k2.matrix.values) - expected).cwiseAbs().maxCoeff() < 1e-15);
  // Indirect relation between a and c, which never co-occur.
  CHECK(dense(k2.matrix.values)(0, 2) == doctest::Approx(0.25));
}

TEST_CASE("truncated closure agrees with the dense oracle, sparse or dense products") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 20; ++round) {
    auto rg = testing::random_graph(rng, 5 + round * 2, 0.25, 4);
    if (rg.graph.edge_count() == 0) continue;
    const auto n = normalize<double>(rg.graph);
    const Eigen::MatrixXd oracle = testing::dense_power_sum(dense(n.values), 7);
    for (double switch_density : {0.0, 2.0}) {
      ClosureOptions options{.k1 = 7, .dense_switch_density = switch_density};
      const auto closure = all_relations_truncated(n, options);
      const Eigen::MatrixXd got = dense(closure.matrix.values);
      CHECK((got - oracle).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(testing::max_asymmetry(got) == 0.0);
      CHECK(closure.relative_changes.size() == 7);
    }
  }
}

TEST_CASE("truncated closure accumulates monotonically and its trace decays") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 10; ++round) {
    auto rg = testing::random_graph(rng, 30, 0.2, 5);
    if (rg.graph.edge_count() == 0) continue;
    const auto n = normalize<double>(rg.graph);
    Eigen::MatrixXd previous = dense(all_relations_truncated(n, {.k1 = 1}).matrix.values);
    for (int k = 2; k <= 8; ++k) {
      const Eigen::MatrixXd next = dense(all_relations_truncated(n, {.k1 = k}).matrix.values);
      CHECK((next.array() >= previous.array()).all());
      previous = next;
    }
    const auto trace = all_relations_truncated(n, {.k1 = 12}).relative_changes;
    CHECK(trace.front() == 1.0);
    for (std::size_t t = 2; t < trace.size(); ++t) CHECK(trace[t] <= trace[t - 1]);
  }
}

TEST_CASE("closure convergence tolerance stops early") {
  const auto n = normalize<double>(path_graph());
  const auto closure = all_relations_truncated(n, {.k1 = 500, .convergence_tolerance = 1e-9});
  CHECK(closure.matrix.terms < 500);
  CHECK(closure.relative_changes.back() < 1e-9);
  CHECK(closure.relative_changes.size() == static_cast<std::size_t>(closure.matrix.terms));
}

TEST_CASE("drop tolerance prunes small entries") {
  std::mt19937_64 rng(3);
  auto rg = testing::random_graph(rng, 40, 0.1, 3);
  const auto n = normalize<double>(rg.graph);
  const auto full = all_relations_truncated(n, {.k1 = 6});
  const auto pruned = all_relations_truncated(n, {.k1 = 6, .drop_tolerance = 1e-3});
  CHECK(pruned.matrix.values.nonZeros() <= full.matrix.values.nonZeros());
  for (Index k = 0; k < pruned.matrix.values.outerSize(); ++k)
    for (SparseMatrix<double>::InnerIterator it(pruned.matrix.values, k); it; ++it)
      CHECK(it.value() >= 1e-3);
  CHECK_THROWS_AS(all_relations_truncated(n, {.k1 = 0}), ValidationError);
  CHECK_THROWS_AS(all_relations_truncated(n, {.k1 = 2, .drop_tolerance = -1}), ValidationError);
}

TEST_CASE("exact closure: 2x2 values and divergence") {
  RelationMatrix<double> half;
  half.values.resize(2, 2);
  half.values.insert(0, 1) = 0.5;
  half.values.insert(1, 0) = 0.5;
  const auto exact = all_relations_exact(half);
  Eigen::MatrixXd expected(2, 2);
  expected << 1.0 / 3, 2.0 / 3, 2.0 / 3, 1.0 / 3;
  CHECK((dense(exact.values) - expected).cwiseAbs().maxCoeff() < 1e-15);

  // A single edge normalizes to [[0,1],[1,0]] with eigenvalues +-1.
  const auto single = normalize<double>(
      build_direct_graph(Corpus({make_news("n", Label::real, {{"x", "y"}})})));
  CHECK_THROWS_WITH_AS(all_relations_exact(single), "series divergent", NumericalError);
  CHECK_THROWS_WITH_AS(all_relations_exact(single, {.dense_cap = 0}), "series divergent",
                       NumericalError);
}

TEST_CASE("exact closure matches the truncated series within the geometric tail bound") {
  std::mt19937_64 rng(77);
  int checked = 0;
  while (checked < 15) {
    auto rg = testing::random_graph(rng, 10 + checked * 2, 0.2, 5);
    if (rg.graph.edge_count() == 0) continue;
    const auto n = normalize<double>(rg.graph);
    const double rho = testing::dense_radius(dense(n.values));
    if (rho > 0.9) continue;
    // Entrywise tail of sum_{t>k} N^t is at most rho^(k+1) / (1 - rho).
    const int k1 = static_cast<int>(std::ceil(std::log(1e-11 * (1 - rho)) / std::log(rho)));
    const auto truncated = all_relations_truncated(n, {.k1 = k1});
    const Eigen::MatrixXd diff = dense(truncated.matrix.values) - dense(all_relations_exact(n).values);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-9);
    const Eigen::MatrixXd diff_sparse =
        dense(all_relations_exact(n, {.dense_cap = 0}).values) - dense(all_relations_exact(n).values);
    CHECK(diff_sparse.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(spectral_radius_estimate(n.values) == doctest::Approx(rho).epsilon(1e-6));
    ++checked;
  }
}

TEST_CASE("relabeling the vocabulary permutes every matrix") {
  std::mt19937_64 rng(13);
  auto rg = testing::random_graph(rng, 25, 0.2, 4);
  const auto n = normalize<double>(rg.graph);
  const Eigen::MatrixXd w_all = dense(all_relations_truncated(n, {.k1 = 5}).matrix.values);

  std::vector<int> perm(25);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, Index> p(25);
  for (int i = 0; i < 25; ++i) p.indices()(i) = perm[i];

  HashtagGraph permuted = rg.graph;
  const Eigen::MatrixXd pw = p * rg.dense * p.transpose();
  std::vector<Eigen::Triplet<std::int64_t, Index>> entries;
  for (Index k = 0; k < 25; ++k)
    for (Index l = k + 1; l < 25; ++l)
      if (pw(k, l) > 0) entries.emplace_back(k, l, static_cast<std::int64_t>(pw(k, l)));
  permuted.upper.setZero();
  permuted.upper.setFromTriplets(entries.begin(), entries.end());
  const Eigen::MatrixXd permuted_all =
      dense(all_relations_truncated(normalize<double>(permuted), {.k1 = 5}).matrix.values);
  CHECK((permuted_all - p * w_all * p.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("color classes follow the 0.9 thresholds") {
  CHECK(std::string(color_class(0.95)) == "high");
  CHECK(std::string(color_class(0.9)) == "high");
  CHECK(std::string(color_class(-0.95)) == "low");
  CHECK(std::string(color_class(-0.9)) == "low");
  CHECK(std::string(color_class(0.0)) == "mid");
  CHECK(std::string(color_class(0.89)) == "mid");
}

TEST_CASE("edge list, node table and DOT export") {
  const auto g = build_direct_graph(abc_corpus());
  const auto matrix = g.adjacency<double>();
  std::ostringstream edges;
  write_edge_list(edges, g.vocab, matrix);
  CHECK(edges.str() == "hashtag_a\thashtag_b\tweight\na\tb\t1\na\tc\t1\nb\tc\t2\n");

  CredibilityVector<double> c;
  c.values = Eigen::Vector3d(0.95, -0.95, 0.0);
  c.provenance = Provenance::all_data_c_star;
  std::ostringstream nodes;
  write_node_table(nodes, g.vocab, c);
  CHECK(nodes.str() ==
        "hashtag\tcredibility\tcolor_class\na\t0.95\thigh\nb\t-0.95\tlow\nc\t0\tmid\n");

  std::ostringstream dot;
  write_dot(dot, g.vocab, matrix, &c);
  CHECK(dot.str().find("graph hashtags {") == 0);
  CHECK(dot.str().find("\"b\" -- \"c\" [weight=2]") != std::string::npos);
}

TEST_CASE("triplet format round-trips and stores the upper triangle only") {
  std::mt19937_64 rng(4);
  auto rg = testing::random_graph(rng, 15, 0.3, 5);
  const auto closure = all_relations_truncated(normalize<double>(rg.graph), {.k1 = 3});
  std::ostringstream out;
  write_triplet(out, closure.matrix);
  std::istringstream in(out.str());
  const auto back = read_triplet(in);
  CHECK(back.kind == RelationKind::all_relations_truncated);
  CHECK(back.terms == 3);
  CHECK((dense(back.values) - dense(closure.matrix.values)).cwiseAbs().maxCoeff() == 0.0);

  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "%%newstag-relation all_relations_truncated 3");
  std::getline(lines, line);
  Index row = 0, col = 0;
  double value = 0;
  while (lines >> row >> col >> value) CHECK(row <= col);

  std::istringstream broken("%%newstag-relation normalized_direct 1\n2 2 1\n1 0 0.5\n");
  CHECK_THROWS_AS(read_triplet(broken), DataError);
}

TEST_CASE("vocabulary file round-trips") {
  const Vocabulary vocab({"a", "b", "\xC3\xA9t\xC3\xA9"});
  std::ostringstream out;
  write_vocabulary(out, vocab);
  std::istringstream in(out.str());
  CHECK(read_vocabulary(in) == vocab);
  CHECK_THROWS_AS(Vocabulary({"a", "a"}), DataError);
}
