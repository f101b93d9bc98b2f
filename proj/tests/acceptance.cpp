// Acceptance checks, one [PASS]/[FAIL] line per criterion. Exit status is the
// number of failed criteria.

#include "cli.hpp"
#include "newstag/credibility.hpp"
#include "newstag/harness.hpp"
#include "newstag/hashtag_graph.hpp"
#include "newstag/metrics.hpp"
#include "newstag/synthetic.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace newstag;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, bool passed, const std::string& detail) {
  std::cout << (passed ? "[PASS] " : "[FAIL] ") << id << ". " << name << ": " << detail << "\n";
  if (!passed) ++failures;
}

void note(const std::string& text) { std::cout << "       note: " << text << "\n"; }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

Eigen::MatrixXd dense(const SparseMatrix<double>& m) { return Eigen::MatrixXd(m); }

// A propagation instance: operator X of a random symmetric relation, a c0 and a mu.
struct Instance {
  SparseMatrix<double> w;
  NormalizedOperator<double> op;
  CredibilityVector<double> c0;
  double mu = 0.5;
};

std::vector<Instance> propagation_instances(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(5, 50);
  std::uniform_real_distribution<double> density(0.05, 0.3);
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    Instance inst;
    const int q = size(rng);
    inst.w = testing::random_relation(rng, q, density(rng));
    inst.op = symmetric_normalize(inst.w);
    inst.c0.values = testing::random_c0(rng, q);
    inst.mu = 0.1 * (1 + i % 9);
    out.push_back(std::move(inst));
  }
  return out;
}

PropagationConfig closed_form(double mu) {
  PropagationConfig c;
  c.mu = mu;
  c.mode = PropagationMode::closed_form;
  return c;
}

// ---------------------------------------------------------------------------

void closure_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> size(5, 50);
  std::uniform_real_distribution<double> density(0.05, 0.3);
  int graphs = 0, rejected = 0, violations = 0, tail_violations = 0;
  double worst = 0.0, worst_rho = 0.0;
  while (graphs < 100) {
    const auto rg = testing::random_graph(rng, size(rng), density(rng), 5);
    if (rg.graph.edge_count() == 0) {
      ++rejected;
      continue;
    }
    const auto n = normalize<double>(rg.graph);
    const double rho = testing::dense_radius(dense(n.values));
    if (rho > 0.9) {
      ++rejected;
      continue;
    }
    ++graphs;
    const Eigen::MatrixXd truncated =
        dense(all_relations_truncated(n, {.k1 = 40}).matrix.values);
    const Eigen::MatrixXd exact = dense(all_relations_exact(n).values);
    const double err = (truncated - exact).cwiseAbs().maxCoeff();
    if (err > 1e-8) ++violations;
    if (err > std::pow(rho, 41) / (1.0 - rho) + 1e-12) ++tail_violations;
    if (err > worst) {
      worst = err;
      worst_rho = rho;
    }
  }
  const double elapsed = seconds_since(start);
  report(1, "closure oracle (k1=40 vs exact, 1e-8)", violations == 0 && elapsed < 10.0,
         std::to_string(graphs) + " graphs, " + std::to_string(violations) +
             " above 1e-8, max error " + fmt(worst) + " at radius " + fmt(worst_rho) + ", " +
             fmt(elapsed) + " s");
  note("geometric tail bound rho^41/(1-rho) respected on " + std::to_string(graphs - tail_violations) +
       "/" + std::to_string(graphs) + " graphs (" + std::to_string(rejected) + " rejected draws)");
}

void propagation_equivalence() {
  const auto start = Clock::now();
  int violations = 0;
  double worst = 0.0, worst_residual = 0.0;
  for (const auto& inst : propagation_instances(7, 100)) {
    PropagationConfig iter;
    iter.mu = inst.mu;
    iter.tolerance = 1e-12;
    iter.max_iterations = 10000;
    const auto it = propagate_iterative(inst.op.x, inst.c0, iter).credibility.values;
    const auto cf = propagate_closed_form(inst.op.x, inst.c0, closed_form(inst.mu)).values;
    const double err = (it - cf).cwiseAbs().maxCoeff();
    double residual = 0.0;
    for (const Vector<double>* c : {&it, &cf}) {
      const Vector<double> fixed = inst.mu * (inst.op.x * *c) + (1 - inst.mu) * inst.c0.values;
      residual = std::max(residual, (*c - fixed).cwiseAbs().maxCoeff());
    }
    if (err > 1e-8 || residual > 1e-8) ++violations;
    worst = std::max(worst, err);
    worst_residual = std::max(worst_residual, residual);
  }
  const double elapsed = seconds_since(start);
  report(2, "iterative and closed-form propagation agree", violations == 0 && elapsed < 10.0,
         "100 instances, max difference " + fmt(worst) + ", max fixed-point residual " +
             fmt(worst_residual) + ", " + fmt(elapsed) + " s");
}

void contraction_rate() {
  int violations = 0, ratios = 0;
  double worst_excess = -1.0;
  for (const auto& inst : propagation_instances(7, 100)) {
    const auto target = propagate_closed_form(inst.op.x, inst.c0, closed_form(inst.mu)).values;
    double previous = (inst.c0.values - target).norm();
    for (int t = 1; t <= 400; ++t) {
      PropagationConfig config;
      config.mu = inst.mu;
      config.tolerance = 0.0;
      config.max_iterations = t;
      const double error =
          (propagate_iterative(inst.op.x, inst.c0, config).credibility.values - target).norm();
      // Below this the ratio measures rounding noise rather than contraction.
      if (previous <= 1e-8 || error <= 1e-8) break;
      if (t >= 2) {
        ++ratios;
        worst_excess = std::max(worst_excess, error / previous - inst.mu);
        if (error / previous > inst.mu + 1e-6) ++violations;
      }
      previous = error;
    }
  }
  report(3, "contraction rate <= mu + 1e-6", violations == 0 && ratios > 0,
         std::to_string(ratios) + " ratios checked, largest ratio - mu = " + fmt(worst_excess));
}

void analytic_fixed_point() {
  const Corpus corpus({testing::make_news("n", Label::real, {{"a", "b"}})});
  const auto graph = build_direct_graph(corpus);
  const auto op = symmetric_normalize(graph.adjacency<double>());
  CredibilityVector<double> c0;
  c0.values = Eigen::Vector2d(1.0, -1.0);
  PropagationConfig iter;
  iter.tolerance = 1e-12;
  const auto it = propagate_iterative(op.x, c0, iter).credibility.values;
  const auto cf = propagate_closed_form(op.x, c0, closed_form(0.4)).values;
  const Eigen::Vector2d expected(3.0 / 7.0, -3.0 / 7.0);
  const double err = std::max((it - expected).cwiseAbs().maxCoeff(),
                              (cf - expected).cwiseAbs().maxCoeff());
  report(4, "two-hashtag fixed point (3/7, -3/7)", err <= 1e-9, "max error " + fmt(err));
}

void minimizer_property() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> delta(-0.1, 0.1);
  int violations = 0;
  const auto instances = propagation_instances(31, 20);
  for (const auto& inst : instances) {
    const auto c = propagate_closed_form(inst.op.x, inst.c0, closed_form(inst.mu)).values;
    const double best = cost_evaluate(inst.w, inst.op.degrees, c, inst.c0.values, inst.mu);
    for (int trial = 0; trial < 1000; ++trial) {
      Vector<double> perturbed = c;
      for (Index k = 0; k < perturbed.size(); ++k) perturbed(k) += delta(rng);
      if (cost_evaluate(inst.w, inst.op.degrees, perturbed, inst.c0.values, inst.mu) < best) {
        ++violations;
      }
    }
  }
  report(5, "propagated vector minimizes the cost", violations == 0,
         "20 instances x 1000 perturbations, " + std::to_string(violations) + " violations");
}

void structural_invariants() {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> size(5, 50);
  std::map<std::string, int> failed;
  double worst_asymmetry = 0.0, worst_antisymmetry = 0.0, worst_radius = 0.0;
  for (int round = 0; round < 30; ++round) {
    const auto rg = testing::random_graph(rng, size(rng), 0.2, 5);
    if (rg.graph.edge_count() == 0) continue;
    const auto n = normalize<double>(rg.graph);

    // Symmetry of every matrix the pipeline produces.
    std::vector<Eigen::MatrixXd> produced = {dense(n.values)};
    Eigen::MatrixXd previous = dense(n.values);
    for (int k = 2; k <= 10; ++k) {
      const Eigen::MatrixXd next = dense(all_relations_truncated(n, {.k1 = k}).matrix.values);
      if (!(next.array() >= previous.array()).all()) ++failed["monotone accumulation"];
      previous = next;
    }
    produced.push_back(previous);
    const auto op = symmetric_normalize(SparseMatrix<double>(previous.sparseView()));
    produced.push_back(dense(op.x));
    for (const auto& m : produced) worst_asymmetry = std::max(worst_asymmetry, testing::max_asymmetry(m));

    // Scale invariance of N.
    for (std::int64_t alpha : {2, 5, 13}) {
      HashtagGraph scaled = rg.graph;
      scaled.upper = scaled.upper * alpha;
      if ((dense(normalize<double>(scaled).values) - dense(n.values)).cwiseAbs().maxCoeff() != 0.0) {
        ++failed["scale invariance"];
      }
    }

    // Spectral radius of X.
    const double radius = testing::dense_radius(dense(op.x));
    worst_radius = std::max(worst_radius, radius);
    if (radius > 1.0 + 1e-10) ++failed["spectral radius of X"];

    // Antisymmetry of propagation.
    CredibilityVector<double> c0, neg;
    c0.values = testing::random_c0(rng, static_cast<int>(rg.graph.size()));
    neg.values = -c0.values;
    for (auto mode : {PropagationMode::iterative, PropagationMode::closed_form}) {
      PropagationConfig config;
      config.mode = mode;
      const auto plus = propagate(op.x, c0, config).values;
      const auto minus = propagate(op.x, neg, config).values;
      worst_antisymmetry = std::max(worst_antisymmetry, (plus + minus).cwiseAbs().maxCoeff());
    }
  }
  if (worst_asymmetry > 1e-12) ++failed["symmetry"];
  if (worst_antisymmetry > 1e-12) ++failed["antisymmetry"];

  // c0 range and prediction invariance on synthetic corpora.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticParams params;
    params.hashtags = 150;
    params.news = 80;
    params.purity = 0.75;
    const auto corpus = generate_synthetic(params, seed).corpus;
    const auto split = split_corpus(corpus, 0.8, seed);
    const auto graph = prepare_graph(corpus, Method::newstag, ClosureOptions{});
    const auto c0 = init_credibility(corpus, split.train, graph.vocab);
    if ((c0.values.array().abs() > 1.0).any()) ++failed["c0 range"];
    auto c = propagate(graph.op.x, c0, PropagationConfig{});
    const auto base = predict(corpus, split.test, graph.vocab, c);
    for (double factor : {1e-6, 0.37, 1.0, 42.0, 1e9}) {
      CredibilityVector<double> scaled = c;
      scaled.values *= factor;
      const auto again = predict(corpus, split.test, graph.vocab, scaled);
      for (std::size_t i = 0; i < base.size(); ++i) {
        if (again[i].label != base[i].label) ++failed["prediction scale invariance"];
      }
    }
  }

  std::string detail = "max asymmetry " + fmt(worst_asymmetry) + ", max antisymmetry error " +
                       fmt(worst_antisymmetry) + ", max radius of X " + fmt(worst_radius);
  for (const auto& [name, count] : failed) detail += "; " + name + " failed " + std::to_string(count) + "x";
  report(6, "structural invariants", failed.empty(), detail);
}

double majority_baseline(const Corpus& corpus, const RepetitionResult& rep,
                         const std::vector<std::string>& train_ids) {
  int real = 0;
  for (const auto& id : train_ids) real += corpus.find(id)->label == Label::real;
  const Label majority = 2 * real >= static_cast<int>(train_ids.size()) ? Label::real : Label::fake;
  int hits = 0, total = 0;
  for (const auto& p : rep.predictions) {
    const auto& label = corpus.find(p.news_id)->label;
    if (!label) continue;
    ++total;
    hits += *label == majority;
  }
  return static_cast<double>(hits) / total;
}

void synthetic_end_to_end() {
  const auto start = Clock::now();
  SyntheticParams params;  // 500 news, 800 hashtags
  params.purity = 1.0;
  ExperimentConfig config;
  config.seed = 2024;
  const auto pure = run_experiment(generate_synthetic(params, 2024).corpus, config);
  const bool perfect = pure.macro_f1.mean == 1.0 && pure.micro_f1.mean == 1.0;

  params.purity = 0.9;
  double micro_sum = 0.0, baseline_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto corpus = generate_synthetic(params, 1000 + seed).corpus;
    ExperimentConfig c;
    c.seed = seed;
    c.repetitions = 1;
    const auto result = run_experiment(corpus, c);
    const auto split = draw_valid_split(corpus, c.train_fraction, c.seed, 0).split;
    micro_sum += result.micro_f1.mean;
    baseline_sum += majority_baseline(corpus, result.repetitions[0], split.train);
  }
  const double lift = (micro_sum - baseline_sum) / 20.0;
  const double elapsed = seconds_since(start);
  report(7, "synthetic end-to-end", perfect && lift >= 0.15 && elapsed < 60.0,
         "purity 1.0 macro " + fmt(pure.macro_f1.mean) + " micro " + fmt(pure.micro_f1.mean) +
             "; purity 0.9 mean micro " + fmt(micro_sum / 20) + " vs majority " +
             fmt(baseline_sum / 20) + " (lift " + fmt(lift) + "); " + fmt(elapsed) + " s");
}

void indirect_benefit() {
  SyntheticParams params;
  params.hashtags = 400;
  params.news = 300;
  params.purity = 1.0;
  params.chain_depth = 2;
  params.chain_groups = 60;
  int wins = 0, nonzero_direct = 0, zero_full = 0;
  std::string accuracies;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto synth = generate_synthetic(params, seed);
    const std::set<std::string> designated(synth.designated.begin(), synth.designated.end());
    ExperimentConfig config;
    config.seed = seed;
    config.repetitions = 1;
    // A single propagation step: direct-only propagation cannot cross the bridge.
    config.propagation.max_iterations = 1;
    config.propagation.tolerance = 0.0;
    double accuracy[2] = {0.0, 0.0};
    const Method methods[2] = {Method::newstag, Method::newstag_no_indirect};
    for (int m = 0; m < 2; ++m) {
      config.method = methods[m];
      const auto result = run_experiment(synth.corpus, config);
      int hits = 0, total = 0;
      for (const auto& p : result.repetitions[0].predictions) {
        if (!designated.count(p.news_id)) continue;
        ++total;
        hits += p.label == synth.corpus.find(p.news_id)->label;
        if (m == 1 && p.score != 0.0) ++nonzero_direct;
        if (m == 0 && p.score == 0.0) ++zero_full;
      }
      accuracy[m] = total > 0 ? static_cast<double>(hits) / total : 0.0;
    }
    wins += accuracy[0] > accuracy[1];
    accuracies += (seed ? " " : "") + fmt(accuracy[0]) + "/" + fmt(accuracy[1]);
  }
  report(8, "indirect relations help chain-linked news", wins == 10 && nonzero_direct == 0,
         std::to_string(wins) + "/10 seeds strictly better, " + std::to_string(nonzero_direct) +
             " nonzero direct-only scores, " + std::to_string(zero_full) +
             " zero full scores; accuracy newstag/direct: " + accuracies);
  note("run with one propagation step; more steps let direct-only propagation reach the chain");
}

void ablation_identity() {
  int mismatches = 0, compared = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SyntheticParams params;
    params.hashtags = 100 + 20 * static_cast<int>(seed);
    params.news = 60 + 5 * static_cast<int>(seed);
    params.purity = 0.6 + 0.02 * static_cast<double>(seed);
    const auto corpus = generate_synthetic(params, 500 + seed).corpus;
    ExperimentConfig config;
    config.seed = seed;
    config.repetitions = 2;
    config.k1 = 1;
    const auto full = run_experiment(corpus, config);
    config.method = Method::newstag_no_indirect;
    config.k1 = 10;
    const auto direct = run_experiment(corpus, config);
    for (std::size_t r = 0; r < full.repetitions.size(); ++r) {
      const auto& a = full.repetitions[r].predictions;
      const auto& b = direct.repetitions[r].predictions;
      if (a.size() != b.size()) {
        ++mismatches;
        continue;
      }
      for (std::size_t i = 0; i < a.size(); ++i) {
        ++compared;
        mismatches += a[i].news_id != b[i].news_id || a[i].label != b[i].label;
      }
    }
  }
  report(9, "k1=1 equals the direct-only ablation", mismatches == 0 && compared > 0,
         std::to_string(compared) + " predictions on 20 corpora, " + std::to_string(mismatches) +
             " mismatches");
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Every regular file under `dir`, keyed by name.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files[entry.path().filename().string()] = slurp(entry.path());
  }
  return files;
}

void cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "newstag-acceptance-cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto p = [&](const std::string& leaf) { return (dir / leaf).string(); };
  const std::string corpus = p("corpus.jsonl");
  const std::vector<std::vector<std::string>> invocations = {
      {"synth", "--hashtags", "200", "--news", "120", "--purity", "0.9", "--seed", "3", "--out", corpus},
      {"validate", "--input", corpus, "--out", p("summary.json")},
      {"build-graph", "--input", corpus, "--out-prefix", p("graph")},
      {"run", "--input", corpus, "--seed", "7", "--repetitions", "3", "--out", p("report.json"),
       "--predictions", p("pred.csv")},
      {"grid-mu", "--input", corpus, "--repetitions", "2", "--out", p("grid.csv")},
      {"sweep-volume", "--input", corpus, "--repetitions", "2", "--out", p("volume.csv")},
      {"sweep-time", "--input", corpus, "--repetitions", "2", "--out", p("time.csv")},
      {"ablate", "--input", corpus, "--repetitions", "2", "--out", p("ablate.csv")},
      {"analyze", "--input", corpus, "--kind", "purity", "--out", p("purity.csv")},
      {"analyze", "--input", corpus, "--kind", "popularity", "--out", p("popularity.csv")},
      {"analyze", "--input", corpus, "--kind", "case-study", "--watchlist", "h1,h2,none", "--out",
       p("case.tsv")},
      {"analyze", "--input", corpus, "--kind", "convergence", "--out", p("convergence.csv")},
      {"export", "--input", corpus, "--out-prefix", p("export"), "--dot"},
  };
  int differing = 0, failed_runs = 0;
  std::string details;
  std::map<std::string, std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    std::string stdout_log;
    for (const auto& args : invocations) {
      std::ostringstream out, err;
      if (cli::run(args, out, err) != 0) {
        ++failed_runs;
        details += " " + args[0] + ": " + err.str();
      }
      stdout_log += out.str();
    }
    auto files = snapshot(dir);
    files["<stdout>"] = stdout_log;
    if (pass == 0) {
      first = std::move(files);
    } else {
      for (const auto& [name, bytes] : files) {
        if (first[name] != bytes) {
          ++differing;
          details += " " + name;
        }
      }
    }
  }
  fs::remove_all(dir);
  report(10, "CLI artifacts are byte-identical across runs",
         differing == 0 && failed_runs == 0 && first.size() > invocations.size(),
         std::to_string(invocations.size()) + " invocations, " + std::to_string(first.size()) +
             " artifacts, " + std::to_string(differing) + " differ, " +
             std::to_string(failed_runs) + " failed runs" + details);
}

void metric_oracle() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> length(1, 40);
  std::uniform_int_distribution<int> mode(0, 5);
  std::uniform_real_distribution<double> bias(0.0, 1.0);
  int mismatches = 0, degenerate = 0;
  for (int round = 0; round < 1000; ++round) {
    const int n = length(rng);
    // Modes 1-4 pin predictions or truths to a single class.
    const int m = mode(rng);
    std::bernoulli_distribution p_pred(m == 1 ? 1.0 : m == 2 ? 0.0 : bias(rng));
    std::bernoulli_distribution p_truth(m == 3 ? 1.0 : m == 4 ? 0.0 : bias(rng));
    std::vector<Label> pred, truth;
    for (int i = 0; i < n; ++i) {
      pred.push_back(p_pred(rng) ? Label::real : Label::fake);
      truth.push_back(p_truth(rng) ? Label::real : Label::fake);
    }
    if (m >= 1 && m <= 4) ++degenerate;
    const auto got = compute_f1(pred, truth);
    const auto want = testing::brute_force_f1(pred, truth);
    mismatches += got.macro != want.macro || got.micro != want.micro;
  }
  report(11, "F1 matches the brute-force oracle", mismatches == 0,
         "1000 label vectors (" + std::to_string(degenerate) + " single-class), " +
             std::to_string(mismatches) + " mismatches");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {
      closure_oracle,        propagation_equivalence, contraction_rate, analytic_fixed_point,
      minimizer_property,    structural_invariants,   synthetic_end_to_end, indirect_benefit,
      ablation_identity,     cli_determinism,         metric_oracle};
  int id = 0;
  for (const auto& criterion : criteria) {
    ++id;
    try {
      criterion();
    } catch (const std::exception& e) {
      report(id, "criterion raised", false, e.what());
    }
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
  return failures;
}
