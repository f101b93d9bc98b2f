#include "newstag/harness.hpp"
#include "newstag/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>
#include <unordered_set>

namespace newstag {

const char* to_string(Method method) {
  switch (method) {
    case Method::newstag:
      return "newstag";
    case Method::newstag_no_indirect:
      return "newstag_no_indirect";
    case Method::newstag_unweighted:
      return "newstag_unweighted";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::newstag, Method::newstag_no_indirect, Method::newstag_unweighted}) {
    if (name == to_string(m)) return m;
  }
  throw ValidationError("unknown method: " + std::string(name));
}

bool uses_per_post(Method method) { return method != Method::newstag_unweighted; }

namespace {

void validate_grid(const std::vector<double>& grid) {
  for (double mu : grid) {
    if (!(mu > 0.0 && mu < 1.0)) throw ValidationError("mu grid values must be in (0,1)");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(mu > 0.0 && mu < 1.0)) throw ValidationError("mu must be in (0,1)");
  validate_grid(mu_grid);
  closure_options().validate();
  PropagationConfig p = propagation;
  p.mu = mu;
  p.validate();
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must be in (0,1)");
  }
  if (time_horizon_hours && !(*time_horizon_hours > 0.0)) {
    throw ValidationError("time horizon must be a positive number of hours");
  }
  if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
  if (threads < 1) throw ValidationError("threads must be >= 1");
}

ClosureOptions ExperimentConfig::closure_options() const {
  ClosureOptions options;
  options.k1 = k1;
  options.drop_tolerance = drop_tolerance;
  options.convergence_tolerance = closure_tolerance;
  return options;
}

std::vector<double> default_mu_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::uint64_t split_seed(std::uint64_t seed, int repetition, int attempt) {
  return (seed ^ static_cast<std::uint64_t>(repetition)) +
         static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ull;
}

PreparedGraph prepare_graph(const Corpus& corpus, Method method, const ClosureOptions& closure) {
  closure.validate();
  PreparedGraph prepared;
  prepared.method = method;
  const HashtagGraph graph = build_direct_graph(corpus, method != Method::newstag_unweighted);
  prepared.vocab = graph.vocab;
  prepared.direct_edges = graph.edge_count();

  if (graph.edge_count() == 0) {
    prepared.relation.kind = method == Method::newstag_no_indirect
                                 ? RelationKind::normalized_direct
                                 : RelationKind::all_relations_truncated;
    prepared.relation.terms = 0;
    prepared.relation.values.resize(graph.size(), graph.size());
  } else if (method == Method::newstag_no_indirect) {
    prepared.relation = normalize<double>(graph);
    prepared.closure_trace = {1.0};
  } else {
    auto result = all_relations_truncated(normalize<double>(graph), closure);
    prepared.relation = std::move(result.matrix);
    prepared.closure_trace = std::move(result.relative_changes);
  }
  prepared.op = symmetric_normalize(prepared.relation.values);
  return prepared;
}

ValidSplit draw_valid_split(const Corpus& corpus, double train_fraction, std::uint64_t seed,
                            int repetition) {
  constexpr int max_attempts = 100;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t s = split_seed(seed, repetition, attempt);
    Split split = split_corpus(corpus, train_fraction, s);
    bool real = false, fake = false;
    for (const auto& id : split.test) {
      const auto& label = corpus.find(id)->label;
      if (label) (*label == Label::real ? real : fake) = true;
    }
    if (real && fake && !split.train.empty()) {
      return {std::move(split), s, attempt + 1};
    }
  }
  throw DataError("no split with both classes on the test side after 100 attempts");
}

namespace {

struct Scored {
  F1Scores scores;
  std::vector<Prediction> predictions;
  std::size_t hashtag_free = 0;
};

CredibilityVector<double> train_and_propagate(const PreparedGraph& graph, const Corpus& corpus,
                                              const std::vector<std::string>& train,
                                              const ExperimentConfig& config, double mu) {
  const auto c0 = init_credibility(corpus, train, graph.vocab, uses_per_post(graph.method));
  PropagationConfig propagation = config.propagation;
  propagation.mu = mu;
  return propagate(graph.op.x, c0, propagation);
}

// Predicts every target; scores only the labeled ones.
Scored score(const PreparedGraph& graph, const Corpus& corpus, const std::vector<std::string>& targets,
             const CredibilityVector<double>& c) {
  Scored out;
  out.predictions = predict(corpus, targets, graph.vocab, c, uses_per_post(graph.method));
  std::vector<Label> predicted, truth;
  for (const auto& p : out.predictions) {
    const NewsItem* news = corpus.find(p.news_id);
    if (!news->label) continue;
    predicted.push_back(p.label);
    truth.push_back(*news->label);
    const bool empty = std::all_of(news->posts.begin(), news->posts.end(),
                                   [](const Post& post) { return post.hashtags.empty(); });
    out.hashtag_free += empty;
  }
  out.scores = compute_f1(predicted, truth);
  return out;
}

// Inner split of a training set into fitting and validation parts.
Split validation_split(const std::vector<std::string>& train, std::uint64_t seed) {
  return split_ids(train, 0.9, seed ^ 0xA5A5A5A5A5A5A5A5ull);
}

// Validation scores of one mu on one repetition.
F1Scores validation_scores(const PreparedGraph& graph, const Corpus& corpus, const Split& inner,
                           const ExperimentConfig& config, double mu) {
  const auto c = train_and_propagate(graph, corpus, inner.train, config, mu);
  return score(graph, corpus, inner.test, c).scores;
}

double choose_mu(const PreparedGraph& graph, const Corpus& corpus, const ValidSplit& valid,
                 const ExperimentConfig& config) {
  if (config.mu_grid.empty()) return config.mu;
  const Split inner = validation_split(valid.split.train, valid.seed);
  std::vector<double> grid = config.mu_grid;
  std::sort(grid.begin(), grid.end());
  double best_mu = grid.front();
  double best = -1.0;
  for (double mu : grid) {
    const double micro = validation_scores(graph, corpus, inner, config, mu).micro;
    if (micro > best) {
      best = micro;
      best_mu = mu;
    }
  }
  return best_mu;
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <typename Body>
void parallel_for(int n, int threads, Body body) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct FilteredCorpus {
  Corpus corpus;
  std::size_t exempt_news = 0;
  std::size_t dropped_untimed_posts = 0;
};

FilteredCorpus apply_horizon(const Corpus& corpus, const std::optional<double>& horizon) {
  if (!horizon) return {corpus, 0, 0};
  auto filtered = filter_by_time(corpus, *horizon);
  return {std::move(filtered.corpus), filtered.exempt_news, filtered.dropped_untimed_posts};
}

}  // namespace

MetricsReport evaluate(const PreparedGraph& graph, const Corpus& corpus,
                       const ExperimentConfig& config) {
  config.validate();
  MetricsReport report;
  report.config = config;
  report.vocabulary_size = static_cast<std::size_t>(graph.vocab.size());
  report.direct_edges = graph.direct_edges;
  report.closure_terms = graph.relation.terms;
  report.repetitions.resize(static_cast<std::size_t>(config.repetitions));

  parallel_for(config.repetitions, config.threads, [&](int r) {
    const ValidSplit valid = draw_valid_split(corpus, config.train_fraction, config.seed, r);
    const double mu = choose_mu(graph, corpus, valid, config);
    const auto c = train_and_propagate(graph, corpus, valid.split.train, config, mu);
    Scored scored = score(graph, corpus, valid.split.test, c);

    RepetitionResult& rep = report.repetitions[static_cast<std::size_t>(r)];
    rep.repetition = r;
    rep.split_seed = valid.seed;
    rep.attempts = valid.attempts;
    rep.mu = mu;
    rep.train_size = valid.split.train.size();
    rep.test_size = valid.split.test.size();
    rep.hashtag_free_test_news = scored.hashtag_free;
    rep.scores = scored.scores;
    rep.predictions = std::move(scored.predictions);
  });

  std::vector<double> macro, micro;
  for (const auto& rep : report.repetitions) {
    macro.push_back(rep.scores.macro);
    micro.push_back(rep.scores.micro);
    report.confusion += rep.scores.confusion;
  }
  report.macro_f1 = mean_std(macro);
  report.micro_f1 = mean_std(micro);
  return report;
}

MetricsReport run_experiment(const Corpus& corpus, const ExperimentConfig& config) {
  config.validate();
  const FilteredCorpus filtered = apply_horizon(corpus, config.time_horizon_hours);
  const PreparedGraph graph = prepare_graph(filtered.corpus, config.method, config.closure_options());
  MetricsReport report = evaluate(graph, filtered.corpus, config);
  report.exempt_news = filtered.exempt_news;
  report.dropped_untimed_posts = filtered.dropped_untimed_posts;
  return report;
}

GridReport grid_search_mu(const Corpus& corpus, const ExperimentConfig& config,
                          const std::vector<double>& grid) {
  config.validate();
  if (grid.empty()) throw ValidationError("mu grid is empty");
  validate_grid(grid);
  const FilteredCorpus filtered = apply_horizon(corpus, config.time_horizon_hours);
  const PreparedGraph graph = prepare_graph(filtered.corpus, config.method, config.closure_options());

  const std::size_t reps = static_cast<std::size_t>(config.repetitions);
  std::vector<std::vector<F1Scores>> scores(grid.size(), std::vector<F1Scores>(reps));
  parallel_for(config.repetitions, config.threads, [&](int r) {
    const ValidSplit valid = draw_valid_split(filtered.corpus, config.train_fraction, config.seed, r);
    const Split inner = validation_split(valid.split.train, valid.seed);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      scores[g][static_cast<std::size_t>(r)] = validation_scores(graph, filtered.corpus, inner, config, grid[g]);
    }
  });

  GridReport report;
  double best = -1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> macro, micro;
    for (const auto& s : scores[g]) {
      macro.push_back(s.macro);
      micro.push_back(s.micro);
    }
    GridRow row{grid[g], mean_std(macro), mean_std(micro)};
    const double m = row.micro_f1.mean;
    if (m > best || (m == best && grid[g] < report.best_mu)) {
      best = m;
      report.best_mu = grid[g];
    }
    report.rows.push_back(row);
  }
  return report;
}

namespace {

SweepRow sweep_row(std::string x, const MetricsReport& report) {
  return {std::move(x), report.macro_f1, report.micro_f1};
}

}  // namespace

std::vector<SweepRow> sweep_training_fraction(const Corpus& corpus, const ExperimentConfig& config,
                                              const std::vector<double>& fractions) {
  config.validate();
  if (fractions.empty()) throw ValidationError("training fraction list is empty");
  const FilteredCorpus filtered = apply_horizon(corpus, config.time_horizon_hours);
  const PreparedGraph graph = prepare_graph(filtered.corpus, config.method, config.closure_options());
  std::vector<SweepRow> rows;
  for (double f : fractions) {
    ExperimentConfig c = config;
    c.train_fraction = f;
    rows.push_back(sweep_row(format_double(f), evaluate(graph, filtered.corpus, c)));
  }
  return rows;
}

std::vector<SweepRow> sweep_detection_time(const Corpus& corpus, const ExperimentConfig& config,
                                           const std::vector<double>& horizons) {
  config.validate();
  if (horizons.empty()) throw ValidationError("horizon list is empty");
  std::vector<SweepRow> rows;
  ExperimentConfig c = config;
  for (double h : horizons) {
    c.time_horizon_hours = h;
    rows.push_back(sweep_row(format_double(h), run_experiment(corpus, c)));
  }
  c.time_horizon_hours.reset();
  rows.push_back(sweep_row("all", run_experiment(corpus, c)));
  return rows;
}

std::vector<SweepRow> ablate(const Corpus& corpus, const ExperimentConfig& config) {
  std::vector<SweepRow> rows;
  for (Method m : {Method::newstag, Method::newstag_no_indirect, Method::newstag_unweighted}) {
    ExperimentConfig c = config;
    c.method = m;
    rows.push_back(sweep_row(to_string(m), run_experiment(corpus, c)));
  }
  return rows;
}

}  // namespace newstag
