#include "newstag/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace newstag {

PurityReport purity_analysis(const Corpus& corpus) {
  // Bit 1: used by fake news, bit 2: used by real news.
  std::unordered_map<std::string, int> usage;
  for (const auto& news : corpus.news()) {
    if (!news.label) continue;
    const int bit = *news.label == Label::fake ? 1 : 2;
    for (const auto& post : news.posts)
      for (const auto& tag : post.hashtags) usage[tag] |= bit;
  }
  PurityReport report;
  for (const auto& tag : corpus.vocabulary()) {
    const auto it = usage.find(tag);
    if (it == usage.end()) continue;
    if (it->second == 1) ++report.fake_only_hashtags;
    else if (it->second == 2) ++report.real_only_hashtags;
    else ++report.mixed_hashtags;
  }
  for (const auto& news : corpus.news()) {
    if (!news.label) continue;
    std::unordered_set<std::string> distinct;
    for (const auto& post : news.posts) distinct.insert(post.hashtags.begin(), post.hashtags.end());
    if (distinct.empty()) {
      ++report.excluded_hashtag_free;
      continue;
    }
    std::size_t fake = 0, real = 0, mixed = 0;
    for (const auto& tag : distinct) {
      const int u = usage[tag];
      if (u == 1) ++fake;
      else if (u == 2) ++real;
      else ++mixed;
    }
    const double n = static_cast<double>(distinct.size());
    PurityRow row;
    row.news_id = news.id;
    row.label = *news.label;
    row.distinct_hashtags = distinct.size();
    row.fake_only = static_cast<double>(fake) / n;
    row.real_only = static_cast<double>(real) / n;
    row.mixed = static_cast<double>(mixed) / n;
    report.rows.push_back(row);
  }
  return report;
}

BoxStats box_stats(std::vector<double> values) {
  BoxStats s;
  s.n = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  s.min = values.front();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = values.back();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  return s;
}

PopularityReport popularity_analysis(const Corpus& corpus, const std::vector<double>& checkpoints) {
  PopularityReport report;
  report.checkpoints = checkpoints;
  for (const auto& news : corpus.news()) {
    if (!news.label) {
      ++report.excluded_unlabeled;
      continue;
    }
    if (!news.published_at) {
      ++report.excluded_untimed;
      continue;
    }
    PopularitySeries series{news.id, *news.label, {}};
    for (double hours : checkpoints) {
      const double limit_ms = hours * 3600.0 * 1000.0;
      std::size_t count = 0;
      for (const auto& post : news.posts) {
        if (post.created_at &&
            static_cast<double>((*post.created_at - *news.published_at).count()) <= limit_ms) {
          ++count;
        }
      }
      series.counts.push_back(count);
    }
    report.series.push_back(std::move(series));
  }
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    for (Label label : {Label::fake, Label::real}) {
      std::vector<double> values;
      for (const auto& s : report.series) {
        if (s.label == label) values.push_back(static_cast<double>(s.counts[c]));
      }
      report.stats.push_back({checkpoints[c], label, box_stats(std::move(values))});
    }
  }
  return report;
}

CaseStudyReport case_study(const Corpus& input, const ExperimentConfig& config,
                           const std::vector<std::string>& watchlist) {
  config.validate();
  const Corpus corpus =
      config.time_horizon_hours ? filter_by_time(input, *config.time_horizon_hours).corpus : input;
  const PreparedGraph graph = prepare_graph(corpus, config.method, config.closure_options());
  const bool per_post = uses_per_post(config.method);

  std::vector<std::string> labeled;
  for (const auto& news : corpus.news()) {
    if (news.label) labeled.push_back(news.id);
  }
  auto c_star = init_credibility(corpus, labeled, graph.vocab, per_post);
  c_star.provenance = Provenance::all_data_c_star;

  const ValidSplit valid = draw_valid_split(corpus, config.train_fraction, config.seed, 0);
  const auto c0 = init_credibility(corpus, valid.split.train, graph.vocab, per_post);
  double mu = config.mu;
  if (!config.mu_grid.empty()) {
    ExperimentConfig single = config;
    single.repetitions = 1;
    mu = evaluate(graph, corpus, single).repetitions[0].mu;
  }
  PropagationConfig propagation = config.propagation;
  propagation.mu = mu;
  const auto c_hat = propagate(graph.op.x, c0, propagation);
  const auto rescaled = rescale_credibility(c_hat);

  CaseStudyReport report;
  report.mu = mu;
  report.warning = rescaled.warning;
  for (const auto& raw : watchlist) {
    CaseStudyRow row;
    const auto normalized = normalize_hashtag(raw);
    row.hashtag = normalized.value_or(raw);
    const auto k = normalized ? graph.vocab.find(*normalized) : std::nullopt;
    if (k) {
      row.present = true;
      row.c_star = c_star.values(*k);
      row.c0 = c0.values(*k);
      row.c_hat = c_hat.values(*k);
      row.c_hat_rescaled = rescaled.credibility.values(*k);
    }
    report.rows.push_back(row);
  }
  return report;
}

ConvergenceTrace convergence_trace(const Corpus& input, const ExperimentConfig& config) {
  config.validate();
  const Corpus corpus =
      config.time_horizon_hours ? filter_by_time(input, *config.time_horizon_hours).corpus : input;
  const PreparedGraph graph = prepare_graph(corpus, config.method, config.closure_options());
  const ValidSplit valid = draw_valid_split(corpus, config.train_fraction, config.seed, 0);
  const auto c0 = init_credibility(corpus, valid.split.train, graph.vocab, uses_per_post(config.method));
  PropagationConfig propagation = config.propagation;
  propagation.mu = config.mu;
  ConvergenceTrace trace;
  trace.closure = graph.closure_trace;
  trace.propagation = propagate_iterative(graph.op.x, c0, propagation).residuals;
  return trace;
}

}  // namespace newstag
