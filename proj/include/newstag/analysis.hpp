#ifndef NEWSTAG_ANALYSIS_HPP
#define NEWSTAG_ANALYSIS_HPP

#include "newstag/corpus.hpp"
#include "newstag/harness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace newstag {

// Hashtag purity per labeled news item.

struct PurityRow {
  std::string news_id;
  Label label = Label::fake;
  std::size_t distinct_hashtags = 0;
  double fake_only = 0.0;
  double real_only = 0.0;
  double mixed = 0.0;
};

struct PurityReport {
  std::vector<PurityRow> rows;
  /// Labeled news without any hashtag; their proportions are undefined.
  std::size_t excluded_hashtag_free = 0;
  std::size_t fake_only_hashtags = 0;
  std::size_t real_only_hashtags = 0;
  std::size_t mixed_hashtags = 0;
};

PurityReport purity_analysis(const Corpus& corpus);

// Cumulative post counts after publication.

struct PopularitySeries {
  std::string news_id;
  Label label = Label::fake;
  std::vector<std::size_t> counts;  // one per checkpoint
};

struct BoxStats {
  std::size_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Linear-interpolation quantiles (the usual "type 7" definition).
BoxStats box_stats(std::vector<double> values);

struct PopularityStatsRow {
  double checkpoint_hours = 0.0;
  Label label = Label::fake;
  BoxStats stats;
};

struct PopularityReport {
  std::vector<double> checkpoints;
  std::vector<PopularitySeries> series;
  std::vector<PopularityStatsRow> stats;
  /// Labeled news lacking published_at.
  std::size_t excluded_untimed = 0;
  std::size_t excluded_unlabeled = 0;
};

PopularityReport popularity_analysis(const Corpus& corpus, const std::vector<double>& checkpoints);

// Watchlist credibility (all-data c* against the trained, rescaled c-hat).

struct CaseStudyRow {
  std::string hashtag;
  bool present = false;
  double c_star = 0.0;
  double c0 = 0.0;
  double c_hat = 0.0;
  double c_hat_rescaled = 0.0;
};

struct CaseStudyReport {
  std::vector<CaseStudyRow> rows;
  double mu = 0.0;
  std::optional<std::string> warning;
};

CaseStudyReport case_study(const Corpus& corpus, const ExperimentConfig& config,
                           const std::vector<std::string>& watchlist);

// Residual traces of both loops.

struct ConvergenceTrace {
  std::vector<double> closure;      // relative Frobenius change per k1 term
  std::vector<double> propagation;  // max-norm change per k2 iteration
};

/// Uses the first repetition's split for c0.
ConvergenceTrace convergence_trace(const Corpus& corpus, const ExperimentConfig& config);

}  // namespace newstag

#endif  // NEWSTAG_ANALYSIS_HPP
