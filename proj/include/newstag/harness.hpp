#ifndef NEWSTAG_HARNESS_HPP
#define NEWSTAG_HARNESS_HPP

#include "newstag/corpus.hpp"
#include "newstag/credibility.hpp"
#include "newstag/hashtag_graph.hpp"
#include "newstag/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace newstag {

/// newstag: weighted graph with the truncated closure; per-post initialization and prediction.
/// newstag_no_indirect: normalized direct matrix in place of the closure.
/// newstag_unweighted: unweighted graph, per-news initialization and prediction.
enum class Method { newstag, newstag_no_indirect, newstag_unweighted };

const char* to_string(Method method);
/// Accepts the names printed by to_string; throws ValidationError otherwise.
Method parse_method(std::string_view name);

bool uses_per_post(Method method);

struct ExperimentConfig {
  Method method = Method::newstag;
  double mu = 0.4;
  /// When nonempty, mu is chosen per repetition on an inner validation split.
  std::vector<double> mu_grid;
  int k1 = 10;
  double drop_tolerance = 0.0;
  double closure_tolerance = 0.0;
  /// mu inside is ignored; ExperimentConfig::mu (or the grid choice) is used.
  PropagationConfig propagation;
  double train_fraction = 0.8;
  std::optional<double> time_horizon_hours;
  std::uint64_t seed = 0;
  int repetitions = 10;
  /// Repetitions evaluated concurrently; results do not depend on it.
  int threads = 1;

  void validate() const;
  ClosureOptions closure_options() const;
};

/// Default mu grid 0.1, 0.2, ..., 0.9.
std::vector<double> default_mu_grid();

/// Seed of split attempt `attempt` for repetition `repetition`.
std::uint64_t split_seed(std::uint64_t seed, int repetition, int attempt);

/// Relation matrix and propagation operator of one method over one corpus.
/// The graph is transductive: built from every news item, labeled or not.
struct PreparedGraph {
  Method method = Method::newstag;
  Vocabulary vocab;
  Index direct_edges = 0;
  RelationMatrix<double> relation;
  NormalizedOperator<double> op;
  /// Relative Frobenius change per accumulated closure term.
  std::vector<double> closure_trace;
};

PreparedGraph prepare_graph(const Corpus& corpus, Method method, const ClosureOptions& closure);

/// First valid split of a repetition (resampled until the test side holds
/// both classes); throws DataError after 100 attempts.
struct ValidSplit {
  Split split;
  std::uint64_t seed = 0;
  int attempts = 0;
};

ValidSplit draw_valid_split(const Corpus& corpus, double train_fraction, std::uint64_t seed,
                            int repetition);

struct RepetitionResult {
  int repetition = 0;
  std::uint64_t split_seed = 0;
  int attempts = 1;
  double mu = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  /// Labeled test news with no hashtags at all (scored 0, predicted -1).
  std::size_t hashtag_free_test_news = 0;
  F1Scores scores;
  std::vector<Prediction> predictions;
};

struct MetricsReport {
  ExperimentConfig config;
  std::vector<RepetitionResult> repetitions;
  MeanStd macro_f1;
  MeanStd micro_f1;
  ConfusionCounts confusion;
  std::size_t vocabulary_size = 0;
  Index direct_edges = 0;
  int closure_terms = 0;
  /// Time-filter bookkeeping (zero without a horizon).
  std::size_t exempt_news = 0;
  std::size_t dropped_untimed_posts = 0;
};

/// Runs every repetition on an already prepared graph.
MetricsReport evaluate(const PreparedGraph& graph, const Corpus& corpus,
                       const ExperimentConfig& config);

/// Applies the time filter if set, builds the transductive graph and evaluates.
MetricsReport run_experiment(const Corpus& corpus, const ExperimentConfig& config);

struct GridRow {
  double mu = 0.0;
  MeanStd macro_f1;
  MeanStd micro_f1;
};

struct GridReport {
  double best_mu = 0.0;
  std::vector<GridRow> rows;
};

/// Scores each grid value by micro F1 on a 10% validation slice of every
/// repetition's training split; ties go to the smaller mu.
GridReport grid_search_mu(const Corpus& corpus, const ExperimentConfig& config,
                          const std::vector<double>& grid);

struct SweepRow {
  std::string x;
  MeanStd macro_f1;
  MeanStd micro_f1;
};

std::vector<SweepRow> sweep_training_fraction(const Corpus& corpus, const ExperimentConfig& config,
                                              const std::vector<double>& fractions);

/// One row per horizon plus a final "all" row without filtering.
std::vector<SweepRow> sweep_detection_time(const Corpus& corpus, const ExperimentConfig& config,
                                           const std::vector<double>& horizons);

/// The same configuration under all three methods, in enum order.
std::vector<SweepRow> ablate(const Corpus& corpus, const ExperimentConfig& config);

}  // namespace newstag

#endif  // NEWSTAG_HARNESS_HPP
