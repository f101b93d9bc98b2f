#ifndef NEWSTAG_METRICS_HPP
#define NEWSTAG_METRICS_HPP

#include "newstag/corpus.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace newstag {

/// Binary confusion counts with "real" (+1) as the positive class.
struct ConfusionCounts {
  std::int64_t true_real = 0;   // predicted +1, truth +1
  std::int64_t false_real = 0;  // predicted +1, truth -1
  std::int64_t false_fake = 0;  // predicted -1, truth +1
  std::int64_t true_fake = 0;   // predicted -1, truth -1

  std::int64_t total() const { return true_real + false_real + false_fake + true_fake; }
  ConfusionCounts& operator+=(const ConfusionCounts& other);
};

struct F1Scores {
  double macro = 0.0;
  double micro = 0.0;
  double f1_real = 0.0;
  double f1_fake = 0.0;
  ConfusionCounts confusion;
};

/// F1 of one class from its counts: 2 tp / (2 tp + fp + fn), 0 when undefined.
double class_f1(std::int64_t tp, std::int64_t fp, std::int64_t fn);

/// Macro F1 averages the two class F1 scores (an absent class scores 0);
/// micro F1 pools the counts and equals accuracy. Throws ValidationError on
/// empty or mismatched input.
F1Scores compute_f1(std::span<const Label> predictions, std::span<const Label> truths);

struct MeanStd {
  double mean = 0.0;
  /// Sample standard deviation; 0 for fewer than two values.
  double std = 0.0;
};

MeanStd mean_std(std::span<const double> values);

}  // namespace newstag

#endif  // NEWSTAG_METRICS_HPP
