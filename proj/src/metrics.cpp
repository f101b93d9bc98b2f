#include "newstag/metrics.hpp"
#include "newstag/types.hpp"

#include <cmath>

namespace newstag {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  true_real += other.true_real;
  false_real += other.false_real;
  false_fake += other.false_fake;
  true_fake += other.true_fake;
  return *this;
}

double class_f1(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  const std::int64_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(denom);
}

F1Scores compute_f1(std::span<const Label> predictions, std::span<const Label> truths) {
  if (predictions.empty()) throw ValidationError("compute_f1: empty input");
  if (predictions.size() != truths.size()) throw ValidationError("compute_f1: length mismatch");
  F1Scores s;
  auto& c = s.confusion;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred_real = predictions[i] == Label::real;
    const bool truth_real = truths[i] == Label::real;
    if (pred_real) (truth_real ? c.true_real : c.false_real)++;
    else (truth_real ? c.false_fake : c.true_fake)++;
  }
  s.f1_real = class_f1(c.true_real, c.false_real, c.false_fake);
  s.f1_fake = class_f1(c.true_fake, c.false_fake, c.false_real);
  s.macro = (s.f1_real + s.f1_fake) / 2.0;
  s.micro = static_cast<double>(c.true_real + c.true_fake) / static_cast<double>(c.total());
  return s;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd r;
  if (values.empty()) return r;
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return r;
}

}  // namespace newstag
