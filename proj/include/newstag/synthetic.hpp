#ifndef NEWSTAG_SYNTHETIC_HPP
#define NEWSTAG_SYNTHETIC_HPP

#include "newstag/corpus.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace newstag {

/// Knobs of the planted-purity corpus generator.
///
/// Hashtags are split into a true pool and a fake pool. Every post of a news
/// item draws each of its hashtags from the pool of the item's class with
/// probability `purity`, otherwise from the other pool.
///
/// With chain_depth >= 1 the generator also adds `chain_groups` designated
/// news items. Each one uses private hashtags only, and an extra unlabeled
/// bridge news item links one of those private hashtags to a pool hashtag of
/// the same class through a path of exactly chain_depth co-occurrence edges
/// (chain_depth - 1 bridge hashtags in between).
struct SyntheticParams {
  int hashtags = 800;
  int news = 500;
  double fake_ratio = 0.5;
  double fake_pool_fraction = 0.5;
  int posts_min = 3;
  int posts_max = 12;
  int tags_min = 1;
  int tags_max = 4;
  double purity = 0.9;
  int chain_depth = 0;
  int chain_groups = 0;
  /// Posts appear uniformly within [delay_min_hours, delay_max_hours] after publication.
  double delay_min_hours = 1.0;
  double delay_max_hours = 72.0;
  /// Publication times are spread uniformly over this many days.
  double publish_span_days = 30.0;
  /// Seconds since the Unix epoch of the earliest publication time.
  std::int64_t epoch_seconds = 1583020800;  // 2020-03-01T00:00:00Z

  void validate() const;
};

struct SyntheticCorpus {
  Corpus corpus;
  /// Ids of the chain-linked designated news items (empty without chains).
  std::vector<std::string> designated;
  /// Ids of the unlabeled bridge news items.
  std::vector<std::string> bridges;
};

SyntheticCorpus generate_synthetic(const SyntheticParams& params,
                                   std::uint64_t seed);

/// Reads a flat `key = value` file ('#' starts a comment). Unknown keys
/// and unparsable values raise ValidationError.
SyntheticParams parse_synthetic_params(std::istream& in,
                                       SyntheticParams base = {});

}  // namespace newstag

#endif  // NEWSTAG_SYNTHETIC_HPP
