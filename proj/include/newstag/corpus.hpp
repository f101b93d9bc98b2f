#ifndef NEWSTAG_CORPUS_HPP
#define NEWSTAG_CORPUS_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace newstag {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Ground-truth credibility of a news item.
enum class Label : int { fake = -1, real = 1 };

inline int to_int(Label label) { return static_cast<int>(label); }

/// One social-media post spreading a news item.
struct Post {
  std::string id;
  std::optional<Timestamp> created_at;
  /// Normalized and duplicate-free, in first-appearance order.
  std::vector<std::string> hashtags;
};

/// One news article or statement together with the posts that spread it.
struct NewsItem {
  std::string id;
  std::optional<Label> label;
  std::optional<Timestamp> published_at;
  std::vector<Post> posts;
};

/// An immutable, validated collection of news items.
///
/// Construction enforces unique nonempty ids and duplicate-free nonempty
/// hashtags per post, and computes the vocabulary as the exact union of all
/// post hashtag sets in first-appearance order.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<NewsItem> news);

  const std::vector<NewsItem>& news() const { return news_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  std::size_t size() const { return news_.size(); }
  bool empty() const { return news_.empty(); }
  std::size_t labeled_count() const;
  std::size_t post_count() const;

  /// Returns nullptr when no news item has this id.
  const NewsItem* find(std::string_view id) const;

 private:
  std::vector<NewsItem> news_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::size_t> index_by_id_;
};

/// Strips leading '#' and surrounding whitespace, applies NFKC case folding.
/// Returns std::nullopt when nothing is left.
std::optional<std::string> normalize_hashtag(std::string_view raw);

std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

struct ParseOptions {
  /// Skip malformed lines instead of failing on the first one.
  bool lenient = false;
  /// Posts created earlier than published_at minus this allowance are warned about.
  double clock_skew_hours = 0.0;
};

struct ParseDiagnostics {
  std::vector<std::string> warnings;
  /// (1-based line number, reason) for lines skipped in lenient mode.
  std::vector<std::pair<std::size_t, std::string>> skipped_lines;
  std::size_t rejected_hashtags = 0;
};

struct ParsedCorpus {
  Corpus corpus;
  ParseDiagnostics diagnostics;
};

/// Reads the JSONL corpus format, one news record per line.
/// Throws DataError on malformed records (unless lenient), duplicate ids and
/// out-of-range labels.
ParsedCorpus parse_corpus(std::istream& in, const ParseOptions& options = {});
ParsedCorpus read_corpus_file(const std::filesystem::path& path,
                              const ParseOptions& options = {});

/// Writes the corpus in the same JSONL format parse_corpus reads.
void write_corpus(std::ostream& out, const Corpus& corpus);

struct TimeFilterResult {
  Corpus corpus;
  /// News kept whole because they lack published_at.
  std::size_t exempt_news = 0;
  /// Posts dropped because they lack created_at.
  std::size_t dropped_untimed_posts = 0;
};

/// Keeps, per news item, the posts created no later than horizon_hours after
/// publication (closed interval).
TimeFilterResult filter_by_time(const Corpus& corpus, double horizon_hours);

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

/// Seeded uniform partition of the labeled news: floor(f * n) ids go to
/// train, the rest and all unlabeled news go to test.
Split split_corpus(const Corpus& corpus, double train_fraction,
                   std::uint64_t seed);

/// Same partition rule applied to an explicit id list.
Split split_ids(std::vector<std::string> ids, double train_fraction,
                std::uint64_t seed);

}  // namespace newstag

#endif  // NEWSTAG_CORPUS_HPP
