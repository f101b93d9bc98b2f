#include "newstag/corpus.hpp"
#include "newstag/types.hpp"

#include "json.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_set>

namespace newstag {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Corpus::Corpus(std::vector<NewsItem> news) : news_(std::move(news)) {
  std::unordered_set<std::string> seen_tags;
  for (std::size_t i = 0; i < news_.size(); ++i) {
    const auto& item = news_[i];
    if (item.id.empty()) {
      throw DataError("news id must be nonempty");
    }
    if (!index_by_id_.emplace(item.id, i).second) {
      throw DataError("duplicate news id: " + item.id);
    }
    for (const auto& post : item.posts) {
      std::unordered_set<std::string_view> in_post;
      for (const auto& tag : post.hashtags) {
        if (tag.empty()) {
          throw DataError("empty hashtag in post " + post.id + " of news " + item.id);
        }
        if (!in_post.insert(tag).second) {
          throw DataError("duplicate hashtag '" + tag + "' in post " + post.id);
        }
        if (seen_tags.insert(tag).second) {
          vocabulary_.push_back(tag);
        }
      }
    }
  }
}

std::size_t Corpus::labeled_count() const {
  return static_cast<std::size_t>(
      std::count_if(news_.begin(), news_.end(), [](const NewsItem& n) { return n.label.has_value(); }));
}

std::size_t Corpus::post_count() const {
  std::size_t total = 0;
  for (const auto& n : news_) total += n.posts.size();
  return total;
}

const NewsItem* Corpus::find(std::string_view id) const {
  const auto it = index_by_id_.find(std::string(id));
  return it == index_by_id_.end() ? nullptr : &news_[it->second];
}

std::optional<std::string> normalize_hashtag(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* folding = icu::Normalizer2::getNFKCCasefoldInstance(status);
  if (U_FAILURE(status)) {
    throw Error("ICU NFKC_Casefold normalizer unavailable");
  }
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString folded = folding->normalize(text, status);
  if (U_FAILURE(status)) {
    return std::nullopt;
  }
  while (true) {
    folded.trim();
    if (folded.isEmpty() || folded.charAt(0) != u'#') break;
    int32_t hashes = 0;
    while (hashes < folded.length() && folded.charAt(hashes) == u'#') ++hashes;
    folded.remove(0, hashes);
  }
  if (folded.isEmpty()) {
    return std::nullopt;
  }
  std::string out;
  folded.toUTF8String(out);
  return out;
}

namespace {

std::optional<Timestamp> timestamp_field(const json& record, const char* key) {
  const auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    return std::nullopt;
  }
  if (!it->is_string()) {
    throw DataError(std::string(key) + " must be a string or null");
  }
  auto ts = parse_timestamp(it->get_ref<const std::string&>());
  if (!ts) {
    throw DataError(std::string("invalid ") + key + ": " + it->get<std::string>());
  }
  return ts;
}

// Malformed records are skippable in lenient mode; label errors never are.
struct LabelError : DataError {
  using DataError::DataError;
};

NewsItem parse_record(const json& record, std::size_t& rejected) {
  if (!record.is_object()) {
    throw DataError("record is not an object");
  }
  NewsItem item;
  const auto id = record.find("id");
  if (id == record.end() || !id->is_string()) {
    throw DataError("missing string field 'id'");
  }
  item.id = id->get<std::string>();

  const auto label = record.find("label");
  if (label != record.end() && !label->is_null()) {
    if (!label->is_number_integer() || (label->get<long long>() != 1 && label->get<long long>() != -1)) {
      throw LabelError("label of news " + item.id + " must be -1, 1 or null");
    }
    item.label = label->get<int>() == 1 ? Label::real : Label::fake;
  }
  item.published_at = timestamp_field(record, "published_at");

  const auto posts = record.find("posts");
  if (posts != record.end() && !posts->is_null()) {
    if (!posts->is_array()) {
      throw DataError("'posts' must be an array");
    }
    for (const auto& p : *posts) {
      if (!p.is_object()) {
        throw DataError("post is not an object");
      }
      Post post;
      const auto pid = p.find("post_id");
      if (pid == p.end() || !pid->is_string()) {
        throw DataError("missing string field 'post_id'");
      }
      post.id = pid->get<std::string>();
      post.created_at = timestamp_field(p, "created_at");
      const auto tags = p.find("hashtags");
      if (tags != p.end() && !tags->is_null()) {
        if (!tags->is_array()) {
          throw DataError("'hashtags' must be an array");
        }
        for (const auto& t : *tags) {
          if (!t.is_string()) {
            throw DataError("hashtag is not a string");
          }
          auto normalized = normalize_hashtag(t.get_ref<const std::string&>());
          if (!normalized) {
            ++rejected;
            continue;
          }
          if (std::find(post.hashtags.begin(), post.hashtags.end(), *normalized) == post.hashtags.end()) {
            post.hashtags.push_back(std::move(*normalized));
          }
        }
      }
      item.posts.push_back(std::move(post));
    }
  }
  return item;
}

}  // namespace

ParsedCorpus parse_corpus(std::istream& in, const ParseOptions& options) {
  ParsedCorpus result;
  std::vector<NewsItem> news;
  std::unordered_set<std::string> ids;
  const auto skew = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::duration<double, std::ratio<3600>>(options.clock_skew_hours));

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    const std::string where = "line " + std::to_string(line_number) + ": ";
    NewsItem item;
    std::size_t rejected = 0;
    try {
      item = parse_record(json::parse(line), rejected);
    } catch (const LabelError& e) {
      throw DataError(where + e.what());
    } catch (const std::exception& e) {
      if (!options.lenient) {
        throw DataError(where + e.what());
      }
      result.diagnostics.skipped_lines.emplace_back(line_number, e.what());
      continue;
    }
    if (!ids.insert(item.id).second) {
      throw DataError(where + "duplicate news id: " + item.id);
    }
    result.diagnostics.rejected_hashtags += rejected;
    if (item.published_at) {
      for (const auto& post : item.posts) {
        if (post.created_at && *post.created_at < *item.published_at - skew) {
          result.diagnostics.warnings.push_back(where + "post " + post.id + " of news " + item.id +
                                                " was created before publication");
        }
      }
    }
    news.push_back(std::move(item));
  }
  result.corpus = Corpus(std::move(news));
  return result;
}

ParsedCorpus read_corpus_file(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open corpus file: " + path.string());
  }
  return parse_corpus(in, options);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& item : corpus.news()) {
    ordered_json record;
    record["id"] = item.id;
    record["label"] = item.label ? json(to_int(*item.label)) : json(nullptr);
    record["published_at"] = item.published_at ? json(format_timestamp(*item.published_at)) : json(nullptr);
    ordered_json posts = ordered_json::array();
    for (const auto& post : item.posts) {
      ordered_json p;
      p["post_id"] = post.id;
      p["created_at"] = post.created_at ? json(format_timestamp(*post.created_at)) : json(nullptr);
      p["hashtags"] = post.hashtags;
      posts.push_back(std::move(p));
    }
    record["posts"] = std::move(posts);
    out << record.dump() << '\n';
  }
}

TimeFilterResult filter_by_time(const Corpus& corpus, double horizon_hours) {
  if (!(horizon_hours > 0.0) || !std::isfinite(horizon_hours)) {
    throw ValidationError("time horizon must be a positive number of hours");
  }
  const double horizon_ms = horizon_hours * 3600.0 * 1000.0;
  TimeFilterResult result;
  std::vector<NewsItem> kept;
  kept.reserve(corpus.size());
  for (const auto& item : corpus.news()) {
    NewsItem copy = item;
    if (!item.published_at) {
      ++result.exempt_news;
      kept.push_back(std::move(copy));
      continue;
    }
    copy.posts.clear();
    for (const auto& post : item.posts) {
      if (!post.created_at) {
        ++result.dropped_untimed_posts;
        continue;
      }
      const auto delay = (*post.created_at - *item.published_at).count();
      if (static_cast<double>(delay) <= horizon_ms) {
        copy.posts.push_back(post);
      }
    }
    kept.push_back(std::move(copy));
  }
  result.corpus = Corpus(std::move(kept));
  return result;
}

Split split_ids(std::vector<std::string> ids, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must be in (0,1)");
  }
  const std::size_t n = ids.size();
  if (n < 2) {
    throw ValidationError("a split needs at least 2 labeled news items");
  }
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 1e-9));
  if (n_train == 0 || n_train == n) {
    throw ValidationError("train fraction leaves one side of the split empty");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  Split split;
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? split.train : split.test).push_back(std::move(ids[i]));
  }
  return split;
}

Split split_corpus(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
  std::vector<std::string> labeled;
  for (const auto& item : corpus.news()) {
    if (item.label) labeled.push_back(item.id);
  }
  Split labeled_split = split_ids(std::move(labeled), train_fraction, seed);

  // Rebuild the test side in corpus order, unlabeled news included.
  std::unordered_set<std::string> train(labeled_split.train.begin(), labeled_split.train.end());
  Split split;
  split.train = std::move(labeled_split.train);
  for (const auto& item : corpus.news()) {
    if (!train.count(item.id)) split.test.push_back(item.id);
  }
  return split;
}

}  // namespace newstag
