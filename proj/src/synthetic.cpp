#include "newstag/synthetic.hpp"
#include "newstag/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <random>
#include <set>

namespace newstag {

namespace {

int pool_size(const SyntheticParams& p) {
  return static_cast<int>(std::lround(p.hashtags * p.fake_pool_fraction));
}

}  // namespace

void SyntheticParams::validate() const {
  if (hashtags < 2) throw ValidationError("hashtags must be >= 2");
  if (news < 1) throw ValidationError("news must be >= 1");
  if (!(fake_ratio >= 0.0 && fake_ratio <= 1.0)) throw ValidationError("fake_ratio must be in [0,1]");
  const int fake_pool = pool_size(*this);
  if (!(fake_pool_fraction > 0.0 && fake_pool_fraction < 1.0) || fake_pool < 1 || fake_pool >= hashtags) {
    throw ValidationError("fake_pool_fraction leaves a hashtag pool empty");
  }
  if (posts_min < 0 || posts_max < posts_min) throw ValidationError("need 0 <= posts_min <= posts_max");
  if (tags_min < 1 || tags_max < tags_min) throw ValidationError("need 1 <= tags_min <= tags_max");
  if (!(purity > 0.5 && purity <= 1.0)) throw ValidationError("purity must be in (0.5,1]");
  if (chain_depth < 0) throw ValidationError("chain_depth must be >= 0");
  if (chain_groups < 0) throw ValidationError("chain_groups must be >= 0");
  if (!(delay_min_hours >= 0.0 && delay_max_hours >= delay_min_hours)) {
    throw ValidationError("need 0 <= delay_min_hours <= delay_max_hours");
  }
  if (!(publish_span_days >= 0.0)) throw ValidationError("publish_span_days must be >= 0");
}

namespace {

class Generator {
 public:
  Generator(const SyntheticParams& params, std::uint64_t seed) : p_(params), rng_(seed) {
    const int fake_pool = pool_size(p_);
    for (int k = 0; k < p_.hashtags; ++k) {
      (k < fake_pool ? fake_pool_ : real_pool_).push_back("h" + std::to_string(k));
    }
  }

  SyntheticCorpus run() {
    SyntheticCorpus out;
    std::vector<NewsItem> news;

    const int fake_count = static_cast<int>(std::lround(p_.news * p_.fake_ratio));
    std::vector<Label> labels(static_cast<std::size_t>(p_.news), Label::real);
    std::fill_n(labels.begin(), fake_count, Label::fake);
    std::shuffle(labels.begin(), labels.end(), rng_);

    for (int i = 0; i < p_.news; ++i) {
      const Label label = labels[static_cast<std::size_t>(i)];
      NewsItem item = timed_news("n" + std::to_string(i), label);
      const auto& own = label == Label::fake ? fake_pool_ : real_pool_;
      const auto& other = label == Label::fake ? real_pool_ : fake_pool_;
      std::bernoulli_distribution pure(p_.purity);
      for (auto& post : item.posts) {
        const int want = uniform_int(p_.tags_min, p_.tags_max);
        for (int t = 0; t < want; ++t) {
          const auto& pool = pure(rng_) ? own : other;
          const auto& tag = pool[static_cast<std::size_t>(uniform_int(0, static_cast<int>(pool.size()) - 1))];
          if (std::find(post.hashtags.begin(), post.hashtags.end(), tag) == post.hashtags.end()) {
            post.hashtags.push_back(tag);
            (label == Label::fake ? used_fake_ : used_real_).insert(tag);
          }
        }
      }
      news.push_back(std::move(item));
    }

    if (p_.chain_depth > 0) {
      for (int g = 0; g < p_.chain_groups; ++g) add_chain(g, news, out);
    }
    out.corpus = Corpus(std::move(news));
    return out;
  }

 private:
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // A news item with its publication time and empty, timestamped posts.
  NewsItem timed_news(const std::string& id, std::optional<Label> label, int posts = -1) {
    using namespace std::chrono;
    NewsItem item;
    item.id = id;
    item.label = label;
    const double span_ms = p_.publish_span_days * 86400.0 * 1000.0;
    const auto offset = static_cast<std::int64_t>(std::uniform_real_distribution<double>(0.0, span_ms)(rng_));
    item.published_at = Timestamp(milliseconds(p_.epoch_seconds * 1000 + offset));
    const int count = posts >= 0 ? posts : uniform_int(p_.posts_min, p_.posts_max);
    std::uniform_real_distribution<double> delay(p_.delay_min_hours * 3600000.0, p_.delay_max_hours * 3600000.0);
    const auto min_ms = static_cast<std::int64_t>(std::ceil(p_.delay_min_hours * 3600000.0));
    const auto max_ms = static_cast<std::int64_t>(std::floor(p_.delay_max_hours * 3600000.0));
    for (int j = 0; j < count; ++j) {
      Post post;
      post.id = id + "-p" + std::to_string(j);
      const auto d = std::clamp(static_cast<std::int64_t>(delay(rng_)), min_ms, std::max(min_ms, max_ms));
      post.created_at = *item.published_at + milliseconds(d);
      item.posts.push_back(std::move(post));
    }
    return item;
  }

  void add_chain(int g, std::vector<NewsItem>& news, SyntheticCorpus& out) {
    const Label label = g % 2 == 0 ? Label::fake : Label::real;
    const std::string prefix = "chain" + std::to_string(g) + "_";

    // Designated news: private hashtags only.
    const int private_tags = std::max(p_.tags_max, 2);
    NewsItem designated = timed_news("d" + std::to_string(g), label, std::max(p_.posts_min, 1));
    for (auto& post : designated.posts) {
      const int want = uniform_int(p_.tags_min, p_.tags_max);
      for (int t = 0; t < want; ++t) {
        const std::string tag = prefix + std::to_string(uniform_int(0, private_tags - 1));
        if (std::find(post.hashtags.begin(), post.hashtags.end(), tag) == post.hashtags.end()) {
          post.hashtags.push_back(tag);
        }
      }
    }
    // Make sure the chain head appears.
    const std::string head = prefix + "0";
    auto& first = designated.posts.front().hashtags;
    if (std::find(first.begin(), first.end(), head) == first.end()) first.insert(first.begin(), head);

    // Unlabeled bridge: head - b1 - ... - b(depth-1) - anchor.
    const auto& used = label == Label::fake ? used_fake_ : used_real_;
    const auto& pool = label == Label::fake ? fake_pool_ : real_pool_;
    std::string anchor;
    if (!used.empty()) {
      auto it = used.begin();
      std::advance(it, uniform_int(0, static_cast<int>(used.size()) - 1));
      anchor = *it;
    } else {
      anchor = pool[static_cast<std::size_t>(uniform_int(0, static_cast<int>(pool.size()) - 1))];
    }
    std::vector<std::string> path = {head};
    for (int b = 1; b < p_.chain_depth; ++b) path.push_back("bridge" + std::to_string(g) + "_" + std::to_string(b));
    path.push_back(anchor);
    NewsItem bridge = timed_news("b" + std::to_string(g), std::nullopt, p_.chain_depth);
    for (int j = 0; j < p_.chain_depth; ++j) {
      bridge.posts[static_cast<std::size_t>(j)].hashtags = {path[static_cast<std::size_t>(j)],
                                                             path[static_cast<std::size_t>(j) + 1]};
    }

    out.designated.push_back(designated.id);
    out.bridges.push_back(bridge.id);
    news.push_back(std::move(designated));
    news.push_back(std::move(bridge));
  }

  const SyntheticParams& p_;
  std::mt19937_64 rng_;
  std::vector<std::string> fake_pool_;
  std::vector<std::string> real_pool_;
  std::set<std::string> used_fake_;
  std::set<std::string> used_real_;
};

template <typename T>
void parse_value(const std::string& key, const std::string& text, T& target) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError("invalid value for " + key + ": " + text);
  }
  target = value;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticParams& params, std::uint64_t seed) {
  params.validate();
  return Generator(params, seed).run();
}

SyntheticParams parse_synthetic_params(std::istream& in, SyntheticParams base) {
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("expected key = value: " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "hashtags") parse_value(key, value, base.hashtags);
    else if (key == "news") parse_value(key, value, base.news);
    else if (key == "fake_ratio") parse_value(key, value, base.fake_ratio);
    else if (key == "fake_pool_fraction") parse_value(key, value, base.fake_pool_fraction);
    else if (key == "posts_min") parse_value(key, value, base.posts_min);
    else if (key == "posts_max") parse_value(key, value, base.posts_max);
    else if (key == "tags_min") parse_value(key, value, base.tags_min);
    else if (key == "tags_max") parse_value(key, value, base.tags_max);
    else if (key == "purity") parse_value(key, value, base.purity);
    else if (key == "chain_depth") parse_value(key, value, base.chain_depth);
    else if (key == "chain_groups") parse_value(key, value, base.chain_groups);
    else if (key == "delay_min_hours") parse_value(key, value, base.delay_min_hours);
    else if (key == "delay_max_hours") parse_value(key, value, base.delay_max_hours);
    else if (key == "publish_span_days") parse_value(key, value, base.publish_span_days);
    else if (key == "epoch_seconds") parse_value(key, value, base.epoch_seconds);
    else throw ValidationError("unknown synthetic parameter: " + key);
  }
  return base;
}

}  // namespace newstag
