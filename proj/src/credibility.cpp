#include "newstag/credibility.hpp"

#include <unordered_set>

namespace newstag {

const char* to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::initial_c0:
      return "initial_c0";
    case Provenance::propagated:
      return "propagated";
    case Provenance::all_data_c_star:
      return "all_data_c_star";
  }
  return "unknown";
}

void PropagationConfig::validate() const {
  if (!(mu > 0.0 && mu < 1.0)) throw ValidationError("mu must be in (0,1)");
  if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
  if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be >= 0");
  if (closed_form_cap < 0) throw ValidationError("closed-form cap must be >= 0");
}

CredibilityVector<double> init_credibility(const Corpus& corpus,
                                           const std::vector<std::string>& train_ids,
                                           const Vocabulary& vocab, bool per_post) {
  const Index q = vocab.size();
  Vector<double> sum = Vector<double>::Zero(q);
  Vector<double> count = Vector<double>::Zero(q);
  std::unordered_set<Index> seen;

  auto index_of = [&](const std::string& tag) {
    const auto k = vocab.find(tag);
    if (!k) throw DataError("hashtag missing from vocabulary: " + tag);
    return *k;
  };

  for (const auto& id : train_ids) {
    const NewsItem* news = corpus.find(id);
    if (!news) throw ValidationError("unknown training news id: " + id);
    if (!news->label) throw ValidationError("training news is unlabeled: " + id);
    const double y = to_int(*news->label);
    seen.clear();
    for (const auto& post : news->posts) {
      for (const auto& tag : post.hashtags) {
        const Index k = index_of(tag);
        if (per_post || seen.insert(k).second) {
          sum(k) += y;
          count(k) += 1.0;
        }
      }
    }
  }
  CredibilityVector<double> c0;
  c0.provenance = Provenance::initial_c0;
  c0.values = (count.array() > 0.0).select(sum.array() / count.array().max(1.0), 0.0);
  return c0;
}

RescaleResult rescale_credibility(const CredibilityVector<double>& credibility) {
  RescaleResult result;
  result.credibility = credibility;
  const double scale = credibility.size() > 0 ? credibility.values.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) {
    result.warning = "all-zero credibility vector left unscaled";
    return result;
  }
  result.credibility.values /= scale;
  return result;
}

std::vector<Prediction> predict(const Corpus& corpus, const std::vector<std::string>& target_ids,
                                const Vocabulary& vocab,
                                const CredibilityVector<double>& credibility, bool per_post) {
  std::vector<Prediction> out;
  out.reserve(target_ids.size());
  std::unordered_set<Index> seen;
  for (const auto& id : target_ids) {
    const NewsItem* news = corpus.find(id);
    if (!news) throw ValidationError("unknown news id: " + id);
    double score = 0.0;
    seen.clear();
    for (const auto& post : news->posts) {
      for (const auto& tag : post.hashtags) {
        const auto k = vocab.find(tag);
        if (!k) continue;
        if (per_post || seen.insert(*k).second) score += credibility.values(*k);
      }
    }
    out.push_back({id, score > 0.0 ? Label::real : Label::fake, score});
  }
  return out;
}

}  // namespace newstag
