#include "newstag/report.hpp"

#include "json.hpp"

#include <charconv>
#include <ostream>

namespace newstag {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* mode_name(PropagationMode mode) {
  return mode == PropagationMode::closed_form ? "closed_form" : "iterative";
}

ordered_json confusion_json(const ConfusionCounts& c) {
  ordered_json j;
  j["true_real"] = c.true_real;
  j["false_real"] = c.false_real;
  j["false_fake"] = c.false_fake;
  j["true_fake"] = c.true_fake;
  return j;
}

ordered_json mean_std_json(const MeanStd& m) {
  ordered_json j;
  j["mean"] = m.mean;
  j["std"] = m.std;
  return j;
}

}  // namespace

void write_metrics_json(std::ostream& out, const MetricsReport& report) {
  const auto& c = report.config;
  ordered_json config;
  config["method"] = to_string(c.method);
  config["mu"] = c.mu;
  config["mu_grid"] = c.mu_grid;
  config["k1"] = c.k1;
  config["drop_tolerance"] = c.drop_tolerance;
  config["closure_tolerance"] = c.closure_tolerance;
  config["propagation"]["mode"] = mode_name(c.propagation.mode);
  config["propagation"]["max_iterations"] = c.propagation.max_iterations;
  config["propagation"]["tolerance"] = c.propagation.tolerance;
  config["train_fraction"] = c.train_fraction;
  config["time_horizon_hours"] = c.time_horizon_hours ? ordered_json(*c.time_horizon_hours) : ordered_json();
  config["seed"] = c.seed;
  config["repetitions"] = c.repetitions;

  ordered_json reps = ordered_json::array();
  for (const auto& r : report.repetitions) {
    ordered_json j;
    j["repetition"] = r.repetition;
    j["split_seed"] = r.split_seed;
    j["attempts"] = r.attempts;
    j["mu"] = r.mu;
    j["train_size"] = r.train_size;
    j["test_size"] = r.test_size;
    j["hashtag_free_test_news"] = r.hashtag_free_test_news;
    j["macro_f1"] = r.scores.macro;
    j["micro_f1"] = r.scores.micro;
    j["f1_real"] = r.scores.f1_real;
    j["f1_fake"] = r.scores.f1_fake;
    j["confusion"] = confusion_json(r.scores.confusion);
    reps.push_back(std::move(j));
  }

  ordered_json doc;
  doc["method"] = to_string(c.method);
  doc["config"] = std::move(config);
  doc["graph"]["vocabulary_size"] = report.vocabulary_size;
  doc["graph"]["direct_edges"] = report.direct_edges;
  doc["graph"]["closure_terms"] = report.closure_terms;
  doc["time_filter"]["exempt_news"] = report.exempt_news;
  doc["time_filter"]["dropped_untimed_posts"] = report.dropped_untimed_posts;
  doc["repetitions"] = std::move(reps);
  doc["aggregate"]["macro_f1"] = mean_std_json(report.macro_f1);
  doc["aggregate"]["micro_f1"] = mean_std_json(report.micro_f1);
  doc["aggregate"]["std_kind"] = "sample";
  doc["aggregate"]["confusion"] = confusion_json(report.confusion);
  out << doc.dump(2) << '\n';
}

void write_predictions_csv(std::ostream& out, const std::vector<Prediction>& predictions) {
  out << "news_id,predicted_label,score\n";
  for (const auto& p : predictions) {
    out << csv_field(p.news_id) << ',' << to_int(p.label) << ',' << format_double(p.score) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "x,macro_f1_mean,macro_f1_std,micro_f1_mean,micro_f1_std\n";
  for (const auto& r : rows) {
    out << csv_field(r.x) << ',' << format_double(r.macro_f1.mean) << ',' << format_double(r.macro_f1.std)
        << ',' << format_double(r.micro_f1.mean) << ',' << format_double(r.micro_f1.std) << '\n';
  }
}

void write_grid_csv(std::ostream& out, const GridReport& report) {
  std::vector<SweepRow> rows;
  for (const auto& r : report.rows) rows.push_back({format_double(r.mu), r.macro_f1, r.micro_f1});
  write_sweep_csv(out, rows);
}

void write_purity_csv(std::ostream& out, const PurityReport& report) {
  out << "news_id,label,distinct_hashtags,fake_only,real_only,mixed\n";
  for (const auto& r : report.rows) {
    out << csv_field(r.news_id) << ',' << to_int(r.label) << ',' << r.distinct_hashtags << ','
        << format_double(r.fake_only) << ',' << format_double(r.real_only) << ','
        << format_double(r.mixed) << '\n';
  }
}

void write_popularity_csv(std::ostream& out, const PopularityReport& report) {
  out << "checkpoint_hours,label,n,min,q1,median,q3,max,mean\n";
  for (const auto& r : report.stats) {
    const auto& s = r.stats;
    out << format_double(r.checkpoint_hours) << ',' << to_int(r.label) << ',' << s.n << ','
        << format_double(s.min) << ',' << format_double(s.q1) << ',' << format_double(s.median) << ','
        << format_double(s.q3) << ',' << format_double(s.max) << ',' << format_double(s.mean) << '\n';
  }
}

void write_case_study_tsv(std::ostream& out, const CaseStudyReport& report) {
  out << "hashtag\tc_star\tc0\tc_hat\tc_hat_rescaled\n";
  for (const auto& r : report.rows) {
    out << r.hashtag;
    if (!r.present) {
      out << "\tabsent\tabsent\tabsent\tabsent\n";
      continue;
    }
    out << '\t' << format_double(r.c_star) << '\t' << format_double(r.c0) << '\t'
        << format_double(r.c_hat) << '\t' << format_double(r.c_hat_rescaled) << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << "loop,iteration,residual\n";
  for (std::size_t t = 0; t < trace.closure.size(); ++t) {
    out << "k1," << t + 1 << ',' << format_double(trace.closure[t]) << '\n';
  }
  for (std::size_t t = 0; t < trace.propagation.size(); ++t) {
    out << "k2," << t + 1 << ',' << format_double(trace.propagation[t]) << '\n';
  }
}

}  // namespace newstag
