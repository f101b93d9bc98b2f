#include "cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include "newstag/analysis.hpp"
#include "newstag/corpus.hpp"
#include "newstag/graph_io.hpp"
#include "newstag/harness.hpp"
#include "newstag/report.hpp"
#include "newstag/synthetic.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace newstag::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Subcommand {
  const char* name;
  const char* summary;
};

constexpr Subcommand subcommands[] = {
    {"validate", "parse a corpus and print a summary"},
    {"synth", "generate a synthetic corpus"},
    {"build-graph", "write the relation matrix and vocabulary of a corpus"},
    {"run", "evaluate one configuration over repeated splits"},
    {"grid-mu", "score a grid of mu values on validation slices"},
    {"sweep-volume", "evaluate across training fractions"},
    {"sweep-time", "evaluate across detection horizons"},
    {"ablate", "evaluate all three methods"},
    {"analyze", "purity, popularity, case-study or convergence analysis"},
    {"export", "write the relation graph and hashtag credibility"},
};

std::string usage() {
  std::ostringstream s;
  s << "Usage: newstag <subcommand> [options]\n\nSubcommands:\n";
  for (const auto& sub : subcommands) {
    s << "  " << sub.name << std::string(14 - std::string(sub.name).size(), ' ') << sub.summary << '\n';
  }
  s << "\nRun `newstag <subcommand> --help` for the options of one subcommand.\n";
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw DataError("cannot write output file: " + path);
}

template <typename Writer>
std::string render(Writer&& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

// Default text of a list option in the form the config reader accepts.
template <typename T>
std::string list_default(const std::vector<T>& values) {
  if (values.empty()) return "";
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ",";
    if constexpr (std::is_same_v<T, double>) s += format_double(values[i]);
    else s += values[i];
  }
  return s;
}

struct InputFlags {
  std::string input;
  bool lenient = false;
  double clock_skew_hours = 0.0;

  void add(CLI::App& app) {
    app.add_option("--input", input, "corpus JSONL file")->required();
    app.add_flag("--lenient", lenient, "skip malformed lines");
    app.add_option("--clock-skew-hours", clock_skew_hours, "tolerated post-before-publication skew");
  }

  ParsedCorpus load() const {
    ParseOptions options;
    options.lenient = lenient;
    options.clock_skew_hours = clock_skew_hours;
    return read_corpus_file(input, options);
  }
};

struct ExperimentFlags {
  std::string method = "newstag";
  double mu = 0.4;
  std::vector<double> mu_grid;
  int k1 = 10;
  int k2 = 0;
  int max_iterations = 100;
  double tolerance = 1e-9;
  bool closed_form = false;
  double drop_tolerance = 0.0;
  double closure_tolerance = 0.0;
  double train_fraction = 0.8;
  double time_horizon = 0.0;
  std::uint64_t seed = 0;
  int repetitions = 10;
  int threads = 0;

  void add(CLI::App& app) {
    app.add_option("--method", method, "newstag, newstag_no_indirect or newstag_unweighted");
    app.add_option("--mu", mu, "regularization parameter in (0,1)");
    app.add_option("--mu-grid", mu_grid, "choose mu per repetition from this grid")
        ->delimiter(',')
        ->default_str(list_default(mu_grid))
        ->run_callback_for_default(false);
    app.add_option("--k1", k1, "closure terms");
    app.add_option("--k2", k2, "fixed propagation iterations (overrides --max-iterations and --tolerance)");
    app.add_option("--max-iterations", max_iterations, "propagation iteration cap");
    app.add_option("--tolerance", tolerance, "propagation max-norm stopping threshold");
    app.add_flag("--closed-form", closed_form, "solve the propagation system directly");
    app.add_option("--drop-tolerance", drop_tolerance, "prune closure entries below this");
    app.add_option("--closure-tolerance", closure_tolerance, "stop the closure early below this relative change");
    app.add_option("--train-fraction", train_fraction, "labeled fraction used for training");
    app.add_option("--time-horizon", time_horizon, "keep posts within this many hours (0 keeps all)");
    app.add_option("--seed", seed, "base seed of the splits");
    app.add_option("--repetitions", repetitions, "number of random splits");
    app.add_option("--threads", threads, "concurrent repetitions (0: NEWSTAG_THREADS or 1)");
  }

  ExperimentConfig config() const {
    ExperimentConfig c;
    c.method = parse_method(method);
    c.mu = mu;
    c.mu_grid = mu_grid;
    c.k1 = k1;
    c.drop_tolerance = drop_tolerance;
    c.closure_tolerance = closure_tolerance;
    c.propagation.max_iterations = max_iterations;
    c.propagation.tolerance = tolerance;
    if (k2 != 0) {
      if (k2 < 0) throw ValidationError("k2 must be >= 1");
      c.propagation.max_iterations = k2;
      c.propagation.tolerance = 0.0;
    }
    c.propagation.mode = closed_form ? PropagationMode::closed_form : PropagationMode::iterative;
    c.train_fraction = train_fraction;
    if (time_horizon != 0.0) c.time_horizon_hours = time_horizon;
    c.seed = seed;
    c.repetitions = repetitions;
    c.threads = resolve_threads();
    c.validate();
    return c;
  }

  int resolve_threads() const {
    if (threads < 0) throw ValidationError("threads must be >= 0");
    int cap = 0;
    if (const char* env = std::getenv("NEWSTAG_THREADS")) cap = std::atoi(env);
    if (threads == 0) return std::max(cap, 1);
    return cap > 0 ? std::min(threads, cap) : threads;
  }
};

std::string config_echo_path(const std::string& out) { return out + ".config.toml"; }

// Everything a subcommand needs: its parser plus the action run after parsing.
struct Command {
  CLI::App app;
  std::function<void(std::ostream&)> action;
  // Output path the config echo is named after; empty for no echo.
  std::function<std::string()> echo_base;
  // Adjusts option results just before the echo is rendered.
  std::function<void()> before_echo;

  Command(const std::string& name, const std::string& summary) : app(summary, "newstag " + name) {
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "reload options from a config echo");
  }
};

void print_json(std::ostream& out, const ordered_json& j) { out << j.dump() << '\n'; }

std::unique_ptr<Command> make_validate() {
  auto cmd = std::make_unique<Command>("validate", "Parse a corpus and print a summary.");
  auto input = std::make_shared<InputFlags>();
  auto out_path = std::make_shared<std::string>();
  input->add(cmd->app);
  cmd->app.add_option("--out", *out_path, "also write the summary here");
  cmd->echo_base = [out_path] { return *out_path; };
  cmd->action = [input, out_path](std::ostream& out) {
    const ParsedCorpus parsed = input->load();
    const Corpus& corpus = parsed.corpus;
    ordered_json j;
    j["news"] = corpus.size();
    j["labeled"] = corpus.labeled_count();
    j["unlabeled"] = corpus.size() - corpus.labeled_count();
    j["posts"] = corpus.post_count();
    j["vocabulary"] = corpus.vocabulary().size();
    j["rejected_hashtags"] = parsed.diagnostics.rejected_hashtags;
    j["warnings"] = parsed.diagnostics.warnings;
    ordered_json skipped = ordered_json::array();
    for (const auto& [line, reason] : parsed.diagnostics.skipped_lines) {
      skipped.push_back({{"line", line}, {"reason", reason}});
    }
    j["skipped_lines"] = std::move(skipped);
    if (!out_path->empty()) write_file(*out_path, j.dump(2) + "\n");
    print_json(out, j);
  };
  return cmd;
}

template <typename T>
struct ParamField {
  const char* name;
  T SyntheticParams::*member;
  const char* help;
};

const ParamField<int> int_params[] = {
    {"hashtags", &SyntheticParams::hashtags, "vocabulary size"},
    {"news", &SyntheticParams::news, "labeled news items"},
    {"posts-min", &SyntheticParams::posts_min, "fewest posts per news item"},
    {"posts-max", &SyntheticParams::posts_max, "most posts per news item"},
    {"tags-min", &SyntheticParams::tags_min, "fewest hashtags drawn per post"},
    {"tags-max", &SyntheticParams::tags_max, "most hashtags drawn per post"},
    {"chain-depth", &SyntheticParams::chain_depth, "co-occurrence hops of each chain"},
    {"chain-groups", &SyntheticParams::chain_groups, "number of chains"},
};

const ParamField<double> double_params[] = {
    {"fake-ratio", &SyntheticParams::fake_ratio, "fraction of fake news"},
    {"fake-pool-fraction", &SyntheticParams::fake_pool_fraction, "fraction of hashtags in the fake pool"},
    {"purity", &SyntheticParams::purity, "probability a hashtag comes from the own-class pool"},
    {"delay-min-hours", &SyntheticParams::delay_min_hours, "earliest post delay"},
    {"delay-max-hours", &SyntheticParams::delay_max_hours, "latest post delay"},
    {"publish-span-days", &SyntheticParams::publish_span_days, "spread of publication times"},
};

const ParamField<std::int64_t> int64_params[] = {
    {"epoch-seconds", &SyntheticParams::epoch_seconds, "earliest publication time"},
};

std::unique_ptr<Command> make_synth() {
  auto cmd = std::make_unique<Command>("synth", "Generate a synthetic corpus.");
  struct State {
    SyntheticParams flags;
    std::string params_file;
    std::uint64_t seed = 0;
    std::string out;
  };
  auto st = std::make_shared<State>();
  CLI::App& app = cmd->app;
  app.add_option("--params", st->params_file, "key = value file; explicit flags take precedence");
  for (const auto& f : int_params) app.add_option(std::string("--") + f.name, st->flags.*f.member, f.help);
  for (const auto& f : double_params) app.add_option(std::string("--") + f.name, st->flags.*f.member, f.help);
  for (const auto& f : int64_params) app.add_option(std::string("--") + f.name, st->flags.*f.member, f.help);
  app.add_option("--seed", st->seed, "generator seed");
  app.add_option("--out", st->out, "output JSONL file")->required();

  auto effective = std::make_shared<SyntheticParams>();
  cmd->echo_base = [st] { return st->out; };
  cmd->before_echo = [&app, effective, st] {
    // The echo carries effective values so it does not depend on the params file.
    auto set = [&app](const char* name, const std::string& value) {
      CLI::Option* opt = app.get_option(std::string("--") + name);
      opt->clear();
      opt->add_result(value);
    };
    for (const auto& f : int_params) set(f.name, std::to_string((*effective).*f.member));
    for (const auto& f : double_params) set(f.name, format_double((*effective).*f.member));
    for (const auto& f : int64_params) set(f.name, std::to_string((*effective).*f.member));
    app.get_option("--params")->clear();
    st->params_file.clear();
  };
  cmd->action = [&app, st, effective](std::ostream& out) {
    SyntheticParams params;
    if (!st->params_file.empty()) {
      std::ifstream in(st->params_file);
      if (!in) throw DataError("cannot open params file: " + st->params_file);
      params = parse_synthetic_params(in);
    }
    auto take = [&app](const char* name) { return app.count(std::string("--") + name) > 0; };
    for (const auto& f : int_params) {
      if (take(f.name)) params.*f.member = st->flags.*f.member;
    }
    for (const auto& f : double_params) {
      if (take(f.name)) params.*f.member = st->flags.*f.member;
    }
    for (const auto& f : int64_params) {
      if (take(f.name)) params.*f.member = st->flags.*f.member;
    }
    *effective = params;
    const SyntheticCorpus synthetic = generate_synthetic(params, st->seed);
    write_file(st->out, render([&](std::ostream& s) { write_corpus(s, synthetic.corpus); }));
    ordered_json j;
    j["news"] = synthetic.corpus.size();
    j["labeled"] = synthetic.corpus.labeled_count();
    j["posts"] = synthetic.corpus.post_count();
    j["vocabulary"] = synthetic.corpus.vocabulary().size();
    j["designated"] = synthetic.designated;
    print_json(out, j);
  };
  return cmd;
}

Corpus filtered(const Corpus& corpus, const ExperimentConfig& config) {
  return config.time_horizon_hours ? filter_by_time(corpus, *config.time_horizon_hours).corpus : corpus;
}

std::unique_ptr<Command> make_build_graph() {
  auto cmd = std::make_unique<Command>("build-graph", "Write the relation matrix and vocabulary of a corpus.");
  auto input = std::make_shared<InputFlags>();
  auto flags = std::make_shared<ExperimentFlags>();
  auto prefix = std::make_shared<std::string>();
  auto exact = std::make_shared<bool>(false);
  input->add(cmd->app);
  flags->add(cmd->app);
  cmd->app.add_option("--out-prefix", *prefix, "writes <prefix>.relation.txt and <prefix>.vocab.txt")->required();
  cmd->app.add_flag("--exact", *exact, "use the exact closure instead of k1 terms");
  cmd->echo_base = [prefix] { return *prefix; };
  cmd->action = [input, flags, prefix, exact](std::ostream& out) {
    const ExperimentConfig config = flags->config();
    const Corpus corpus = filtered(input->load().corpus, config);
    PreparedGraph graph = prepare_graph(corpus, config.method, config.closure_options());
    if (*exact && config.method != Method::newstag_no_indirect && graph.direct_edges > 0) {
      graph.relation = all_relations_exact(normalize<double>(build_direct_graph(
          corpus, config.method != Method::newstag_unweighted)));
    }
    write_file(*prefix + ".relation.txt", render([&](std::ostream& s) { write_triplet(s, graph.relation); }));
    write_file(*prefix + ".vocab.txt", render([&](std::ostream& s) { write_vocabulary(s, graph.vocab); }));
    ordered_json j;
    j["vocabulary"] = graph.vocab.size();
    j["direct_edges"] = graph.direct_edges;
    j["relation_kind"] = to_string(graph.relation.kind);
    j["terms"] = graph.relation.terms;
    j["nonzeros"] = graph.relation.values.nonZeros();
    print_json(out, j);
  };
  return cmd;
}

ordered_json aggregate_json(const MetricsReport& report) {
  ordered_json j;
  j["method"] = to_string(report.config.method);
  j["macro_f1"] = report.macro_f1.mean;
  j["micro_f1"] = report.micro_f1.mean;
  return j;
}

std::unique_ptr<Command> make_run() {
  auto cmd = std::make_unique<Command>("run", "Evaluate one configuration over repeated splits.");
  auto input = std::make_shared<InputFlags>();
  auto flags = std::make_shared<ExperimentFlags>();
  auto out_path = std::make_shared<std::string>();
  auto predictions = std::make_shared<std::string>();
  input->add(cmd->app);
  flags->add(cmd->app);
  cmd->app.add_option("--out", *out_path, "metrics JSON")->required();
  cmd->app.add_option("--predictions", *predictions, "predictions CSV of the first repetition");
  cmd->echo_base = [out_path] { return *out_path; };
  cmd->action = [input, flags, out_path, predictions](std::ostream& out) {
    const ExperimentConfig config = flags->config();
    const MetricsReport report = run_experiment(input->load().corpus, config);
    write_file(*out_path, render([&](std::ostream& s) { write_metrics_json(s, report); }));
    if (!predictions->empty()) {
      write_file(*predictions, render([&](std::ostream& s) {
                   write_predictions_csv(s, report.repetitions.front().predictions);
                 }));
    }
    print_json(out, aggregate_json(report));
  };
  return cmd;
}

std::unique_ptr<Command> make_grid_mu() {
  auto cmd = std::make_unique<Command>("grid-mu", "Score a grid of mu values on validation slices.");
  auto input = std::make_shared<InputFlags>();
  auto flags = std::make_shared<ExperimentFlags>();
  auto grid = std::make_shared<std::vector<double>>(default_mu_grid());
  auto out_path = std::make_shared<std::string>();
  input->add(cmd->app);
  flags->add(cmd->app);
  cmd->app.add_option("--grid", *grid, "mu values")->delimiter(',')->default_str(list_default(*grid));
  cmd->app.add_option("--out", *out_path, "grid CSV")->required();
  cmd->echo_base = [out_path] { return *out_path; };
  cmd->action = [input, flags, grid, out_path](std::ostream& out) {
    const ExperimentConfig config = flags->config();
    const GridReport report = grid_search_mu(input->load().corpus, config, *grid);
    write_file(*out_path, render([&](std::ostream& s) { write_grid_csv(s, report); }));
    ordered_json j;
    j["best_mu"] = report.best_mu;
    print_json(out, j);
  };
  return cmd;
}

using SweepFn = std::function<std::vector<SweepRow>(const Corpus&, const ExperimentConfig&,
                                                    const std::vector<double>&)>;

std::unique_ptr<Command> make_sweep(const std::string& name, const std::string& summary,
                                    const std::string& list_flag, std::vector<double> defaults,
                                    SweepFn sweep) {
  auto cmd = std::make_unique<Command>(name, summary);
  auto input = std::make_shared<InputFlags>();
  auto flags = std::make_shared<ExperimentFlags>();
  auto values = std::make_shared<std::vector<double>>(std::move(defaults));
  auto out_path = std::make_shared<std::string>();
  input->add(cmd->app);
  flags->add(cmd->app);
  cmd->app.add_option(list_flag, *values, "sweep values")->delimiter(',')->default_str(list_default(*values));
  cmd->app.add_option("--out", *out_path, "sweep CSV")->required();
  cmd->echo_base = [out_path] { return *out_path; };
  cmd->action = [input, flags, values, out_path, sweep](std::ostream& out) {
    const ExperimentConfig config = flags->config();
    const auto rows = sweep(input->load().corpus, config, *values);
    write_file(*out_path, render([&](std::ostream& s) { write_sweep_csv(s, rows); }));
    ordered_json j;
    j["rows"] = rows.size();
    print_json(out, j);
  };
  return cmd;
}

std::unique_ptr<Command> make_ablate() {
  auto cmd = std::make_unique<Command>("ablate", "Evaluate all three methods.");
  auto input = std::make_shared<InputFlags>();
  auto flags = std::make_shared<ExperimentFlags>();
  auto out_path = std::make_shared<std::string>();
  input->add(cmd->app);
  flags->add(cmd->app);
  cmd->app.add_option("--out", *out_path, "ablation CSV")->required();
  cmd->echo_base = [out_path] { return *out_path; };
  cmd->action = [input, flags, out_path](std::ostream& out) {
    const auto rows = ablate(input->load().corpus, flags->config());
    write_file(*out_path, render([&](std::ostream& s) { write_sweep_csv(s, rows); }));
    ordered_json j = ordered_json::object();
    for (const auto& r : rows) j[r.x] = r.micro_f1.mean;
    print_json(out, j);
  };
  return cmd;
}

std::unique_ptr<Command> make_analyze() {
  auto cmd = std::make_unique<Command>("analyze", "Purity, popularity, case-study or convergence analysis.");
  auto input = std::make_shared<InputFlags>();
  auto flags = std::make_shared<ExperimentFlags>();
  auto kind = std::make_shared<std::string>();
  auto checkpoints = std::make_shared<std::vector<double>>(std::vector<double>{12, 24, 36, 48, 60});
  auto watchlist = std::make_shared<std::vector<std::string>>();
  auto out_path = std::make_shared<std::string>();
  input->add(cmd->app);
  flags->add(cmd->app);
  cmd->app.add_option("--kind", *kind, "purity, popularity, case-study or convergence")
      ->required()
      ->check(CLI::IsMember({"purity", "popularity", "case-study", "convergence"}));
  cmd->app.add_option("--checkpoints", *checkpoints, "popularity checkpoints in hours")->delimiter(',')->default_str(list_default(*checkpoints));
  cmd->app.add_option("--watchlist", *watchlist, "hashtags for the case study")->delimiter(',')->default_str(list_default(*watchlist));
  cmd->app.add_option("--out", *out_path, "analysis output")->required();
  cmd->echo_base = [out_path] { return *out_path; };
  cmd->action = [=](std::ostream& out) {
    const ExperimentConfig config = flags->config();
    const Corpus corpus = input->load().corpus;
    ordered_json j;
    j["kind"] = *kind;
    std::string text;
    if (*kind == "purity") {
      const auto report = purity_analysis(corpus);
      text = render([&](std::ostream& s) { write_purity_csv(s, report); });
      j["fake_only_hashtags"] = report.fake_only_hashtags;
      j["real_only_hashtags"] = report.real_only_hashtags;
      j["mixed_hashtags"] = report.mixed_hashtags;
      j["excluded_hashtag_free"] = report.excluded_hashtag_free;
    } else if (*kind == "popularity") {
      const auto report = popularity_analysis(corpus, *checkpoints);
      text = render([&](std::ostream& s) { write_popularity_csv(s, report); });
      j["series"] = report.series.size();
      j["excluded_untimed"] = report.excluded_untimed;
      j["excluded_unlabeled"] = report.excluded_unlabeled;
    } else if (*kind == "case-study") {
      const auto report = case_study(corpus, config, *watchlist);
      text = render([&](std::ostream& s) { write_case_study_tsv(s, report); });
      j["mu"] = report.mu;
      j["warning"] = report.warning ? ordered_json(*report.warning) : ordered_json();
    } else {
      const auto trace = convergence_trace(corpus, config);
      text = render([&](std::ostream& s) { write_convergence_csv(s, trace); });
      j["closure_terms"] = trace.closure.size();
      j["propagation_iterations"] = trace.propagation.size();
    }
    write_file(*out_path, text);
    print_json(out, j);
  };
  return cmd;
}

std::unique_ptr<Command> make_export() {
  auto cmd = std::make_unique<Command>("export", "Write the relation graph and hashtag credibility.");
  auto input = std::make_shared<InputFlags>();
  auto flags = std::make_shared<ExperimentFlags>();
  auto prefix = std::make_shared<std::string>();
  auto matrix = std::make_shared<std::string>("relation");
  auto dot = std::make_shared<bool>(false);
  input->add(cmd->app);
  flags->add(cmd->app);
  cmd->app.add_option("--out-prefix", *prefix, "writes <prefix>.edges.tsv, .nodes.tsv, .credibility.tsv")
      ->required();
  cmd->app.add_option("--matrix", *matrix, "relation or direct")
      ->check(CLI::IsMember({"relation", "direct"}));
  cmd->app.add_flag("--dot", *dot, "also write <prefix>.dot");
  cmd->echo_base = [prefix] { return *prefix; };
  cmd->action = [=](std::ostream& out) {
    const ExperimentConfig config = flags->config();
    const Corpus corpus = filtered(input->load().corpus, config);
    const PreparedGraph graph = prepare_graph(corpus, config.method, config.closure_options());
    const SparseMatrix<double> edges =
        *matrix == "direct"
            ? build_direct_graph(corpus, config.method != Method::newstag_unweighted).adjacency<double>()
            : graph.relation.values;

    std::vector<std::string> labeled;
    for (const auto& news : corpus.news()) {
      if (news.label) labeled.push_back(news.id);
    }
    auto c_star = init_credibility(corpus, labeled, graph.vocab, uses_per_post(config.method));
    c_star.provenance = Provenance::all_data_c_star;

    write_file(*prefix + ".edges.tsv", render([&](std::ostream& s) { write_edge_list(s, graph.vocab, edges); }));
    write_file(*prefix + ".nodes.tsv", render([&](std::ostream& s) { write_node_table(s, graph.vocab, c_star); }));
    write_file(*prefix + ".credibility.tsv",
               render([&](std::ostream& s) { write_credibility(s, graph.vocab, c_star); }));
    if (*dot) {
      write_file(*prefix + ".dot", render([&](std::ostream& s) { write_dot(s, graph.vocab, edges, &c_star); }));
    }
    ordered_json j;
    j["vocabulary"] = graph.vocab.size();
    j["edges"] = edges.nonZeros() / 2;
    print_json(out, j);
  };
  return cmd;
}

std::unique_ptr<Command> make_command(const std::string& name) {
  if (name == "validate") return make_validate();
  if (name == "synth") return make_synth();
  if (name == "build-graph") return make_build_graph();
  if (name == "run") return make_run();
  if (name == "grid-mu") return make_grid_mu();
  if (name == "sweep-volume") {
    return make_sweep("sweep-volume", "Evaluate across training fractions.", "--fractions",
                      {0.2, 0.4, 0.6, 0.8}, sweep_training_fraction);
  }
  if (name == "sweep-time") {
    return make_sweep("sweep-time", "Evaluate across detection horizons; the last row keeps every post.",
                      "--horizons", {12, 24, 36, 48, 60}, sweep_detection_time);
  }
  if (name == "ablate") return make_ablate();
  if (name == "analyze") return make_analyze();
  if (name == "export") return make_export();
  return nullptr;
}

int fail(std::ostream& err, ExitCode code, const std::string& message) {
  ordered_json j;
  j["error"] = code == validation_error ? "validation" : "data";
  j["message"] = message;
  err << j.dump() << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) return fail(err, validation_error, "missing subcommand; see --help");
  if (args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    out << usage();
    return ok;
  }
  const auto cmd = make_command(args[0]);
  if (!cmd) return fail(err, validation_error, "unknown subcommand: " + args[0]);

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
    cmd->app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << cmd->app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << cmd->app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    return fail(err, validation_error, e.what());
  }

  try {
    cmd->action(out);
    const std::string base = cmd->echo_base ? cmd->echo_base() : std::string();
    if (!base.empty()) {
      if (cmd->before_echo) cmd->before_echo();
      write_file(config_echo_path(base), cmd->app.config_to_str(true, false));
    }
  } catch (const ValidationError& e) {
    return fail(err, validation_error, e.what());
  } catch (const std::exception& e) {
    return fail(err, data_error, e.what());
  }
  return ok;
}

}  // namespace newstag::cli
