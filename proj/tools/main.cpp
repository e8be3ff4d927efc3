#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "actr/corpus.hpp"
#include "actr/report.hpp"
#include "actr/sessionizer.hpp"
#include "actr/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitData = 3;

// Raised for roster/config mistakes that should surface as usage errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                    std::uint64_t seed) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config;
  manifest["seed"] = seed;
  actr::write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw actr::IoError("cannot create output directory " + dir.string());
  return dir;
}

struct EvaluateOpts {
  std::string events, meta, out = "out";
  int window_days = 7;
  int gap_minutes = 30;
  std::uint64_t seed = 0;
  int threads = 1;
  bool strict = false;
  double default_decay = 0.5, week_decay = 0.86, full_decay = 1.737;
  std::vector<std::string> algos;
  std::string weights_file;
};

json evaluate_config(const EvaluateOpts& o) {
  return json{{"events", o.events},       {"meta", o.meta},
              {"out", o.out},             {"window_days", o.window_days},
              {"gap_minutes", o.gap_minutes}, {"seed", o.seed},
              {"threads", o.threads},     {"strict", o.strict},
              {"default_decay", o.default_decay}, {"week_decay", o.week_decay},
              {"full_decay", o.full_decay},       {"algorithms", o.algos},
              {"weights_file", o.weights_file}};
}

int cmd_evaluate(const EvaluateOpts& o) {
  std::vector<actr::AlgorithmSpec> roster;
  if (o.algos.empty()) {
    roster = actr::default_roster(o.default_decay, o.week_decay, o.full_decay);
  } else {
    for (const auto& text : o.algos) {
      try {
        roster.push_back(actr::parse_algorithm(text));
      } catch (const actr::DataError& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (!o.weights_file.empty()) {
    std::ifstream in(o.weights_file);
    if (!in) throw actr::IoError("cannot open weights file: " + o.weights_file);
    json jw = json::parse(in, nullptr, true, true);
    actr::WeightFit fit;
    auto wopts = actr::weights_from_json(jw, fit);
    actr::AlgorithmSpec weighted;
    weighted.label = "ACT-R(weighted)";
    weighted.parts = {{wopts.base, fit.b}, {wopts.spread, fit.s}, {wopts.value, fit.v}};
    roster.push_back(std::move(weighted));
  }
  if (roster.empty()) throw UsageError("evaluation roster is empty");

  auto corpus = actr::load_events(o.events, {.strict = o.strict});
  if (!o.meta.empty()) actr::load_meta(o.meta, corpus, {.strict = o.strict});
  actr::sessionize(corpus, o.gap_minutes);

  actr::EvalOptions eval_opts;
  eval_opts.window_days = o.window_days;
  eval_opts.seed = o.seed;
  eval_opts.parallelism = o.threads;
  auto report = actr::evaluate(corpus, roster, eval_opts);

  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

  auto out_dir = prepare_out_dir(o.out);
  json config = evaluate_config(o);
  actr::write_text_file(out_dir / "metrics.csv", actr::metrics_csv(report));
  actr::write_text_file(out_dir / "report.json",
                        actr::run_report_json(report, corpus.stats, config).dump(2) + "\n");
  write_manifest(out_dir, "evaluate", config, o.seed);

  // Ranked table, R-precision ascending.
  std::vector<const actr::AlgorithmMetrics*> rows;
  for (const auto& m : report.algorithms) rows.push_back(&m);
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    if (a->r_precision != b->r_precision) return a->r_precision < b->r_precision;
    return a->label < b->label;
  });
  std::printf("%-24s %10s %10s\n", "Algorithm", "R-prec", "Next-HR");
  for (const auto* m : rows)
    std::printf("%-24s %10.5f %10.5f\n", m->label.c_str(), m->r_precision, m->next_hr);
  std::printf("queries: %llu\n", static_cast<unsigned long long>(report.num_queries));
  return 0;
}

struct FitDecayOpts {
  std::string events, out = "out";
  std::int64_t max_hours = 0;  // 0 = unbounded
  bool strict = false;
};

int cmd_fit_decay(const FitDecayOpts& o) {
  auto corpus = actr::load_events(o.events, {.strict = o.strict});
  std::optional<std::int64_t> cutoff;
  if (o.max_hours > 0) cutoff = o.max_hours;
  auto hist = actr::relisten_gaps(corpus, cutoff);
  auto fit = actr::fit_power_law(hist);

  auto out_dir = prepare_out_dir(o.out);
  json config = {{"events", o.events}, {"out", o.out}, {"max_hours", o.max_hours}};
  actr::write_text_file(out_dir / "histogram.csv", actr::histogram_csv(hist));
  actr::write_text_file(out_dir / "fit.json", actr::power_law_json(fit, hist).dump(2) + "\n");
  write_manifest(out_dir, "fit-decay", config, 0);
  std::printf("slope %.6f  intercept %.6f  R^2 %.6f  implied decay %.6f\n", fit.slope,
              fit.intercept, fit.r_squared, fit.implied_decay());
  return 0;
}

struct FitWeightsOpts {
  std::string events, meta, out = "out";
  double fraction = 0.10;
  bool intercept = false;
  bool nonneg = false;
  std::uint64_t seed = 0;
  double decay = 0.86;
  double alpha = 0.1;
  int window_days = 7;
  int gap_minutes = 30;
  bool strict = false;
};

int cmd_fit_weights(const FitWeightsOpts& o) {
  auto corpus = actr::load_events(o.events, {.strict = o.strict});
  if (!o.meta.empty()) actr::load_meta(o.meta, corpus, {.strict = o.strict});
  actr::sessionize(corpus, o.gap_minutes);

  actr::WeightFitOptions opts;
  opts.user_fraction = o.fraction;
  opts.with_intercept = o.intercept;
  opts.nonneg = o.nonneg;
  opts.seed = o.seed;
  opts.window_days = o.window_days;
  opts.base.decay = o.decay;
  opts.value.alpha = o.alpha;
  auto fit = actr::fit_weights(corpus, opts);
  if (fit.degenerate) std::cerr << "warning: singular design matrix; minimum-norm solution\n";

  auto out_dir = prepare_out_dir(o.out);
  json config = {{"events", o.events},   {"meta", o.meta},       {"out", o.out},
                 {"fraction", o.fraction}, {"intercept", o.intercept}, {"nonneg", o.nonneg},
                 {"seed", o.seed},        {"decay", o.decay},     {"alpha", o.alpha},
                 {"window_days", o.window_days}, {"gap_minutes", o.gap_minutes}};
  actr::write_text_file(out_dir / "weights.json", actr::weights_json(fit, opts).dump(2) + "\n");
  write_manifest(out_dir, "fit-weights", config, o.seed);
  std::printf("b %.6f  s %.6f  v %.6f", fit.b, fit.s, fit.v);
  if (fit.intercept) std::printf("  intercept %.6f", *fit.intercept);
  std::printf("  (rows %zu)\n", fit.rows);
  return 0;
}

struct SessionizeOpts {
  std::string events, out = "out";
  int gap_minutes = 30;
  bool strict = false;
};

int cmd_sessionize(const SessionizeOpts& o) {
  auto corpus = actr::load_events(o.events, {.strict = o.strict});
  actr::sessionize(corpus, o.gap_minutes);
  auto stats = actr::session_stats(corpus);

  auto out_dir = prepare_out_dir(o.out);
  json config = {{"events", o.events}, {"out", o.out}, {"gap_minutes", o.gap_minutes}};
  actr::write_sessions_tsv(corpus, out_dir / "sessions.tsv");
  write_manifest(out_dir, "sessionize", config, 0);
  std::printf("sessions %zu  mean events/session %.3f\n", stats.total_sessions,
              stats.mean_events_per_session);
  return 0;
}

struct SampleOpts {
  std::string events, out = "out";
  actr::SamplingSpec spec;
  bool strict = false;
};

int cmd_sample(const SampleOpts& o) {
  auto corpus = actr::load_events(o.events, {.strict = o.strict});
  auto result = actr::stratified_sample(corpus, o.spec);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

  auto out_dir = prepare_out_dir(o.out);
  json config = {{"events", o.events},
                 {"out", o.out},
                 {"min_events", o.spec.min_events},
                 {"max_events", o.spec.max_events},
                 {"num_bins", o.spec.num_bins},
                 {"users_per_stratum", o.spec.users_per_stratum},
                 {"seed", o.spec.seed}};
  actr::write_events_tsv(result.corpus, out_dir / "events.tsv");
  write_manifest(out_dir, "sample", config, o.spec.seed);
  std::printf("sampled %zu users, %zu events\n", result.corpus.stats.users,
              result.corpus.stats.events);
  return 0;
}

struct SynthOpts {
  actr::SynthSpec spec;
  std::string out = "out";
};

int cmd_synth(const SynthOpts& o) {
  auto corpus = actr::generate(o.spec);
  auto out_dir = prepare_out_dir(o.out);
  json config = {{"users", o.spec.num_users},
                 {"events_per_user", o.spec.events_per_user},
                 {"catalog_size", o.spec.catalog_size},
                 {"gap_exponent", o.spec.gap_exponent},
                 {"session_length_mean", o.spec.session_length_mean},
                 {"relisten_prob", o.spec.relisten_prob},
                 {"seed", o.spec.seed},
                 {"out", o.out}};
  actr::write_events_tsv(corpus, out_dir / "events.tsv");
  write_manifest(out_dir, "synth", config, o.spec.seed);
  std::printf("generated %zu users, %zu events, %zu tracks\n", corpus.stats.users,
              corpus.stats.events, corpus.stats.tracks);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ACT-R declarative-memory relistening predictor and evaluation harness"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file (flags win)");

  EvaluateOpts ev;
  auto* evaluate = app.add_subcommand("evaluate", "Replay the sliding-window protocol");
  evaluate->add_option("--events", ev.events, "Event TSV")->required();
  evaluate->add_option("--meta", ev.meta, "Track metadata TSV");
  evaluate->add_option("--out", ev.out, "Output directory");
  evaluate->add_option("--window-days", ev.window_days);
  evaluate->add_option("--gap-minutes", ev.gap_minutes);
  evaluate->add_option("--seed", ev.seed);
  evaluate->add_option("--threads", ev.threads);
  evaluate->add_flag("--strict", ev.strict, "Abort on malformed rows");
  evaluate->add_option("--default-decay", ev.default_decay);
  evaluate->add_option("--week-decay", ev.week_decay);
  evaluate->add_option("--full-decay", ev.full_decay);
  evaluate->add_option("--algo", ev.algos,
                       "Algorithm expression, repeatable (default: stock roster)");
  evaluate->add_option("--weights-file", ev.weights_file, "weights.json from fit-weights");

  FitDecayOpts fd;
  auto* fit_decay = app.add_subcommand("fit-decay", "Fit the relistening-gap power law");
  fit_decay->add_option("--events", fd.events)->required();
  fit_decay->add_option("--out", fd.out);
  fit_decay->add_option("--max-hours", fd.max_hours, "Gap cutoff in hours (0 = none)");
  fit_decay->add_flag("--strict", fd.strict);

  FitWeightsOpts fw;
  auto* fit_weights = app.add_subcommand("fit-weights", "Estimate component weights");
  fit_weights->add_option("--events", fw.events)->required();
  fit_weights->add_option("--meta", fw.meta);
  fit_weights->add_option("--out", fw.out);
  fit_weights->add_option("--fraction", fw.fraction);
  fit_weights->add_flag("--intercept", fw.intercept);
  fit_weights->add_flag("--nonneg", fw.nonneg);
  fit_weights->add_option("--seed", fw.seed);
  fit_weights->add_option("--decay", fw.decay, "Base-level decay for the design matrix");
  fit_weights->add_option("--alpha", fw.alpha);
  fit_weights->add_option("--window-days", fw.window_days);
  fit_weights->add_option("--gap-minutes", fw.gap_minutes);
  fit_weights->add_flag("--strict", fw.strict);

  SessionizeOpts sz;
  auto* sessionize = app.add_subcommand("sessionize", "Assign session ids");
  sessionize->add_option("--events", sz.events)->required();
  sessionize->add_option("--out", sz.out);
  sessionize->add_option("--gap-minutes", sz.gap_minutes);
  sessionize->add_flag("--strict", sz.strict);

  SampleOpts sm;
  auto* sample = app.add_subcommand("sample", "Stratified user sampling");
  sample->add_option("--events", sm.events)->required();
  sample->add_option("--out", sm.out);
  sample->add_option("--min-events", sm.spec.min_events);
  sample->add_option("--max-events", sm.spec.max_events);
  sample->add_option("--bins", sm.spec.num_bins);
  sample->add_option("--per-bin", sm.spec.users_per_stratum);
  sample->add_option("--seed", sm.spec.seed);
  sample->add_flag("--strict", sm.strict);

  SynthOpts sy;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--users", sy.spec.num_users);
  synth->add_option("--events-per-user", sy.spec.events_per_user);
  synth->add_option("--catalog", sy.spec.catalog_size);
  synth->add_option("--exponent", sy.spec.gap_exponent);
  synth->add_option("--session-mean", sy.spec.session_length_mean);
  synth->add_option("--relisten-prob", sy.spec.relisten_prob);
  synth->add_option("--seed", sy.spec.seed);
  synth->add_option("--out", sy.out);

  try {
    app.parse(argc, argv);
    if (evaluate->parsed()) return cmd_evaluate(ev);
    if (fit_decay->parsed()) return cmd_fit_decay(fd);
    if (fit_weights->parsed()) return cmd_fit_weights(fw);
    if (sessionize->parsed()) return cmd_sessionize(sz);
    if (sample->parsed()) return cmd_sample(sm);
    if (synth->parsed()) return cmd_synth(sy);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const actr::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const actr::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
