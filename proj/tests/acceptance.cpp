// Acceptance gate: ten numbered criteria, each printing one PASS/FAIL line.
// Run with a criterion number to check one, or with no arguments for all.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "actr/activation.hpp"
#include "actr/baselines.hpp"
#include "actr/calibration.hpp"
#include "actr/evaluator.hpp"
#include "actr/report.hpp"
#include "actr/sessionizer.hpp"
#include "actr/synthgen.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace actr;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// Corpus whose user 0 owns `events`, with seeded random features and
// durations so partial matching and valuation have something to chew on.
Corpus wrap_events(const std::vector<Event>& events, std::size_t n_tracks, SplitMix64& rng) {
  Corpus corpus;
  corpus.intern_user("u");
  for (std::size_t i = 0; i < n_tracks; ++i) corpus.intern_track("t" + std::to_string(i));
  corpus.events[0] = events;
  corpus.feature_dim = 3;
  for (std::size_t i = 0; i < n_tracks; ++i) {
    if (rng.next_double() < 0.8) {
      corpus.meta[i].features = {static_cast<float>(rng.next_double()),
                                 static_cast<float>(rng.next_double()),
                                 static_cast<float>(rng.next_double())};
    }
    if (rng.next_double() < 0.8)
      corpus.meta[i].duration_ms = 30000 + static_cast<std::int64_t>(rng.next_below(300000));
  }
  corpus.sessionized = true;
  corpus.refresh_stats();
  return corpus;
}

// ---- criterion 1: component scores vs brute-force oracles ----------------

bool criterion_1() {
  Check c;
  SplitMix64 rng(0xACCE01);
  auto start = std::chrono::steady_clock::now();
  for (int round = 0; round < 1000 && c.ok; ++round) {
    std::size_t n_tracks = 2 + rng.next_below(5);
    auto events = oracle::random_window_events(rng, 1 + rng.next_below(20), n_tracks);
    auto corpus = wrap_events(events, n_tracks, rng);
    auto w = oracle::window_over(events);

    std::map<TrackId, std::vector<float>> feats;
    std::map<TrackId, std::int64_t> durs;
    for (std::size_t i = 0; i < n_tracks; ++i) {
      if (corpus.meta[i].has_features()) feats[static_cast<TrackId>(i)] = corpus.meta[i].features;
      if (corpus.meta[i].has_duration()) durs[static_cast<TrackId>(i)] = corpus.meta[i].duration_ms;
    }

    double d = rng.next_double() * 2.0;
    auto diff = [&](const ActivationVector& got, const oracle::Scores& want) {
      return oracle::max_abs_diff(oracle::by_track(w, got.scores), want);
    };
    c.expect(diff(base_level(w, d), oracle::brute_base_level(events, w.t_ref(), d)) < 1e-9,
             "base_level mismatch");
    c.expect(diff(spreading(w), oracle::brute_spreading(events)) < 1e-9, "spreading mismatch");
    c.expect(diff(partial_matching(w, corpus), oracle::brute_partial_matching(events, feats)) <
                 1e-9,
             "partial_matching mismatch");
    for (RewardMode mode : {RewardMode::kRatio, RewardMode::kDiscrete, RewardMode::kMostPopular}) {
      ComponentConfig cfg;
      cfg.alpha = 0.05 + rng.next_double() * 0.9;
      cfg.reward_mode = mode;
      c.expect(diff(valuation(w, corpus, cfg), oracle::brute_valuation(events, durs, mode,
                                                                       cfg.alpha)) < 1e-9,
               "valuation mismatch");
    }
    c.expect(diff(trans_prob(w), oracle::brute_trans_prob(events)) < 1e-9, "trans_prob mismatch");
    auto n1 = noise(w, 42), n2 = noise(w, 42);
    c.expect(n1.scores == n2.scores, "noise not reproducible");
  }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 60.0, "oracle sweep exceeded one minute");
  std::printf("criterion 1: %s  component oracles, 1000 windows (%.1fs)%s%s\n",
              c.ok ? "PASS" : "FAIL", secs, c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

// ---- criterion 2: softmax invariants --------------------------------------

bool criterion_2() {
  Check c;
  SplitMix64 rng(0xACCE02);
  for (int round = 0; round < 1000 && c.ok; ++round) {
    std::size_t n = 1 + rng.next_below(30);
    std::vector<double> raw(n);
    for (double& x : raw) x = (rng.next_double() - 0.5) * 200.0;
    auto p = softmax(raw).scores;
    double sum = 0.0;
    for (double x : p) sum += x;
    c.expect(std::abs(sum - 1.0) < 1e-9, "softmax does not sum to 1");

    double shift = (rng.next_double() - 0.5) * 100.0;
    auto shifted = raw;
    for (double& x : shifted) x += shift;
    auto q = softmax(shifted).scores;
    for (std::size_t i = 0; i < n; ++i)
      c.expect(std::abs(p[i] - q[i]) < 1e-12, "softmax not translation stable");
  }
  std::printf("criterion 2: %s  softmax sums to 1 and is translation stable%s%s\n",
              c.ok ? "PASS" : "FAIL", c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

// ---- criterion 3: base-level decay limits ----------------------------------

bool criterion_3() {
  Check c;
  SplitMix64 rng(0xACCE03);
  for (int round = 0; round < 200 && c.ok; ++round) {
    // Distinct timestamps, hour-scale spacing.
    std::size_t n = 2 + rng.next_below(18);
    std::vector<Event> events;
    std::int64_t t = 500000;
    for (std::size_t i = 0; i < n; ++i) {
      t += 600 + static_cast<std::int64_t>(rng.next_below(7200));
      events.push_back(Event{static_cast<TrackId>(rng.next_below(6)),
                             t, static_cast<std::int32_t>(i / 6)});
    }
    auto w = EventWindow::over(0, events, t + 1800);

    // d = 0: the ranking must equal the per-user play-count ranking.
    std::vector<double> counts(w.candidates().size(), 0.0);
    for (const Event& e : events) counts[static_cast<std::size_t>(w.candidate_of(e.track))] += 1.0;
    c.expect(rank(w, base_level(w, 0.0).scores) == rank(w, counts),
             "d=0 ranking differs from popularity");

    // d = 50: the top pick must be the most recent track.
    auto top = rank(w, base_level(w, 50.0).scores).front();
    c.expect(w.candidates()[top] == most_recent_order(w).front(),
             "d=50 top-1 differs from most recent");
  }
  std::printf("criterion 3: %s  decay limits match popularity (d=0) and recency (d=50)%s%s\n",
              c.ok ? "PASS" : "FAIL", c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

// ---- criterion 4: valuation closed form ------------------------------------

bool criterion_4() {
  Check c;
  for (double alpha : {0.05, 0.1, 0.5}) {
    for (int n = 1; n <= 100 && c.ok; ++n) {
      // Track 0 played n times, track 1 once; constant reward 1 gives
      // V0 = 1-(1-alpha)^n and V1 = alpha, recovered from the score ratio.
      std::vector<Event> events;
      std::int64_t t = 0;
      for (int i = 0; i < n; ++i) events.push_back(Event{0, t += 60, 0});
      events.push_back(Event{1, t += 60, 0});
      SplitMix64 meta_rng(1);
      auto corpus = wrap_events(events, 2, meta_rng);
      auto w = EventWindow::over(0, events, t);
      ComponentConfig cfg;
      cfg.alpha = alpha;
      cfg.reward_mode = RewardMode::kMostPopular;
      auto v = valuation(w, corpus, cfg);
      double got = std::log(v.scores[0] / v.scores[1]);
      double want = (1.0 - std::pow(1.0 - alpha, n)) - alpha;
      c.expect(std::abs(got - want) < 1e-12, "closed form V(n) violated");
    }
  }

  SplitMix64 rng(0xACCE04);
  for (int round = 0; round < 200 && c.ok; ++round) {
    std::size_t n_tracks = 2 + rng.next_below(5);
    auto events = oracle::random_window_events(rng, 2 + rng.next_below(19), n_tracks);
    auto corpus = wrap_events(events, n_tracks, rng);
    auto w = oracle::window_over(events);
    ComponentConfig cfg;
    cfg.reward_mode = RewardMode::kMostPopular;
    std::vector<double> counts(w.candidates().size(), 0.0);
    for (const Event& e : events) counts[static_cast<std::size_t>(w.candidate_of(e.track))] += 1.0;
    c.expect(rank(w, valuation(w, corpus, cfg).scores) == rank(w, counts),
             "most_popular ranking differs from count ranking");
  }
  std::printf("criterion 4: %s  valuation closed form and most_popular count ordering%s%s\n",
              c.ok ? "PASS" : "FAIL", c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

// ---- criterion 5: power-law calibration ------------------------------------

bool criterion_5() {
  Check c;
  GapHistogram exact;
  for (std::int64_t h = 1; h <= 168; ++h)
    exact.bins[h] =
        static_cast<std::uint64_t>(std::llround(1e8 * std::pow(static_cast<double>(h), -1.5)));
  auto fit = fit_power_law(exact);
  c.expect(std::abs(fit.slope + 1.5) < 0.01, "noiseless slope outside +-0.01");
  c.expect(fit.r_squared >= 0.999, "noiseless R^2 below 0.999");

  auto spec = SynthSpec{.num_users = 50, .events_per_user = 10000, .catalog_size = 20000,
                        .gap_exponent = 1.5, .seed = 404};
  auto corpus = generate(spec);  // 500K events
  auto round_trip = fit_power_law(relisten_gaps(corpus, 168));
  c.expect(std::abs(round_trip.implied_decay() - 1.5) < 0.1,
            "round-trip slope outside +-0.1 (got " +
                std::to_string(round_trip.implied_decay()) + ")");
  std::printf("criterion 5: %s  power-law fit, noiseless and 500K-event round trip%s%s\n",
              c.ok ? "PASS" : "FAIL", c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

// ---- criterion 6: hand-enumerated protocol fixture -------------------------

bool criterion_6() {
  Check c;
  // 1 user, 2 sessions, 8 events; per-query r/R and hits enumerated by hand:
  // R-precision = 11/36, Next-HR = 1/6 for both algorithms.
  auto corpus = testutil::make_corpus({{"u", "a", 1000},
                                       {"u", "b", 1600},
                                       {"u", "a", 2200},
                                       {"u", "c", 2800},
                                       {"u", "b", 10000},
                                       {"u", "c", 10600},
                                       {"u", "c", 11200},
                                       {"u", "a", 11800}});
  AlgorithmSpec mr{.label = "MostRecent",
                   .parts = {{ComponentSpec{.kind = ComponentKind::kMostRecent}, 1.0}}};
  AlgorithmSpec bl{.label = "BaseLevel",
                   .parts = {{ComponentSpec{.kind = ComponentKind::kBaseLevel, .decay = 0.5}, 1.0}}};
  auto report = evaluate(corpus, {mr, bl});
  c.expect(report.num_queries == 6, "expected 6 queries");
  for (const auto& m : report.algorithms) {
    c.expect(std::abs(m.r_precision - 11.0 / 36.0) < 1e-15, m.label + " R-precision != 11/36");
    c.expect(std::abs(m.next_hr - 1.0 / 6.0) < 1e-15, m.label + " Next-HR != 1/6");
  }
  std::printf("criterion 6: %s  hand-built fixture reproduced exactly%s%s\n",
              c.ok ? "PASS" : "FAIL", c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

// ---- criterion 7: qualitative ordering on synthetic corpora ----------------

bool criterion_7() {
  Check c;
  auto start = std::chrono::steady_clock::now();
  std::vector<AlgorithmSpec> roster = {
      parse_algorithm("B:base_level(d=0.86)"),
      parse_algorithm("S:spreading"),
      parse_algorithm("V:valuation(mode=mp)"),
      parse_algorithm("Noise:noise"),
      parse_algorithm("BSV:base_level(d=0.86)+spreading+valuation(mode=mp)"),
  };
  std::map<std::string, double> mean;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto spec = SynthSpec{.num_users = 50, .events_per_user = 5000, .catalog_size = 100000,
                          .gap_exponent = 0.86, .relisten_prob = 0.66, .seed = seed};
    auto corpus = generate(spec);
    sessionize(corpus);
    auto report = evaluate(corpus, roster, {.seed = seed});
    for (const auto& m : report.algorithms) mean[m.label] += m.r_precision / 10.0;
  }
  double best_single = std::max({mean["B"], mean["S"], mean["V"]});
  c.expect(mean["B"] > mean["Noise"], "base_level not above noise");
  c.expect(mean["S"] > mean["Noise"], "spreading not above noise");
  c.expect(mean["BSV"] >= best_single - 0.005, "ACT-R(B,S,V) below best component - 0.005");
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 600.0, "ordering sweep exceeded ten minutes");
  std::printf(
      "criterion 7: %s  ordering B=%.4f S=%.4f V=%.4f BSV=%.4f Noise=%.4f (%.0fs)%s%s\n",
      c.ok ? "PASS" : "FAIL", mean["B"], mean["S"], mean["V"], mean["BSV"], mean["Noise"], secs,
      c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

// ---- criterion 8: determinism under parallelism ----------------------------

bool criterion_8() {
  Check c;
  auto spec = SynthSpec{.num_users = 10, .events_per_user = 800, .catalog_size = 200, .seed = 8};
  auto corpus = generate(spec);
  sessionize(corpus);
  auto roster = default_roster();
  auto a = evaluate(corpus, roster, {.seed = 8, .parallelism = 1});
  auto b = evaluate(corpus, roster, {.seed = 8, .parallelism = 4});
  c.expect(metrics_csv(a) == metrics_csv(b), "reports differ between 1 and 4 threads");
  CorpusStats stats = corpus.stats;
  c.expect(run_report_json(a, stats, {}).dump() == run_report_json(b, stats, {}).dump(),
           "full reports differ between 1 and 4 threads");
  std::printf("criterion 8: %s  byte-identical reports across thread counts%s%s\n",
              c.ok ? "PASS" : "FAIL", c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

// ---- criterion 9: performance envelope --------------------------------------

bool criterion_9() {
  Check c;
  auto start = std::chrono::steady_clock::now();
  auto spec = SynthSpec{.num_users = 150, .events_per_user = 11000, .catalog_size = 100000,
                        .gap_exponent = 0.86, .seed = 9};
  auto corpus = generate(spec);  // ~1.65M events
  sessionize(corpus);
  auto report = evaluate(corpus, default_roster(), {.seed = 9});
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(report.num_queries > 1000000, "unexpectedly few queries");
  c.expect(secs < 1800.0, "evaluation exceeded thirty minutes");

  // Incremental window maintenance vs a from-scratch scan on a small corpus.
  auto small = SynthSpec{.num_users = 5, .events_per_user = 300, .catalog_size = 50, .seed = 91};
  auto sc = generate(small);
  sessionize(sc);
  const std::int64_t span = 7 * 86400;
  for (UserId u = 0; u < sc.num_users() && c.ok; ++u) {
    const auto& stream = sc.events[u];
    for_each_query(sc, u, 7, [&](const PredictionQuery& q) {
      std::size_t lo = 0;
      while (stream[lo].timestamp < q.window.t_ref() - span) ++lo;
      std::size_t len = q.position - lo + 1;
      c.expect(q.window.events().size() == len &&
                   std::equal(q.window.events().begin(), q.window.events().end(),
                              stream.begin() + static_cast<std::ptrdiff_t>(lo)),
               "incremental window differs from scratch scan");
    });
  }
  std::printf("criterion 9: %s  %llu queries, 15 algorithms, %.0fs%s%s\n",
              c.ok ? "PASS" : "FAIL", static_cast<unsigned long long>(report.num_queries), secs,
              c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

// ---- criterion 10: weight-fit correctness -----------------------------------

bool criterion_10() {
  Check c;
  SplitMix64 rng(0xACCE10);
  for (int round = 0; round < 50 && c.ok; ++round) {
    std::size_t n = 10 + rng.next_below(90);
    std::vector<double> rows, y;
    for (std::size_t i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) rows.push_back(rng.next_double());
      y.push_back(rng.next_double());
    }
    auto got = solve_least_squares(rows, 3, y);

    // Normal equations by Cramer's rule on the 3x3 system.
    double a[3][3] = {}, b[3] = {};
    for (std::size_t r = 0; r < n; ++r) {
      const double* x = &rows[r * 3];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) a[i][j] += x[i] * x[j];
        b[i] += x[i] * y[r];
      }
    }
    auto det3 = [](double m[3][3]) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    double det = det3(a);
    for (int col = 0; col < 3; ++col) {
      double m[3][3];
      std::memcpy(m, a, sizeof m);
      for (int i = 0; i < 3; ++i) m[i][col] = b[i];
      double want = det3(m) / det;
      c.expect(std::abs(got[static_cast<std::size_t>(col)] - want) < 1e-9,
               "least squares differs from normal-equations oracle");
    }
  }

  // Positivity constraint on a corpus built so the unconstrained v is
  // negative: track x is relistened constantly but always skipped after 20s
  // of its 100s duration (discrete reward -1), while one-off fillers play to
  // completion (+1). Relevance then anti-correlates with valuation.
  {
    Corpus corpus;
    corpus.intern_user("u");
    TrackId x = corpus.intern_track("x");
    corpus.meta[x].duration_ms = 100000;
    std::int64_t t = 0;
    for (int i = 0; i < 40; ++i) {
      corpus.events[0].push_back(Event{x, t += 20, -1});
      TrackId filler = corpus.intern_track("f" + std::to_string(i));
      corpus.meta[filler].duration_ms = 10000;
      corpus.events[0].push_back(Event{filler, t += 20, -1});
    }
    corpus.refresh_stats();
    sessionize(corpus);

    WeightFitOptions opts{.user_fraction = 1.0, .seed = 1};
    opts.value.reward_mode = RewardMode::kDiscrete;
    auto unconstrained = fit_weights(corpus, opts);
    c.expect(unconstrained.v < 0.0, "constructed system did not yield a negative v");
    opts.nonneg = true;
    auto clamped = fit_weights(corpus, opts);
    c.expect(clamped.v == 0.0, "nonneg fit did not nullify a negative v");
    c.expect(clamped.b >= 0.0 && clamped.s >= 0.0, "nonneg fit left a negative weight");
  }
  std::printf("criterion 10: %s  least-squares oracle and positivity clamp%s%s\n",
              c.ok ? "PASS" : "FAIL", c.ok ? "" : " - ", c.detail.c_str());
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  bool (*criteria[])() = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                          criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  bool all_ok = true;
  if (argc > 1) {
    int n = std::atoi(argv[1]);
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1-10]\n", argv[0]);
      return 2;
    }
    all_ok = criteria[n - 1]();
  } else {
    for (auto* fn : criteria) all_ok = fn() && all_ok;
  }
  return all_ok ? 0 : 1;
}
