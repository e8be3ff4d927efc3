#pragma once

#include <functional>

#include "actr/algorithms.hpp"
#include "actr/baselines.hpp"

namespace actr {

// One evaluation point: the window is a snapshot of the user's last week of
// events at the moment event `position` is consumed; the remainder is the
// ground-truth rest of that event's session.
struct PredictionQuery {
  UserId user{};
  std::size_t position{};
  EventWindow window;
  std::vector<TrackId> remainder;
  std::size_t distinct_remainder{};  // R
  TrackId next_track{};
};

struct QueryOutcome {
  std::size_t algorithm{};  // roster index
  std::uint32_t relevant{};  // r
  std::uint32_t r_size{};    // R
  bool hit{};
};

struct AlgorithmMetrics {
  std::string label;
  double r_precision{0.0};
  double next_hr{0.0};
  std::uint64_t num_queries{0};
};

struct UserMetrics {
  std::string user;
  std::uint64_t num_queries{0};
  std::vector<double> r_precision;  // aligned with roster
  std::vector<double> next_hr;
};

struct MetricsReport {
  std::vector<AlgorithmMetrics> algorithms;
  std::vector<UserMetrics> per_user;
  std::uint64_t num_queries{0};
  std::uint64_t seed{0};
  int window_days{7};
  std::vector<std::string> warnings;
};

struct EvalOptions {
  int window_days = 7;
  std::uint64_t seed = 0;
  int parallelism = 1;
};

// Visits every query of one user in position order. The query's window span
// points into the corpus event storage and is only valid during the call.
void for_each_query(const Corpus& corpus, UserId user, int window_days,
                    const std::function<void(const PredictionQuery&)>& visit);

// Materialized variant for small corpora and tests.
std::vector<PredictionQuery> generate_queries(const Corpus& corpus, int window_days = 7);

// Scores one query with every roster algorithm on the shared candidate set.
std::vector<QueryOutcome> score_query(const Corpus& corpus, const PredictionQuery& query,
                                      const std::vector<AlgorithmSpec>& roster,
                                      std::uint64_t global_seed);

// Full sliding-window replay. Deterministic for a fixed seed regardless of
// parallelism: per-user partial sums are merged in user order.
MetricsReport evaluate(const Corpus& corpus, const std::vector<AlgorithmSpec>& roster,
                       const EvalOptions& opts = {});

}  // namespace actr
