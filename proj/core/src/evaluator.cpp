#include "actr/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "actr/rng.hpp"

namespace actr {
namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

// Roster compiled against a deduplicated component list.
struct Plan {
  std::vector<ComponentSpec> components;
  // Per algorithm: (component index, weight).
  std::vector<std::vector<std::pair<std::size_t, double>>> algorithms;
};

Plan compile(const std::vector<AlgorithmSpec>& roster) {
  Plan plan;
  for (const AlgorithmSpec& algo : roster) {
    std::vector<std::pair<std::size_t, double>> parts;
    for (const auto& [spec, weight] : algo.parts) {
      auto it = std::find(plan.components.begin(), plan.components.end(), spec);
      std::size_t idx;
      if (it == plan.components.end()) {
        idx = plan.components.size();
        plan.components.push_back(spec);
      } else {
        idx = static_cast<std::size_t>(it - plan.components.begin());
      }
      parts.emplace_back(idx, weight);
    }
    plan.algorithms.push_back(std::move(parts));
  }
  return plan;
}

ActivationVector compute_component(const ComponentSpec& spec, const Corpus& corpus,
                                   const PredictionQuery& query, std::uint64_t global_seed) {
  switch (spec.kind) {
    case ComponentKind::kBaseLevel:
      return base_level(query.window, spec.decay, spec.min_gap_hours);
    case ComponentKind::kSpreading:
      return spreading(query.window);
    case ComponentKind::kPartialMatching:
      return partial_matching(query.window, corpus);
    case ComponentKind::kValuation: {
      ComponentConfig cfg;
      cfg.alpha = spec.alpha;
      cfg.reward_mode = spec.reward_mode;
      return valuation(query.window, corpus, cfg);
    }
    case ComponentKind::kNoise:
      return noise(query.window, derive_seed(global_seed, query.user, query.position));
    case ComponentKind::kTransProb:
      return trans_prob(query.window);
    case ComponentKind::kMostRecent:
      return most_recent(query.window);
  }
  throw DataError("unknown component kind");
}

std::vector<QueryOutcome> score_with_plan(const Plan& plan,
                                          const std::vector<AlgorithmSpec>& roster,
                                          const Corpus& corpus, const PredictionQuery& query,
                                          std::uint64_t global_seed) {
  std::vector<ActivationVector> components;
  components.reserve(plan.components.size());
  for (const ComponentSpec& spec : plan.components)
    components.push_back(compute_component(spec, corpus, query, global_seed));

  std::vector<TrackId> distinct;
  for (TrackId t : query.remainder)
    if (std::find(distinct.begin(), distinct.end(), t) == distinct.end()) distinct.push_back(t);

  std::vector<QueryOutcome> outcomes;
  outcomes.reserve(roster.size());
  for (std::size_t a = 0; a < roster.size(); ++a) {
    const auto& parts = plan.algorithms[a];
    const std::vector<double>* scores;
    ActivationVector combined;
    if (parts.size() == 1 && parts.front().second == 1.0) {
      scores = &components[parts.front().first].scores;
    } else {
      std::vector<std::pair<const ActivationVector*, double>> refs;
      for (const auto& [idx, weight] : parts) refs.emplace_back(&components[idx], weight);
      combined = combine(refs, roster[a].label);
      scores = &combined.scores;
    }
    auto top = rank_top(query.window, *scores, distinct.size());
    QueryOutcome outcome;
    outcome.algorithm = a;
    outcome.r_size = static_cast<std::uint32_t>(distinct.size());
    for (std::uint32_t c : top) {
      TrackId t = query.window.candidates()[c];
      if (std::find(distinct.begin(), distinct.end(), t) != distinct.end()) ++outcome.relevant;
    }
    outcome.hit = !top.empty() && query.window.candidates()[top.front()] == query.next_track;
    outcomes.push_back(outcome);
  }
  return outcomes;
}

struct UserAccum {
  std::vector<double> r_prec_sum;
  std::vector<double> hit_sum;
  std::uint64_t queries{0};
};

}  // namespace

void for_each_query(const Corpus& corpus, UserId user, int window_days,
                    const std::function<void(const PredictionQuery&)>& visit) {
  if (!corpus.sessionized) throw DataError("corpus must be sessionized before evaluation");
  const auto& stream = corpus.events[user];
  if (stream.size() < 2) return;
  const std::int64_t span = static_cast<std::int64_t>(window_days) * kSecondsPerDay;

  // session_end[k] = index of the last event in k's session.
  std::vector<std::size_t> session_end(stream.size());
  for (std::size_t i = stream.size(); i-- > 0;) {
    bool last_of_session = i + 1 == stream.size() || stream[i + 1].session != stream[i].session;
    session_end[i] = last_of_session ? i : session_end[i + 1];
  }

  PredictionQuery query;
  query.user = user;
  std::size_t lo = 0;
  for (std::size_t k = 0; k < stream.size(); ++k) {
    if (session_end[k] == k) continue;  // empty remainder
    const std::int64_t t_ref = stream[k].timestamp;
    while (stream[lo].timestamp < t_ref - span) ++lo;

    query.position = k;
    query.window.assign(user, std::span<const Event>(stream.data() + lo, k - lo + 1), t_ref);
    query.remainder.clear();
    for (std::size_t i = k + 1; i <= session_end[k]; ++i) query.remainder.push_back(stream[i].track);
    query.next_track = query.remainder.front();

    std::size_t distinct = 0;
    for (std::size_t i = 0; i < query.remainder.size(); ++i) {
      bool seen = false;
      for (std::size_t j = 0; j < i && !seen; ++j) seen = query.remainder[i] == query.remainder[j];
      if (!seen) ++distinct;
    }
    query.distinct_remainder = distinct;
    visit(query);
  }
}

std::vector<PredictionQuery> generate_queries(const Corpus& corpus, int window_days) {
  std::vector<PredictionQuery> queries;
  for (UserId u = 0; u < corpus.num_users(); ++u)
    for_each_query(corpus, u, window_days,
                   [&](const PredictionQuery& q) { queries.push_back(q); });
  return queries;
}

std::vector<QueryOutcome> score_query(const Corpus& corpus, const PredictionQuery& query,
                                      const std::vector<AlgorithmSpec>& roster,
                                      std::uint64_t global_seed) {
  return score_with_plan(compile(roster), roster, corpus, query, global_seed);
}

MetricsReport evaluate(const Corpus& corpus, const std::vector<AlgorithmSpec>& roster,
                       const EvalOptions& opts) {
  if (roster.empty()) throw DataError("evaluation roster is empty");
  if (!corpus.sessionized) throw DataError("corpus must be sessionized before evaluation");
  const Plan plan = compile(roster);

  MetricsReport report;
  report.seed = opts.seed;
  report.window_days = opts.window_days;

  bool any_features = corpus.feature_dim > 0;
  bool any_durations = false;
  for (const TrackMeta& m : corpus.meta)
    if (m.has_duration()) {
      any_durations = true;
      break;
    }
  for (const AlgorithmSpec& algo : roster) {
    if (algo.needs_features() && !any_features)
      report.warnings.push_back(algo.label + ": corpus has no feature vectors; scores fall back to uniform");
    if (algo.needs_durations() && !any_durations)
      report.warnings.push_back(algo.label + ": corpus has no durations; rewards fall back to 1");
  }

  const std::size_t n_users = corpus.num_users();
  std::vector<UserAccum> accums(n_users);
  auto process_user = [&](UserId u) {
    UserAccum& acc = accums[u];
    acc.r_prec_sum.assign(roster.size(), 0.0);
    acc.hit_sum.assign(roster.size(), 0.0);
    for_each_query(corpus, u, opts.window_days, [&](const PredictionQuery& query) {
      auto outcomes = score_with_plan(plan, roster, corpus, query, opts.seed);
      for (const QueryOutcome& o : outcomes) {
        acc.r_prec_sum[o.algorithm] +=
            static_cast<double>(o.relevant) / static_cast<double>(o.r_size);
        acc.hit_sum[o.algorithm] += o.hit ? 1.0 : 0.0;
      }
      ++acc.queries;
    });
  };

  int threads = std::max(1, opts.parallelism);
  if (threads == 1 || n_users <= 1) {
    for (UserId u = 0; u < n_users; ++u) process_user(u);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(threads), n_users);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t u = next.fetch_add(1);
          if (u >= n_users) break;
          process_user(static_cast<UserId>(u));
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Merge in user-id order so floating-point sums do not depend on thread
  // scheduling.
  std::vector<double> r_prec_total(roster.size(), 0.0);
  std::vector<double> hit_total(roster.size(), 0.0);
  std::uint64_t total_queries = 0;
  for (UserId u = 0; u < n_users; ++u) {
    const UserAccum& acc = accums[u];
    total_queries += acc.queries;
    UserMetrics um;
    um.user = corpus.user_names[u];
    um.num_queries = acc.queries;
    um.r_precision.resize(roster.size(), 0.0);
    um.next_hr.resize(roster.size(), 0.0);
    for (std::size_t a = 0; a < roster.size(); ++a) {
      r_prec_total[a] += acc.r_prec_sum[a];
      hit_total[a] += acc.hit_sum[a];
      if (acc.queries > 0) {
        um.r_precision[a] = acc.r_prec_sum[a] / static_cast<double>(acc.queries);
        um.next_hr[a] = acc.hit_sum[a] / static_cast<double>(acc.queries);
      }
    }
    report.per_user.push_back(std::move(um));
  }

  report.num_queries = total_queries;
  for (std::size_t a = 0; a < roster.size(); ++a) {
    AlgorithmMetrics m;
    m.label = roster[a].label;
    m.num_queries = total_queries;
    if (total_queries > 0) {
      m.r_precision = r_prec_total[a] / static_cast<double>(total_queries);
      m.next_hr = hit_total[a] / static_cast<double>(total_queries);
    }
    report.algorithms.push_back(std::move(m));
  }
  return report;
}

}  // namespace actr
