#include "actr/activation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "actr/rng.hpp"

namespace actr {
namespace {

double gap_hours(std::int64_t t_ref, std::int64_t t, double min_gap_hours) {
  double hours = static_cast<double>(t_ref - t) / 3600.0;
  return std::max(hours, min_gap_hours);
}

std::vector<std::int64_t> last_interaction_times(const EventWindow& window) {
  std::vector<std::int64_t> last(window.candidates().size(), 0);
  for (const Event& e : window.events()) {
    last[static_cast<std::size_t>(window.candidate_of(e.track))] = e.timestamp;
  }
  return last;
}

}  // namespace

ActivationVector softmax(std::vector<double> raw, std::string label) {
  if (raw.empty()) throw DataError("softmax over an empty candidate set");
  double max = *std::max_element(raw.begin(), raw.end());
  double sum = 0.0;
  for (double& x : raw) {
    x = std::exp(x - max);
    sum += x;
  }
  for (double& x : raw) x /= sum;
  return {std::move(label), std::move(raw)};
}

ActivationVector base_level(const EventWindow& window, double decay, double min_gap_hours) {
  if (decay < 0) throw DataError("base_level decay must be non-negative");
  if (window.empty()) throw DataError("base_level over an empty window");
  std::vector<double> raw(window.candidates().size(), 0.0);
  for (const Event& e : window.events()) {
    double dt = gap_hours(window.t_ref(), e.timestamp, min_gap_hours);
    raw[static_cast<std::size_t>(window.candidate_of(e.track))] += std::pow(dt, -decay);
  }
  return softmax(std::move(raw), "base_level");
}

ActivationVector spreading(const EventWindow& window) {
  if (window.empty()) throw DataError("spreading over an empty window");
  auto events = window.events();
  const std::size_t n_cands = window.candidates().size();
  const TrackId context = events.back().track;
  const auto context_idx = static_cast<std::size_t>(window.candidate_of(context));

  std::vector<std::size_t> sessions_with(n_cands, 0);  // n_i
  std::vector<std::size_t> context_sessions_with(n_cands, 0);  // sessions in C_j with i
  std::size_t n_sessions = 0;
  std::size_t n_context_sessions = 0;  // |C_j|

  std::vector<std::int32_t> seen_in(n_cands, -1);
  std::vector<std::size_t> session_members;
  std::size_t i = 0;
  while (i < events.size()) {
    std::int32_t sid = events[i].session;
    auto session_no = static_cast<std::int32_t>(n_sessions);
    session_members.clear();
    bool has_context = false;
    for (; i < events.size() && events[i].session == sid; ++i) {
      auto c = static_cast<std::size_t>(window.candidate_of(events[i].track));
      if (seen_in[c] != session_no) {
        seen_in[c] = session_no;
        session_members.push_back(c);
        ++sessions_with[c];
        if (c == context_idx) has_context = true;
      }
    }
    ++n_sessions;
    if (has_context) {
      ++n_context_sessions;
      for (std::size_t c : session_members) ++context_sessions_with[c];
    }
  }

  std::vector<double> raw(n_cands);
  for (std::size_t c = 0; c < n_cands; ++c) {
    double p_in_context = static_cast<double>(context_sessions_with[c]) /
                          static_cast<double>(n_context_sessions);
    double p_overall =
        static_cast<double>(sessions_with[c]) / static_cast<double>(n_sessions);
    raw[c] = p_in_context / p_overall;
  }
  return softmax(std::move(raw), "spreading");
}

ActivationVector partial_matching(const EventWindow& window, const Corpus& corpus) {
  if (window.empty()) throw DataError("partial_matching over an empty window");
  const std::size_t n_cands = window.candidates().size();
  std::vector<double> raw(n_cands, 0.0);

  const TrackId context = window.events().back().track;
  const auto& context_features = corpus.meta[context].features;
  if (!context_features.empty()) {
    for (std::size_t c = 0; c < n_cands; ++c) {
      const auto& features = corpus.meta[window.candidates()[c]].features;
      if (features.empty()) continue;
      if (features.size() != context_features.size())
        throw DataError("feature vector length mismatch");
      double dot = 0.0;
      for (std::size_t k = 0; k < features.size(); ++k)
        dot += static_cast<double>(features[k]) * static_cast<double>(context_features[k]);
      raw[c] = dot;
    }
  }
  return softmax(std::move(raw), "partial_matching");
}

ActivationVector valuation(const EventWindow& window, const Corpus& corpus,
                           const ComponentConfig& cfg) {
  if (cfg.alpha <= 0.0 || cfg.alpha > 1.0) throw DataError("valuation alpha must be in (0, 1]");
  if (window.empty()) throw DataError("valuation over an empty window");
  auto events = window.events();
  std::vector<double> value(window.candidates().size(), 0.0);

  for (std::size_t i = 0; i < events.size(); ++i) {
    double reward = 1.0;
    if (cfg.reward_mode != RewardMode::kMostPopular) {
      // Listening ratio approximated by the gap to the next event, capped at
      // the track duration. Missing duration or a terminal event yields 1.
      double ratio = 1.0;
      std::int64_t duration_ms = corpus.meta[events[i].track].duration_ms;
      if (duration_ms > 0 && i + 1 < events.size()) {
        double duration_s = static_cast<double>(duration_ms) / 1000.0;
        double listened_s = std::min(
            static_cast<double>(events[i + 1].timestamp - events[i].timestamp), duration_s);
        ratio = std::clamp(listened_s / duration_s, 0.0, 1.0);
      }
      if (cfg.reward_mode == RewardMode::kRatio) {
        reward = ratio;
      } else {
        reward = ratio <= 1.0 / 3.0 ? -1.0 : (ratio >= 2.0 / 3.0 ? 1.0 : 0.0);
      }
    }
    auto c = static_cast<std::size_t>(window.candidate_of(events[i].track));
    value[c] += cfg.alpha * (reward - value[c]);
  }
  return softmax(std::move(value), "valuation");
}

ActivationVector noise(const EventWindow& window, std::uint64_t seed) {
  if (window.empty()) throw DataError("noise over an empty window");
  SplitMix64 rng(seed);
  std::vector<double> raw(window.candidates().size());
  for (double& x : raw) x = rng.next_double();
  return softmax(std::move(raw), "noise");
}

ActivationVector combine(const std::vector<std::pair<const ActivationVector*, double>>& parts,
                         std::string label) {
  if (parts.empty()) throw DataError("combine of zero components");
  const std::size_t n = parts.front().first->scores.size();
  std::vector<double> sum(n, 0.0);
  for (const auto& [vec, weight] : parts) {
    if (vec->scores.size() != n) throw DataError("combine over misaligned candidate lists");
    for (std::size_t i = 0; i < n; ++i) sum[i] += weight * vec->scores[i];
  }
  return {std::move(label), std::move(sum)};
}

namespace {

std::vector<std::uint32_t> ranked_indices(const EventWindow& window,
                                          std::span<const double> scores, std::size_t top_k,
                                          bool full) {
  if (scores.size() != window.candidates().size())
    throw DataError("rank: scores not aligned with candidates");
  auto last = last_interaction_times(window);
  std::vector<std::uint32_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0u);
  auto before = [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (last[a] != last[b]) return last[a] > last[b];
    return a < b;
  };
  if (full || top_k >= order.size()) {
    std::sort(order.begin(), order.end(), before);
  } else {
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_k),
                      order.end(), before);
    order.resize(top_k);
  }
  return order;
}

}  // namespace

std::vector<std::uint32_t> rank(const EventWindow& window, std::span<const double> scores) {
  return ranked_indices(window, scores, scores.size(), true);
}

std::vector<std::uint32_t> rank_top(const EventWindow& window, std::span<const double> scores,
                                    std::size_t k) {
  return ranked_indices(window, scores, k, false);
}

}  // namespace actr
