#pragma once

#include <string>
#include <utility>

#include "actr/window.hpp"

namespace actr {

inline constexpr double kDefaultMinGapHours = 1.0 / 3600.0;  // one second

enum class RewardMode { kRatio, kDiscrete, kMostPopular };

struct ComponentConfig {
  double decay = 0.5;
  double alpha = 0.1;
  RewardMode reward_mode = RewardMode::kMostPopular;
  std::uint64_t noise_seed = 0;
  double min_gap_hours = kDefaultMinGapHours;
};

// Per-candidate scores aligned with EventWindow::candidates().
struct ActivationVector {
  std::string label;
  std::vector<double> scores;
};

// Numerically stable exp-normalization (invariant to score translation).
ActivationVector softmax(std::vector<double> raw, std::string label = "softmax");

// Recency/frequency trace: sum over past interactions of (gap hours)^-decay,
// gaps clamped below at min_gap_hours.
ActivationVector base_level(const EventWindow& window, double decay,
                            double min_gap_hours = kDefaultMinGapHours);

// Session co-occurrence with the last track, penalized by overall session
// frequency. The in-progress session's consumed prefix counts as a session.
ActivationVector spreading(const EventWindow& window);

// Dot-product similarity between each candidate's feature vector and the
// last track's. Missing features contribute a raw score of 0.
ActivationVector partial_matching(const EventWindow& window, const Corpus& corpus);

// Incremental reward learning V <- V + alpha * (R - V) over each candidate's
// interactions in window order, V(0) = 0.
ActivationVector valuation(const EventWindow& window, const Corpus& corpus,
                           const ComponentConfig& cfg);

// Uniform random score per candidate from a deterministic seeded stream.
ActivationVector noise(const EventWindow& window, std::uint64_t seed);

// Elementwise weighted sum of already-normalized components; not
// re-normalized.
ActivationVector combine(const std::vector<std::pair<const ActivationVector*, double>>& parts,
                         std::string label = "combined");

// Candidate indices by score descending; ties by most recent interaction
// time descending, then by first-appearance order.
std::vector<std::uint32_t> rank(const EventWindow& window, std::span<const double> scores);

// Top-k prefix of rank() without ordering the tail.
std::vector<std::uint32_t> rank_top(const EventWindow& window, std::span<const double> scores,
                                    std::size_t k);

}  // namespace actr
