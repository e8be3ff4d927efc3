#pragma once

#include <string>
#include <vector>

#include "actr/activation.hpp"

namespace actr {

enum class ComponentKind {
  kBaseLevel,
  kSpreading,
  kPartialMatching,
  kValuation,
  kNoise,
  kTransProb,
  kMostRecent,
};

struct ComponentSpec {
  ComponentKind kind{};
  double decay = 0.5;                              // base level
  double alpha = 0.1;                              // valuation
  RewardMode reward_mode = RewardMode::kMostPopular;  // valuation
  double min_gap_hours = kDefaultMinGapHours;

  friend bool operator==(const ComponentSpec&, const ComponentSpec&) = default;
};

// A predictor: weighted sum of component activations, ranked.
struct AlgorithmSpec {
  std::string label;
  std::vector<std::pair<ComponentSpec, double>> parts;

  bool needs_features() const;
  bool needs_durations() const;
};

// Grammar: expr := term ('+' term)*, term := [weight '*'] component,
// component := name [ '(' key=value (',' key=value)* ')' ].
// Names: base_level, spreading, partial_matching, valuation, noise,
// trans_prob, most_recent. Keys: d, alpha, mode (ratio|discrete|mp).
// An optional "label:" prefix overrides the display label.
AlgorithmSpec parse_algorithm(const std::string& text);

// The fifteen stock configurations: every single component (base level with
// d = default/week/full-range presets, valuation with three reward modes),
// the unweighted combinations B+V, S+V, B+S, B+S+V, and the two non-ACT-R
// baselines.
std::vector<AlgorithmSpec> default_roster(double default_decay = 0.5, double week_decay = 0.86,
                                          double full_range_decay = 1.737);

}  // namespace actr
