#pragma once

#include <map>
#include <optional>

#include "actr/algorithms.hpp"
#include "actr/types.hpp"

namespace actr {

// Relistening-gap counts keyed by whole hours (floor, minimum bin 1).
struct GapHistogram {
  std::map<std::int64_t, std::uint64_t> bins;
  std::optional<std::int64_t> max_hours;

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& [h, c] : bins) sum += c;
    return sum;
  }
};

// Gaps between consecutive interactions of the same user with the same
// track. Gaps beyond max_hours are dropped when a cutoff is given.
GapHistogram relisten_gaps(const Corpus& corpus, std::optional<std::int64_t> max_hours = {});

struct PowerLawFit {
  double slope{};
  double intercept{};
  double r_squared{};

  double implied_decay() const { return -slope; }
};

// Ordinary least squares of log10(count) on log10(hours) over non-empty
// bins; needs at least two of them.
PowerLawFit fit_power_law(const GapHistogram& hist);

struct WeightFitOptions {
  double user_fraction = 0.10;
  bool with_intercept = false;
  bool nonneg = false;
  std::uint64_t seed = 0;
  int window_days = 7;
  ComponentSpec base{.kind = ComponentKind::kBaseLevel, .decay = 0.86};
  ComponentSpec spread{.kind = ComponentKind::kSpreading};
  ComponentSpec value{.kind = ComponentKind::kValuation,
                      .reward_mode = RewardMode::kMostPopular};
};

struct WeightFit {
  double b{};
  double s{};
  double v{};
  std::optional<double> intercept;
  double user_fraction{};
  std::size_t rows{};
  bool degenerate{false};  // singular design matrix, minimum-norm solution
};

// Regresses candidate relevance (1 if in the distinct session remainder,
// else 0) on the (B, S, V) activations over the queries of a seeded user
// sample. Negative weights are clamped to 0 when nonneg is set.
WeightFit fit_weights(const Corpus& corpus, const WeightFitOptions& opts = {});

// Least-squares core used by fit_weights, exposed for direct use on
// prebuilt design matrices (row-major, ncols per row).
std::vector<double> solve_least_squares(const std::vector<double>& rows, std::size_t ncols,
                                        const std::vector<double>& targets, bool* degenerate = nullptr);

}  // namespace actr
