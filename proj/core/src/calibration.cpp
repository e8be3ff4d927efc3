#include "actr/calibration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "actr/evaluator.hpp"
#include "actr/rng.hpp"

namespace actr {

GapHistogram relisten_gaps(const Corpus& corpus, std::optional<std::int64_t> max_hours) {
  GapHistogram hist;
  hist.max_hours = max_hours;

  // Epoch-stamped last-play table shared across users.
  std::vector<std::uint32_t> stamp(corpus.num_tracks(), 0);
  std::vector<std::int64_t> last(corpus.num_tracks(), 0);
  std::uint32_t epoch = 0;

  for (const auto& stream : corpus.events) {
    ++epoch;
    for (const Event& e : stream) {
      if (stamp[e.track] == epoch) {
        std::int64_t gap_hours_floor = (e.timestamp - last[e.track]) / 3600;
        std::int64_t bin = std::max<std::int64_t>(gap_hours_floor, 1);
        if (!max_hours || bin <= *max_hours) ++hist.bins[bin];
      }
      stamp[e.track] = epoch;
      last[e.track] = e.timestamp;
    }
  }
  return hist;
}

PowerLawFit fit_power_law(const GapHistogram& hist) {
  std::vector<double> xs, ys;
  for (const auto& [hours, count] : hist.bins) {
    if (count == 0) continue;
    xs.push_back(std::log10(static_cast<double>(hours)));
    ys.push_back(std::log10(static_cast<double>(count)));
  }
  if (xs.size() < 2) throw DataError("power-law fit needs at least two non-empty bins");

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw DataError("power-law fit is degenerate (all bins at one gap)");
  PowerLawFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  double mean_y = sy / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.r_squared = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

namespace {

std::vector<double> solve_normal_equations(const Eigen::MatrixXd& xtx, const Eigen::VectorXd& xty,
                                           bool* degenerate) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(xtx);
  if (degenerate) *degenerate = cod.rank() < xtx.cols();
  Eigen::VectorXd w = cod.solve(xty);
  return std::vector<double>(w.data(), w.data() + w.size());
}

}  // namespace

std::vector<double> solve_least_squares(const std::vector<double>& rows, std::size_t ncols,
                                        const std::vector<double>& targets, bool* degenerate) {
  if (ncols == 0 || rows.size() != targets.size() * ncols)
    throw DataError("least squares: inconsistent design matrix shape");
  auto k = static_cast<Eigen::Index>(ncols);
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(k);
  for (std::size_t r = 0; r < targets.size(); ++r) {
    Eigen::Map<const Eigen::VectorXd> x(rows.data() + r * ncols, k);
    xtx.noalias() += x * x.transpose();
    xty.noalias() += x * targets[r];
  }
  return solve_normal_equations(xtx, xty, degenerate);
}

WeightFit fit_weights(const Corpus& corpus, const WeightFitOptions& opts) {
  if (!corpus.sessionized) throw DataError("corpus must be sessionized before weight fitting");
  if (opts.user_fraction <= 0.0 || opts.user_fraction > 1.0)
    throw DataError("user_fraction must be in (0, 1]");
  const std::size_t n_users = corpus.num_users();
  if (n_users == 0) throw DataError("corpus has no users");

  // Sample by user name so the draw is invariant to load order.
  std::vector<UserId> users(n_users);
  for (UserId u = 0; u < n_users; ++u) users[u] = u;
  std::sort(users.begin(), users.end(),
            [&](UserId a, UserId b) { return corpus.user_names[a] < corpus.user_names[b]; });
  auto take = static_cast<std::size_t>(
      std::ceil(opts.user_fraction * static_cast<double>(n_users)));
  take = std::min(std::max<std::size_t>(take, 1), n_users);
  SplitMix64 rng(mix_seed(opts.seed, 0x7765696768747346ULL));
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + rng.next_below(users.size() - i);
    std::swap(users[i], users[j]);
  }
  users.resize(take);
  std::sort(users.begin(), users.end());

  const std::size_t k = opts.with_intercept ? 4 : 3;
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                              static_cast<Eigen::Index>(k));
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  std::size_t rows = 0;

  ComponentConfig val_cfg;
  val_cfg.alpha = opts.value.alpha;
  val_cfg.reward_mode = opts.value.reward_mode;

  for (UserId u : users) {
    for_each_query(corpus, u, opts.window_days, [&](const PredictionQuery& query) {
      auto b = base_level(query.window, opts.base.decay, opts.base.min_gap_hours);
      auto s = spreading(query.window);
      auto v = valuation(query.window, corpus, val_cfg);

      std::vector<TrackId> distinct;
      for (TrackId t : query.remainder)
        if (std::find(distinct.begin(), distinct.end(), t) == distinct.end())
          distinct.push_back(t);

      Eigen::VectorXd x(static_cast<Eigen::Index>(k));
      const auto& cands = query.window.candidates();
      for (std::size_t c = 0; c < cands.size(); ++c) {
        x(0) = b.scores[c];
        x(1) = s.scores[c];
        x(2) = v.scores[c];
        if (opts.with_intercept) x(3) = 1.0;
        double target =
            std::find(distinct.begin(), distinct.end(), cands[c]) != distinct.end() ? 1.0 : 0.0;
        xtx.noalias() += x * x.transpose();
        xty.noalias() += x * target;
        ++rows;
      }
    });
  }
  if (rows == 0) throw DataError("weight fit has no design rows (no queries in sample)");

  WeightFit fit;
  auto w = solve_normal_equations(xtx, xty, &fit.degenerate);
  fit.b = w[0];
  fit.s = w[1];
  fit.v = w[2];
  if (opts.with_intercept) fit.intercept = w[3];
  if (opts.nonneg) {
    fit.b = std::max(fit.b, 0.0);
    fit.s = std::max(fit.s, 0.0);
    fit.v = std::max(fit.v, 0.0);
  }
  fit.user_fraction = opts.user_fraction;
  fit.rows = rows;
  return fit;
}

}  // namespace actr
