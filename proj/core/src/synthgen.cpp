#include "actr/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "actr/rng.hpp"

namespace actr {
namespace {

constexpr std::int64_t kBaseTimestamp = 1546300800;  // 2019-01-01
constexpr std::int64_t kMaxGapHours = 168;
constexpr double kReplayContinueProb = 0.9;
// Session breaks follow a truncated power law (exponent 1.2) over
// [1801s, 160x that): mostly short pauses with a heavy tail of overnights
// and multi-day absences, so relisten targets at every gap scale stay
// realizable.
constexpr double kBreakTailFactor = 0.63765;  // 1 - 160^(1 - 1.2)
inline std::int64_t sample_break(SplitMix64& rng) {
  double x = 1.0 - rng.next_double() * kBreakTailFactor;
  return static_cast<std::int64_t>(1801.0 * std::pow(x, -5.0));
}

std::vector<double> gap_cdf(double exponent) {
  std::vector<double> cdf(static_cast<std::size_t>(kMaxGapHours));
  double sum = 0.0;
  for (std::int64_t h = 1; h <= kMaxGapHours; ++h) {
    sum += std::pow(static_cast<double>(h), -exponent);
    cdf[static_cast<std::size_t>(h - 1)] = sum;
  }
  for (double& c : cdf) c /= sum;
  return cdf;
}

std::int64_t sample_gap_hours(const std::vector<double>& cdf, SplitMix64& rng) {
  double u = rng.next_double();
  auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::int64_t>(it - cdf.begin()) + 1;
}

}  // namespace

Corpus generate(const SynthSpec& spec) {
  if (spec.num_users == 0 || spec.events_per_user == 0 || spec.catalog_size == 0)
    throw DataError("synth spec counts must be positive");
  if (spec.relisten_prob < 0.0 || spec.relisten_prob > 1.0)
    throw DataError("relisten_prob must be in [0, 1]");
  if (spec.session_length_mean < 1.0) throw DataError("session_length_mean must be >= 1");

  Corpus corpus;
  const auto cdf = gap_cdf(spec.gap_exponent);
  const double new_session_prob = 1.0 / spec.session_length_mean;

  // Pre-intern the catalog so track ids are stable across users.
  std::vector<TrackId> catalog(spec.catalog_size);
  for (std::size_t i = 0; i < spec.catalog_size; ++i)
    catalog[i] = corpus.intern_track("t" + std::to_string(i));

  std::vector<std::uint32_t> seen_stamp(spec.catalog_size, 0);
  std::uint32_t epoch = 0;

  for (std::size_t u = 0; u < spec.num_users; ++u) {
    UserId user = corpus.intern_user("u" + std::to_string(u));
    auto& stream = corpus.events[user];
    stream.reserve(spec.events_per_user);
    SplitMix64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(u) + 0x73796e7468ULL));

    ++epoch;
    std::size_t seen_count = 0;
    std::int64_t t = kBaseTimestamp;
    std::size_t replay_source = 0;  // index of the next history event to replay
    std::int64_t replay_prev_ts = 0;  // old timestamp of the last replayed event
    bool replay_active = false;
    std::int64_t session_start = t;
    std::int64_t session_gap = 0;  // this session's replay offset, 0 = unset

    // Tracks keyed by the timestamp of their most recent play (timestamps
    // are strictly increasing, so keys are unique), plus each track's most
    // recent stream index so replay runs can follow its old successors.
    std::map<std::int64_t, TrackId> by_last_play;
    std::unordered_map<TrackId, std::size_t> last_index;
    std::unordered_map<TrackId, std::int64_t> last_time;
    std::unordered_map<TrackId, std::uint32_t> play_count;

    auto record_play = [&](TrackId track, std::int64_t ts, std::size_t index) {
      auto it = last_time.find(track);
      if (it != last_time.end()) by_last_play.erase(it->second);
      by_last_play.emplace(ts, track);
      last_time[track] = ts;
      last_index[track] = index;
      ++play_count[track];
    };

    for (std::size_t i = 0; i < spec.events_per_user; ++i) {
      if (i > 0) {
        if (rng.next_double() < new_session_prob) {
          // A new session always starts a fresh replay run so old runs
          // cannot smear their gaps across the break.
          t += sample_break(rng);
          replay_active = false;
          session_start = t;
          session_gap = 0;
        } else {
          t += 90 + static_cast<std::int64_t>(rng.next_below(240));
        }
      }

      bool relisten = !stream.empty() && (rng.next_double() < spec.relisten_prob ||
                                          seen_count == spec.catalog_size);
      TrackId track;
      if (relisten) {
        bool continued = false;
        if (replay_active && rng.next_double() < kReplayContinueProb) {
          // Follow the old session forward, but only through tracks that
          // have not been played again since: those would distort the gap
          // distribution the run start established.
          while (replay_source < stream.size()) {
            TrackId cand = stream[replay_source].track;
            if (last_index[cand] == replay_source) break;
            ++replay_source;
          }
          // Stop the run where the old stream had a session break: jumping
          // across it would shrink the realized gap by the old break length.
          if (replay_source < stream.size() &&
              stream[replay_source].timestamp - replay_prev_ts <= 1800) {
            track = stream[replay_source].track;
            replay_prev_ts = stream[replay_source].timestamp;
            continued = true;
          }
        }
        if (!continued) {
          // Start a replay run near a power-law distributed time offset.
          // The offset is sampled once per session and then advances with
          // the clock, so a session mostly revisits one region of history
          // (listeners return to "what I was listening to the other day",
          // not to independent random moments).
          std::int64_t gap = session_gap > 0 ? session_gap : sample_gap_hours(cdf, rng) * 3600;
          // An offset that predates the user's whole history has no
          // legitimate realization (snapping it to the oldest play would
          // systematically shrink early-stream gaps and steepen the fitted
          // law); resample it against the recorded span.
          for (int attempt = 0; attempt < 3 && t - gap < by_last_play.begin()->first; ++attempt)
            gap = sample_gap_hours(cdf, rng) * 3600;
          session_gap = gap;
          std::int64_t target = t - gap;
          // Current-session tracks are eligible only when the sampled
          // offset itself lands inside the current session; otherwise
          // offsets that land in a void between sessions would snap into
          // the dense current session and pile the gap histogram into its
          // first bin. The first session has no prior history, so
          // everything stays eligible there.
          std::int64_t limit = target >= session_start ||
                                       by_last_play.begin()->first >= session_start
                                   ? std::numeric_limits<std::int64_t>::max()
                                   : session_start - 1;
          // The neighborhood scales with the gap (roughly symmetric in log
          // space) so the smear does not tilt the fitted slope. Within it
          // the pick is weighted by squared play count (rich get richer),
          // so popular tracks recur more.
          std::int64_t radius = gap / 4;
          auto lo = by_last_play.lower_bound(target - radius);
          auto hi = by_last_play.upper_bound(std::min(target + radius, limit));
          if (lo == hi || lo->first > std::min(target + radius, limit)) {
            // The offset landed in a void between sessions; take the
            // eligible entry nearest to the target.
            auto above = by_last_play.upper_bound(std::min(target, limit));
            if (above == by_last_play.begin()) {
              track = above->second;
            } else {
              auto below = std::prev(above);
              if (above != by_last_play.end() && above->first <= limit &&
                  above->first - target < target - below->first)
                track = above->second;
              else
                track = below->second;
            }
          } else {
            double total = 0.0;
            for (auto it = lo; it != hi; ++it) {
              double count = static_cast<double>(play_count[it->second]);
              double weight = count * count;
              total += weight;
              if (rng.next_double() * total < weight) track = it->second;
            }
          }
          // Rewind to the start of the old session containing the pick and
          // replay from its first track not played since: a session then
          // replays one coherent old session instead of a mosaic of blocks,
          // which is what gives session co-occurrence its predictive power.
          replay_source = last_index[track];
          while (replay_source > 0 &&
                 stream[replay_source].timestamp - stream[replay_source - 1].timestamp <= 1800)
            --replay_source;
          std::size_t rs = replay_source;
          while (rs < stream.size() && last_index[stream[rs].track] != rs) ++rs;
          if (rs < stream.size() && stream[rs].timestamp <= limit) {
            track = stream[rs].track;
            replay_source = rs;
            replay_prev_ts = stream[rs].timestamp;
          } else {
            replay_source = last_index[track];
            replay_prev_ts = last_time[track];
          }
          replay_active = true;
        }
        replay_source = last_index[track] + 1;
      } else {
        replay_active = false;
        std::size_t pick;
        for (int attempt = 0;; ++attempt) {
          pick = rng.next_below(spec.catalog_size);
          if (seen_stamp[pick] != epoch) break;
          if (attempt >= 64) {  // dense catalog, scan for a free slot
            while (seen_stamp[pick] == epoch) pick = (pick + 1) % spec.catalog_size;
            break;
          }
        }
        seen_stamp[pick] = epoch;
        ++seen_count;
        track = catalog[pick];
      }
      record_play(track, t, stream.size());
      stream.push_back(Event{track, t, -1});
    }
  }
  corpus.refresh_stats();
  return corpus;
}

}  // namespace actr
