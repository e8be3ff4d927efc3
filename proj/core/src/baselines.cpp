#include "actr/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace actr {

ActivationVector trans_prob(const EventWindow& window) {
  if (window.empty()) throw DataError("trans_prob over an empty window");
  auto events = window.events();
  const TrackId ref = events.back().track;

  std::vector<double> counts(window.candidates().size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    if (events[i].track != ref) continue;
    if (events[i].session != events[i + 1].session) continue;
    counts[static_cast<std::size_t>(window.candidate_of(events[i + 1].track))] += 1.0;
    total += 1.0;
  }
  if (total > 0.0) {
    for (double& c : counts) c /= total;
  }
  return softmax(std::move(counts), "trans_prob");
}

ActivationVector most_recent(const EventWindow& window) {
  if (window.empty()) throw DataError("most_recent over an empty window");
  std::vector<std::int64_t> last(window.candidates().size(), 0);
  for (const Event& e : window.events())
    last[static_cast<std::size_t>(window.candidate_of(e.track))] = e.timestamp;

  // Raw score = -(recency rank), so the newest candidate gets 0.
  std::vector<std::uint32_t> order(last.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return last[a] > last[b]; });
  std::vector<double> raw(last.size());
  for (std::size_t r = 0; r < order.size(); ++r) raw[order[r]] = -static_cast<double>(r);
  return softmax(std::move(raw), "most_recent");
}

std::vector<TrackId> most_recent_order(const EventWindow& window) {
  auto scores = most_recent(window);
  auto order = rank(window, scores.scores);
  std::vector<TrackId> tracks;
  tracks.reserve(order.size());
  for (std::uint32_t c : order) tracks.push_back(window.candidates()[c]);
  return tracks;
}

}  // namespace actr
