#pragma once

#include <span>

#include "actr/types.hpp"

namespace actr {

// Snapshot of one user's recent events at prediction time. The candidate set
// is the distinct tracks of the window in order of first appearance, backed
// by a small open-addressed table for track -> candidate-index lookups.
class EventWindow {
 public:
  EventWindow() = default;

  static EventWindow over(UserId user, std::span<const Event> events, std::int64_t t_ref) {
    EventWindow w;
    w.assign(user, events, t_ref);
    return w;
  }

  // Rebuild in place, reusing buffers.
  void assign(UserId user, std::span<const Event> events, std::int64_t t_ref);

  UserId user() const { return user_; }
  std::span<const Event> events() const { return events_; }
  std::int64_t t_ref() const { return t_ref_; }
  const std::vector<TrackId>& candidates() const { return candidates_; }
  bool empty() const { return events_.empty(); }

  // -1 when the track does not occur in the window.
  std::int32_t candidate_of(TrackId track) const {
    if (candidates_.empty()) return -1;
    std::uint32_t h = hash(track) & mask_;
    while (table_[h] != 0) {
      std::uint32_t idx = table_[h] - 1;
      if (candidates_[idx] == track) return static_cast<std::int32_t>(idx);
      h = (h + 1) & mask_;
    }
    return -1;
  }

 private:
  static std::uint32_t hash(TrackId t) {
    std::uint32_t x = t * 0x9e3779b9u;
    return x ^ (x >> 16);
  }

  UserId user_{};
  std::span<const Event> events_;
  std::int64_t t_ref_{};
  std::vector<TrackId> candidates_;
  std::vector<std::uint32_t> table_;  // candidate index + 1, 0 = empty
  std::uint32_t mask_{0};
};

}  // namespace actr
