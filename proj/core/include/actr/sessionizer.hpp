#pragma once

#include <filesystem>

#include "actr/types.hpp"

namespace actr {

// Assigns per-user session ids: a new session starts when the gap to the
// previous event exceeds gap_minutes (a gap exactly equal to the threshold
// stays in the same session). Ids start at 0 and increase with time.
void sessionize(Corpus& corpus, int gap_minutes = 30);

struct SessionStats {
  std::size_t total_sessions{0};
  double mean_events_per_session{0.0};
  std::vector<std::size_t> per_user_sessions;
};

SessionStats session_stats(const Corpus& corpus);

// Debug export: `user_id<TAB>track_id<TAB>timestamp<TAB>session_id`.
void write_sessions_tsv(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace actr
