#include "actr/sessionizer.hpp"

#include "actr/corpus.hpp"

namespace actr {

void sessionize(Corpus& corpus, int gap_minutes) {
  if (gap_minutes < 0) throw DataError("gap_minutes must be non-negative");
  const std::int64_t threshold = static_cast<std::int64_t>(gap_minutes) * 60;

  std::size_t total_sessions = 0;
  for (auto& stream : corpus.events) {
    std::int32_t session = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
      if (i > 0 && stream[i].timestamp - stream[i - 1].timestamp > threshold) ++session;
      stream[i].session = session;
    }
    if (!stream.empty()) total_sessions += static_cast<std::size_t>(session) + 1;
  }
  corpus.sessionized = true;
  corpus.stats.sessions = total_sessions;
}

SessionStats session_stats(const Corpus& corpus) {
  if (!corpus.sessionized) throw DataError("corpus is not sessionized");
  SessionStats stats;
  std::size_t total_events = 0;
  stats.per_user_sessions.reserve(corpus.num_users());
  for (const auto& stream : corpus.events) {
    std::size_t sessions = stream.empty() ? 0 : static_cast<std::size_t>(stream.back().session) + 1;
    stats.per_user_sessions.push_back(sessions);
    stats.total_sessions += sessions;
    total_events += stream.size();
  }
  stats.mean_events_per_session =
      stats.total_sessions == 0
          ? 0.0
          : static_cast<double>(total_events) / static_cast<double>(stats.total_sessions);
  return stats;
}

void write_sessions_tsv(const Corpus& corpus, const std::filesystem::path& path) {
  if (!corpus.sessionized) throw DataError("corpus is not sessionized");
  write_events_tsv(corpus, path, /*with_sessions=*/true);
}

}  // namespace actr
