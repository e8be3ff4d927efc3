#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace actr {

using UserId = std::uint32_t;
using TrackId = std::uint32_t;

// Raised for unreadable or missing files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when input data violates a corpus invariant.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One listening event. session is -1 until the stream has been sessionized.
struct Event {
  TrackId track{};
  std::int64_t timestamp{};  // seconds since epoch
  std::int32_t session{-1};

  friend bool operator==(const Event&, const Event&) = default;
};

struct TrackMeta {
  std::int64_t duration_ms{0};  // 0 means unknown
  std::vector<float> features;  // empty means none

  bool has_duration() const { return duration_ms > 0; }
  bool has_features() const { return !features.empty(); }
};

struct CorpusStats {
  std::size_t users{0};
  std::size_t events{0};
  std::size_t tracks{0};
  std::size_t sessions{0};
  std::size_t malformed_rows{0};
};

// Immutable after loading; ids are dense indices into the name tables.
struct Corpus {
  std::vector<std::string> user_names;
  std::vector<std::string> track_names;
  std::unordered_map<std::string, UserId> user_index;
  std::unordered_map<std::string, TrackId> track_index;

  std::vector<std::vector<Event>> events;  // per user, time-ascending
  std::vector<TrackMeta> meta;             // per track
  std::size_t feature_dim{0};              // 0 until features are loaded

  CorpusStats stats;
  bool sessionized{false};

  UserId intern_user(const std::string& name) {
    auto [it, inserted] = user_index.try_emplace(name, static_cast<UserId>(user_names.size()));
    if (inserted) {
      user_names.push_back(name);
      events.emplace_back();
    }
    return it->second;
  }

  TrackId intern_track(const std::string& name) {
    auto [it, inserted] = track_index.try_emplace(name, static_cast<TrackId>(track_names.size()));
    if (inserted) {
      track_names.push_back(name);
      meta.emplace_back();
    }
    return it->second;
  }

  std::size_t num_users() const { return events.size(); }
  std::size_t num_tracks() const { return track_names.size(); }

  void refresh_stats() {
    stats.users = num_users();
    stats.tracks = num_tracks();
    stats.events = 0;
    for (const auto& stream : events) stats.events += stream.size();
  }
};

}  // namespace actr
