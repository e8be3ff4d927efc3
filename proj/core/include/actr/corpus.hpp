#pragma once

#include <filesystem>
#include <optional>

#include "actr/types.hpp"

namespace actr {

struct LoadOptions {
  bool strict = false;  // malformed rows abort instead of being skipped
};

// Event file: `user_id<TAB>track_id<TAB>timestamp_seconds`. An optional
// header row is detected by a non-numeric timestamp field.
Corpus load_events(const std::filesystem::path& path, const LoadOptions& opts = {});

// Metadata file: `track_id<TAB>duration_ms<TAB>f_1<TAB>...<TAB>f_m`, empty
// fields allowed for missing duration/features. Tracks absent from the file
// keep an empty meta entry. Inconsistent feature lengths are fatal.
void load_meta(const std::filesystem::path& path, Corpus& corpus, const LoadOptions& opts = {});

struct SamplingSpec {
  std::size_t min_events = 1000;
  std::size_t max_events = 30000;
  std::size_t num_bins = 10;
  std::size_t users_per_stratum = 15;
  std::uint64_t seed = 0;
};

struct SamplingResult {
  Corpus corpus;
  std::vector<std::string> warnings;  // bins smaller than users_per_stratum
};

// Drops users outside [min_events, max_events], splits the rest into
// num_bins rank-quantile bins by event count (remainder to the lowest bins)
// and draws users_per_stratum users per bin without replacement.
SamplingResult stratified_sample(const Corpus& corpus, const SamplingSpec& spec);

void write_events_tsv(const Corpus& corpus, const std::filesystem::path& path,
                      bool with_sessions = false);

}  // namespace actr
