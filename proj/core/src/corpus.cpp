#include "actr/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <string_view>

#include "actr/rng.hpp"

namespace actr {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

Corpus load_events(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open event file: " + path.string());

  Corpus corpus;
  std::string line;
  bool first_row = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    auto fail = [&](const char* why) {
      if (opts.strict)
        throw DataError("malformed event row " + std::to_string(line_no) + ": " + why);
      ++corpus.stats.malformed_rows;
    };
    if (fields.size() != 3) {
      fail("expected 3 tab-separated fields");
      first_row = false;
      continue;
    }
    auto ts = parse_int(fields[2]);
    if (!ts) {
      if (first_row) {
        first_row = false;  // header row
        continue;
      }
      fail("non-numeric timestamp");
      continue;
    }
    first_row = false;
    if (*ts < 0 || fields[0].empty() || fields[1].empty()) {
      fail("negative timestamp or empty id");
      continue;
    }
    UserId u = corpus.intern_user(std::string(fields[0]));
    TrackId t = corpus.intern_track(std::string(fields[1]));
    corpus.events[u].push_back(Event{t, *ts, -1});
  }

  for (auto& stream : corpus.events) {
    std::stable_sort(stream.begin(), stream.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  }
  corpus.refresh_stats();
  return corpus;
}

void load_meta(const std::filesystem::path& path, Corpus& corpus, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metadata file: " + path.string());

  std::string line;
  bool first_row = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    auto fail = [&](const char* why) {
      if (opts.strict)
        throw DataError("malformed meta row " + std::to_string(line_no) + ": " + why);
      ++corpus.stats.malformed_rows;
    };
    if (fields.size() < 2 || fields[0].empty()) {
      fail("expected at least track_id and duration fields");
      first_row = false;
      continue;
    }

    TrackMeta meta;
    if (!fields[1].empty()) {
      auto duration = parse_int(fields[1]);
      if (!duration) {
        if (first_row) {
          first_row = false;  // header row
          continue;
        }
        fail("non-numeric duration");
        continue;
      }
      if (*duration <= 0) {
        fail("duration must be positive");
        first_row = false;
        continue;
      }
      meta.duration_ms = *duration;
    }
    first_row = false;

    bool bad_feature = false;
    for (std::size_t i = 2; i < fields.size(); ++i) {
      if (fields[i].empty() && fields.size() == 3) break;  // no features, trailing empty
      auto f = parse_double(fields[i]);
      if (!f) {
        fail("non-numeric feature value");
        bad_feature = true;
        break;
      }
      meta.features.push_back(static_cast<float>(*f));
    }
    if (bad_feature) continue;

    if (!meta.features.empty()) {
      if (corpus.feature_dim == 0) {
        corpus.feature_dim = meta.features.size();
      } else if (meta.features.size() != corpus.feature_dim) {
        throw DataError("inconsistent feature vector length at row " + std::to_string(line_no) +
                        ": got " + std::to_string(meta.features.size()) + ", expected " +
                        std::to_string(corpus.feature_dim));
      }
    }

    TrackId t = corpus.intern_track(std::string(fields[0]));
    corpus.meta[t] = std::move(meta);
  }
  corpus.refresh_stats();
}

SamplingResult stratified_sample(const Corpus& corpus, const SamplingSpec& spec) {
  if (spec.min_events >= spec.max_events)
    throw DataError("sampling spec requires min_events < max_events");
  if (spec.num_bins < 1) throw DataError("sampling spec requires num_bins >= 1");

  struct Entry {
    UserId user;
    std::size_t count;
  };
  std::vector<Entry> eligible;
  for (UserId u = 0; u < corpus.num_users(); ++u) {
    std::size_t n = corpus.events[u].size();
    if (n >= spec.min_events && n <= spec.max_events) eligible.push_back({u, n});
  }
  // Order by count, ties by user name, so the result does not depend on
  // input row order.
  std::sort(eligible.begin(), eligible.end(), [&](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count < b.count;
    return corpus.user_names[a.user] < corpus.user_names[b.user];
  });

  SamplingResult result;
  std::vector<UserId> chosen;
  std::size_t n = eligible.size();
  std::size_t bins = std::min<std::size_t>(spec.num_bins, std::max<std::size_t>(n, 1));
  std::size_t base = n / bins;
  std::size_t remainder = n % bins;
  SplitMix64 rng(mix_seed(spec.seed, 0x737472617453616dULL));

  std::size_t offset = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    std::size_t size = base + (b < remainder ? 1 : 0);
    std::vector<UserId> bin;
    for (std::size_t i = 0; i < size; ++i) bin.push_back(eligible[offset + i].user);
    offset += size;

    std::size_t take = spec.users_per_stratum;
    if (bin.size() < take) {
      result.warnings.push_back("bin " + std::to_string(b) + " has only " +
                                std::to_string(bin.size()) + " users (requested " +
                                std::to_string(take) + "); taking all");
      take = bin.size();
    }
    // Partial Fisher-Yates draw without replacement.
    for (std::size_t i = 0; i < take; ++i) {
      std::size_t j = i + rng.next_below(bin.size() - i);
      std::swap(bin[i], bin[j]);
      chosen.push_back(bin[i]);
    }
  }
  std::sort(chosen.begin(), chosen.end(), [&](UserId a, UserId b) {
    return corpus.user_names[a] < corpus.user_names[b];
  });

  Corpus& out = result.corpus;
  out.feature_dim = corpus.feature_dim;
  out.sessionized = corpus.sessionized;
  for (UserId u : chosen) {
    UserId nu = out.intern_user(corpus.user_names[u]);
    auto& stream = out.events[nu];
    stream.reserve(corpus.events[u].size());
    for (const Event& e : corpus.events[u]) {
      TrackId nt = out.intern_track(corpus.track_names[e.track]);
      out.meta[nt] = corpus.meta[e.track];
      stream.push_back(Event{nt, e.timestamp, e.session});
    }
  }
  out.refresh_stats();
  out.stats.sessions = 0;
  if (out.sessionized) {
    for (const auto& stream : out.events)
      if (!stream.empty()) out.stats.sessions += static_cast<std::size_t>(stream.back().session) + 1;
  }
  return result;
}

void write_events_tsv(const Corpus& corpus, const std::filesystem::path& path,
                      bool with_sessions) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write event file: " + path.string());
  for (UserId u = 0; u < corpus.num_users(); ++u) {
    for (const Event& e : corpus.events[u]) {
      out << corpus.user_names[u] << '\t' << corpus.track_names[e.track] << '\t' << e.timestamp;
      if (with_sessions) out << '\t' << e.session;
      out << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace actr
