#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "actr/corpus.hpp"
#include "actr/sessionizer.hpp"

namespace testutil {

inline std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("actr_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& path,
                                        const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

using Row = std::tuple<std::string, std::string, std::int64_t>;

inline actr::Corpus make_corpus(const std::vector<Row>& rows, int gap_minutes = 30) {
  actr::Corpus corpus;
  for (const auto& [user, track, ts] : rows) {
    actr::UserId u = corpus.intern_user(user);
    actr::TrackId t = corpus.intern_track(track);
    corpus.events[u].push_back(actr::Event{t, ts, -1});
  }
  for (auto& stream : corpus.events)
    std::stable_sort(stream.begin(), stream.end(),
                     [](const actr::Event& a, const actr::Event& b) {
                       return a.timestamp < b.timestamp;
                     });
  corpus.refresh_stats();
  actr::sessionize(corpus, gap_minutes);
  return corpus;
}

}  // namespace testutil
