#include <benchmark/benchmark.h>

#include "actr/activation.hpp"
#include "actr/baselines.hpp"
#include "actr/evaluator.hpp"
#include "actr/sessionizer.hpp"
#include "actr/synthgen.hpp"

using namespace actr;

namespace {

Corpus bench_corpus(std::size_t users, std::size_t events) {
  auto spec = SynthSpec{.num_users = users, .events_per_user = events,
                        .catalog_size = 5000, .gap_exponent = 0.86, .seed = 1};
  auto corpus = generate(spec);
  sessionize(corpus);
  return corpus;
}

// A representative week-long window from the back half of a user's stream.
EventWindow sample_window(const Corpus& corpus) {
  const auto& stream = corpus.events[0];
  std::size_t pos = stream.size() * 3 / 4;
  std::int64_t t_ref = stream[pos].timestamp;
  std::size_t lo = 0;
  while (stream[lo].timestamp < t_ref - 7 * 86400) ++lo;
  return EventWindow::over(0, {stream.data() + lo, pos - lo + 1}, t_ref);
}

void bm_base_level(benchmark::State& state) {
  auto corpus = bench_corpus(1, 5000);
  auto w = sample_window(corpus);
  for (auto _ : state) benchmark::DoNotOptimize(base_level(w, 0.5));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(w.events().size()));
}
BENCHMARK(bm_base_level);

void bm_spreading(benchmark::State& state) {
  auto corpus = bench_corpus(1, 5000);
  auto w = sample_window(corpus);
  for (auto _ : state) benchmark::DoNotOptimize(spreading(w));
}
BENCHMARK(bm_spreading);

void bm_trans_prob(benchmark::State& state) {
  auto corpus = bench_corpus(1, 5000);
  auto w = sample_window(corpus);
  for (auto _ : state) benchmark::DoNotOptimize(trans_prob(w));
}
BENCHMARK(bm_trans_prob);

void bm_sessionize(benchmark::State& state) {
  auto spec = SynthSpec{.num_users = 10, .events_per_user = 5000, .catalog_size = 5000, .seed = 2};
  auto corpus = generate(spec);
  for (auto _ : state) {
    sessionize(corpus);
    benchmark::DoNotOptimize(corpus.stats.sessions);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(corpus.stats.events));
}
BENCHMARK(bm_sessionize);

void bm_evaluate_full_roster(benchmark::State& state) {
  auto corpus = bench_corpus(static_cast<std::size_t>(state.range(0)), 2000);
  auto roster = default_roster();
  std::uint64_t queries = 0;
  for (auto _ : state) {
    auto report = evaluate(corpus, roster, {.seed = 1});
    queries = report.num_queries;
    benchmark::DoNotOptimize(report);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(queries));
}
BENCHMARK(bm_evaluate_full_roster)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
