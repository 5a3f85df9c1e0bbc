// Serial against OpenMP versions of the candidate-ratio and cancellation
// kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "cvn/fixtures.hpp"
#include "cvn/plmap.hpp"
#include "cvn/stretch.hpp"

namespace {

namespace fx = cvn::fixtures;

// Volume-one rose with `n` petals and a marking twisted by powers of the
// exponential automorphism on the first two generators.
cvn::MarkedMetricGraph petals(int n, int k) { return fx::thin_rose(n, k); }

cvn::MarkedMetricGraph twisted(int n) {
  auto phi = cvn::AutomorphismPair::identity(n);
  const auto e = fx::exponential_phi().power(3);
  for (int i = 0; i < 2; ++i) {
    phi.forward[i] = cvn::free_reduce(e.forward[i].letters(), n);
    phi.inverse[i] = cvn::free_reduce(e.inverse[i].letters(), n);
  }
  return cvn::apply_automorphism_to_marking(petals(n, 2), phi);
}

void candidate_args(benchmark::internal::Benchmark* b) {
  for (int n : {4, 6, 8}) b->Arg(n);
}

void BM_CandidateRatiosSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto a = petals(n, 3);
  auto b = twisted(n);
  auto cs = cvn::enumerate_candidates(a);
  for (auto _ : state) benchmark::DoNotOptimize(cvn::candidate_ratios_serial(a, cs, b));
  state.counters["candidates"] = static_cast<double>(cs.size());
}
BENCHMARK(BM_CandidateRatiosSerial)->Apply(candidate_args)->Unit(benchmark::kMillisecond);

void BM_CandidateRatiosParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto a = petals(n, 3);
  auto b = twisted(n);
  auto cs = cvn::enumerate_candidates(a);
  for (auto _ : state) benchmark::DoNotOptimize(cvn::candidate_ratios(a, cs, b));
  state.counters["candidates"] = static_cast<double>(cs.size());
}
BENCHMARK(BM_CandidateRatiosParallel)->Apply(candidate_args)->Unit(benchmark::kMillisecond);

void bcc(benchmark::State& state, bool parallel) {
  auto f = cvn::optimize_pl_map(fx::rose2(1, 1), cvn::apply_automorphism_to_marking(fx::rose2(1, 1),
                                                                                     fx::exponential_phi().power(2)))
               .map;
  cvn::CancellationOptions o;
  o.max_pairs = static_cast<std::size_t>(state.range(0));
  o.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(cvn::bounded_cancellation_bound(f, o));
}

void BM_CancellationSerial(benchmark::State& state) { bcc(state, false); }
void BM_CancellationParallel(benchmark::State& state) { bcc(state, true); }
BENCHMARK(BM_CancellationSerial)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CancellationParallel)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
