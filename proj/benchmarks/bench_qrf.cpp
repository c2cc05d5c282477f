#include "qrf/cli.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace qrf;

namespace {

struct Built {
  Scenario s;
  PhysicalSpace ps;
};

Built build(const std::string& name) {
  Built b;
  b.s = build_scenario(load_config(name));
  b.ps = physical_space(b.s);
  return b;
}

void bm_finite_twirl(benchmark::State& st) {
  Built b = build("finite-regular:S3");
  std::mt19937_64 rng(1);
  CMatrix x = random_hermitian(b.s.kin_dim(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(group_average(b.s.total_rep(), x, AverageMode::twirl));
}
BENCHMARK(bm_finite_twirl)->Unit(benchmark::kMillisecond);

void bm_lie_twirl(benchmark::State& st) {
  Built b = build("su2-four-spin1");
  std::mt19937_64 rng(2);
  CMatrix x = random_hermitian(b.s.kin_dim(), rng);
  for (auto _ : st) benchmark::DoNotOptimize(group_average(b.s.total_rep(), x, AverageMode::twirl));
}
BENCHMARK(bm_lie_twirl)->Unit(benchmark::kMillisecond);

void bm_physical_space(benchmark::State& st, const std::string& name) {
  Built b = build(name);
  for (auto _ : st) benchmark::DoNotOptimize(physical_space(b.s));
}
BENCHMARK_CAPTURE(bm_physical_space, u1, std::string("u1-qubit-qubit-qutrit"));
BENCHMARK_CAPTURE(bm_physical_space, four_spin, std::string("su2-four-spin1"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_physical_space, regular_d4, std::string("finite-regular:D4"))->Unit(benchmark::kMillisecond);

void bm_decompose(benchmark::State& st) {
  UnitaryRep s1 = rep_spin(1.0);
  UnitaryRep r = tensor({s1, s1, s1, s1});
  for (auto _ : st) benchmark::DoNotOptimize(isotypic_decompose(r));
}
BENCHMARK(bm_decompose)->Unit(benchmark::kMillisecond);

void bm_relational_observable(benchmark::State& st) {
  Built b = build("finite-regular:D4");
  std::mt19937_64 rng(3);
  CMatrix f = random_hermitian(b.s.system_dim(0), rng);
  for (auto _ : st) benchmark::DoNotOptimize(relational_observable(b.s, 0, GroupElement::finite(3), f));
}
BENCHMARK(bm_relational_observable)->Unit(benchmark::kMillisecond);

void bm_frame_change(benchmark::State& st) {
  Built b = build("finite-regular:S3");
  for (auto _ : st)
    benchmark::DoNotOptimize(frame_change(b.s, b.ps, 0, GroupElement::finite(1), 1, GroupElement::finite(4)));
}
BENCHMARK(bm_frame_change)->Unit(benchmark::kMillisecond);

void bm_reduce(benchmark::State& st) {
  Built b = build("su2-four-spin1");
  std::mt19937_64 rng(4);
  CVector psi = b.ps.space.basis * random_state(b.ps.dim(), rng);
  GroupElement g = GroupElement::su2(0.3, -0.2, 0.7);
  for (auto _ : st) benchmark::DoNotOptimize(schrodinger_reduce(b.s, b.ps, 0, g, psi));
}
BENCHMARK(bm_reduce);

}  // namespace

BENCHMARK_MAIN();
