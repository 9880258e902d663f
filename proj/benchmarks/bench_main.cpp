#include "sdsi/sdsi.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace sdsi;

namespace {

std::vector<Digit> random_digits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-1, 1);
  std::vector<Digit> v(n);
  for (auto& x : v) x = static_cast<Digit>(d(rng));
  return v;
}

void BM_RowOperator(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_digits(n, 1), b = random_digits(n, 2);
  std::vector<LinearOnlineOperator::Input> in{{Rational(-1, 2), 0}, {Rational(3, 8), 0}};
  const Digit* ptrs[] = {a.data(), b.data()};
  std::vector<Digit> out;
  for (auto _ : state) {
    LinearOnlineOperator op(DigitSet(2), 5, in, Rational(1, 3), 1);
    out.clear();
    op.generate(ptrs, n, n, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n));
}
BENCHMARK(BM_RowOperator)->Arg(64)->Arg(256)->Arg(1024);

void BM_OnlineMul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = random_digits(n, 3), b = random_digits(n, 4);
  for (auto _ : state) {
    auto op = OnlineOperator::mul(DigitSet(2), -1, -1);
    for (std::size_t i = 0; i < n; ++i) {
      Digit in[2] = {a[i], b[i]};
      benchmark::DoNotOptimize(op.pull_digit(in));
    }
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n));
}
BENCHMARK(BM_OnlineMul)->Arg(64)->Arg(256);

void BM_Solve(benchmark::State& state) {
  auto [A, b] = gen_system("1", 1);
  auto spec = build_jacobi(A, b);
  Rational eta = pow_r(2, -state.range(0));
  SolverConfig cfg;
  cfg.mode = static_cast<ElisionMode>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec, eta, cfg).trace.work.digits_computed);
}
BENCHMARK(BM_Solve)->ArgsProduct({{32, 128, 256}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_Detect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto base = random_digits(n, 5);
  auto other = base;
  other[n - 1] = static_cast<Digit>(-other[n - 1] + (other[n - 1] == 0));
  std::vector<SDNumber> p{SDNumber(DigitSet(2), 1, base), SDNumber(DigitSet(2), 1, base)};
  std::vector<SDNumber> c{SDNumber(DigitSet(2), 1, base), SDNumber(DigitSet(2), 1, other)};
  for (auto _ : state) benchmark::DoNotOptimize(detect(p, c));
}
BENCHMARK(BM_Detect)->Arg(256)->Arg(4096);

void BM_Recode(benchmark::State& state) {
  Rational v(Integer(123456789), Integer(1) << 40);
  DigitSet ds(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(recode(v, ds, 1, 64));
}
BENCHMARK(BM_Recode)->Arg(2)->Arg(10);

void BM_LsdBaseline(benchmark::State& state) {
  auto [A, b] = gen_system("1", 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(lsd_solve(A, b, pow_r(2, -20), static_cast<int>(state.range(0))).iterations);
}
BENCHMARK(BM_LsdBaseline)->Arg(32)->Arg(62);

}  // namespace
BENCHMARK_MAIN();
