#include <benchmark/benchmark.h>

#include <random>

#include "edl/classfn.hpp"
#include "edl/orbits.hpp"
#include "edl/varieties.hpp"

using namespace edl;

namespace {

Group sl2(unsigned p, int r, unsigned m = 1) { return Group(GroupKind::SL, Ring::make(Field::make(p, 1, m), r), 2); }

void BM_FieldMul(benchmark::State& st) {
  auto F = Field::make(3, 1, static_cast<unsigned>(st.range(0)));
  std::mt19937_64 rng(1);
  std::vector<Elem> xs(1024);
  for (auto& x : xs) x = static_cast<Elem>(rng() % F->order());
  Elem acc = 1;
  for (auto _ : st) {
    for (Elem x : xs) acc = F->add(F->mul(acc, x), 1);
    benchmark::DoNotOptimize(acc);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(xs.size()));
}
BENCHMARK(BM_FieldMul)->Arg(1)->Arg(4)->Arg(12);

void BM_Enumerate(benchmark::State& st) {
  auto G = sl2(static_cast<unsigned>(st.range(0)), static_cast<int>(st.range(1)));
  for (auto _ : st) {
    std::uint64_t n = 0;
    G.enumerate([&](const Mat&) { ++n; });
    benchmark::DoNotOptimize(n);
  }
  st.counters["order"] = static_cast<double>(G.order());
}
BENCHMARK(BM_Enumerate)->Args({3, 2})->Args({5, 2})->Args({3, 3})->Unit(benchmark::kMillisecond);

void BM_ClassTable(benchmark::State& st) {
  auto G = sl2(static_cast<unsigned>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(ClassTable::build(G));
}
BENCHMARK(BM_ClassTable)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_CharacterTable(benchmark::State& st) {
  auto t = ClassTable::build(sl2(static_cast<unsigned>(st.range(0)), 2));
  for (auto _ : st) benchmark::DoNotOptimize(character_table(t));
}
BENCHMARK(BM_CharacterTable)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Orbits(benchmark::State& st) {
  auto G = sl2(static_cast<unsigned>(st.range(0)), 2);
  for (auto _ : st) benchmark::DoNotOptimize(classify_orbits(G, LieMode::TraceZero));
}
BENCHMARK(BM_Orbits)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_CosetCanonical(benchmark::State& st) {
  auto G = sl2(3, 2);
  auto shape = st.range(0) ? Shape::U : Shape::B;
  CosetCanonicalizer canon(G, Subgroup::pattern(shape));
  auto elems = G.elements();
  std::size_t i = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(canon.key(elems[i]));
    i = (i + 7919) % elems.size();
  }
}
BENCHMARK(BM_CosetCanonical)->Arg(0)->Arg(1);

void BM_TwistedCount(benchmark::State& st) {
  auto G = sl2(3, 2);
  auto V = build_classical(G, G.weyl(), ClassicalFlavor::X);
  auto t = ClassTable::build(G);
  CountOptions opt;
  opt.threads = static_cast<unsigned>(st.range(1));
  const Mat& g = (*t)[t->size() - 1].rep;
  for (auto _ : st) benchmark::DoNotOptimize(twisted_count(V, g, static_cast<unsigned>(st.range(0)), opt));
}
BENCHMARK(BM_TwistedCount)->Args({1, 1})->Args({2, 1})->Args({2, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
