#include <benchmark/benchmark.h>

#include "nctopos/digraph.hpp"
#include "nctopos/ncheyt.hpp"
#include "nctopos/sheaf.hpp"
#include "nctopos/topol.hpp"

using namespace nctopos;

namespace {

  std::shared_ptr<Classifier const> classifier(bool fuse) {
    static auto const site = digraph_site();
    static auto const f    = digraph_classifier(site, true);
    static auto const u    = digraph_classifier(site, false);
    return fuse ? f : u;
  }

}  // namespace

static void nclt_enumeration(benchmark::State& st) {
  auto const c = classifier(st.range(0) != 0);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_nc_lawvere(*c));
}
BENCHMARK(nclt_enumeration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void nclt_enumeration_raw(benchmark::State& st) {
  auto const c = classifier(st.range(0) != 0);
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_nc_lawvere_raw(*c));
}
BENCHMARK(nclt_enumeration_raw)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void sheaf_enumeration(benchmark::State& st) {
  auto const c   = classifier(true);
  auto const sys = CoverSystem::nc(c, derive_nc_grothendieck(*c, digraph_nc_topology(*c, "1000")));
  Bounds const b{{static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1))}};
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_sheaves(sys, b));
}
BENCHMARK(sheaf_enumeration)->Args({2, 4})->Args({3, 6})->Args({3, 9})->Unit(benchmark::kMillisecond);

static void presheaf_enumeration(benchmark::State& st) {
  auto const c = classifier(true);
  Bounds const b{{3, static_cast<std::size_t>(st.range(0))}};
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_presheaves(c->H.site(), c.get(), b));
}
BENCHMARK(presheaf_enumeration)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void nh_verification(benchmark::State& st) {
  auto const  c = classifier(st.range(0) != 0);
  auto const& h = c->H.at(c->H.site()->object("E"));
  for (auto _ : st) benchmark::DoNotOptimize(verify_nc_heyting(h));
  st.counters["elements"] = static_cast<double>(h.size());
}
BENCHMARK(nh_verification)->Arg(0)->Arg(1);

static void nh_completeness(benchmark::State& st) {
  auto const  c = classifier(st.range(0) != 0);
  auto const& h = c->H.at(c->H.site()->object("E"));
  for (auto _ : st) benchmark::DoNotOptimize(verify_completeness(h));
}
BENCHMARK(nh_completeness)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
