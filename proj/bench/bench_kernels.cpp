// Parallel kernels against their serial reference versions on synthetic data.
#include <benchmark/benchmark.h>

#include <map>

#include "erblock/blocking.hpp"
#include "erblock/learner.hpp"
#include "erblock/matcher.hpp"
#include "erblock/reference.hpp"
#include "erblock/synthetic.hpp"

namespace {

using namespace erblock;

const Generated& data(std::size_t n) {
  static std::map<std::size_t, Generated> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    GenSpec spec;
    spec.n_left = n;
    spec.n_right = n;
    spec.n_dups = n / 3;
    spec.seed = 7;
    it = cache.emplace(n, generate(spec)).first;
  }
  return it->second;
}

BlockingScheme sample_scheme() {
  BlockingScheme s;
  s.terms.push_back(Term({{IndexingFunction::Tokens, "name", "full_name"}}));
  s.terms.push_back(Term({{IndexingFunction::ExactValue, "zip", "postcode"}}));
  s.terms.push_back(Term({{IndexingFunction::Soundex, "city", "town"}}));
  return s;
}

void BM_Duplicates(benchmark::State& state) {
  const auto& g = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_duplicates(g.left.table, g.right.table, 100));
}

void BM_DuplicatesSerial(benchmark::State& state) {
  const auto& g = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::generate_duplicates(g.left.table, g.right.table, 100));
}

std::pair<std::vector<SimpleSbp>, PairRows> coverage_input(const Generated& g) {
  std::vector<IdPair> pairs(g.truth.pairs.begin(), g.truth.pairs.end());
  return {candidate_atoms(catalogue(), g.q_truth), resolve_pairs(pairs, g.left.table, g.right.table)};
}

void BM_Coverage(benchmark::State& state) {
  const auto& g = data(static_cast<std::size_t>(state.range(0)));
  auto [atoms, rows] = coverage_input(g);
  for (auto _ : state) benchmark::DoNotOptimize(pair_coverage(atoms, rows, g.left.table, g.right.table));
}

void BM_CoverageSerial(benchmark::State& state) {
  const auto& g = data(static_cast<std::size_t>(state.range(0)));
  auto [atoms, rows] = coverage_input(g);
  for (auto _ : state) benchmark::DoNotOptimize(reference::pair_coverage(atoms, rows, g.left.table, g.right.table));
}

void BM_Blocking(benchmark::State& state) {
  const auto& g = data(static_cast<std::size_t>(state.range(0)));
  auto scheme = sample_scheme();
  for (auto _ : state) benchmark::DoNotOptimize(candidate_set(build_blocks(scheme, g.left.table, g.right.table)));
}

void BM_BlockingSerial(benchmark::State& state) {
  const auto& g = data(static_cast<std::size_t>(state.range(0)));
  auto scheme = sample_scheme();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::candidate_set(reference::build_blocks(scheme, g.left.table, g.right.table)));
  }
}

}  // namespace

BENCHMARK(BM_Duplicates)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DuplicatesSerial)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Coverage)->Arg(300)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageSerial)->Arg(300)->Arg(1500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Blocking)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlockingSerial)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
