#include <benchmark/benchmark.h>

#include "taxalign/pipeline.hpp"
#include "taxalign/synth.hpp"

using namespace taxalign;

namespace {

SynthData noun_pair(std::size_t nodes) {
  SynthConfig c;
  c.seed = 7;
  c.node_count = nodes;
  c.word_pool_size = nodes + nodes / 5;
  c.polysemy_rate = 0.3;
  c.multi_parent_rate = 0.03;
  c.node_delete = 0.03;
  c.node_split = 0.02;
  c.word_rename = 0.03;
  c.edge_rewire = 0.03;
  return generate(c);
}

SynthData mixed_pair(std::size_t nodes) {
  SynthConfig c;
  c.seed = 11;
  c.node_count = nodes;
  c.noun_share = 0.45;
  c.verb_share = 0.25;
  c.adjective_share = 0.22;
  c.adverb_share = 0.08;
  c.word_pool_size = nodes + nodes / 3;
  c.polysemy_rate = 0.35;
  c.node_delete = 0.05;
  c.word_rename = 0.05;
  c.edge_rewire = 0.05;
  return generate(c);
}

void BM_BuildNounProblem(benchmark::State& state) {
  const auto data = noun_pair(static_cast<std::size_t>(state.range(0)));
  const auto cs = preset_constraints(Preset::Full, PartOfSpeech::Noun);
  for (auto _ : state) {
    MappingProblem p(data.source, data.target, PartOfSpeech::Noun, cs);
    benchmark::DoNotOptimize(p.variable_count());
  }
}
BENCHMARK(BM_BuildNounProblem)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_UpdateStep(benchmark::State& state) {
  const auto data = noun_pair(static_cast<std::size_t>(state.range(0)));
  const MappingProblem p(data.source, data.target, PartOfSpeech::Noun,
                         preset_constraints(Preset::Full, PartOfSpeech::Noun));
  const auto init = initialize(p, InitMode::Uniform);
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(update_step(p, init, threads).max_delta);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(p.space().label_count()));
}
BENCHMARK(BM_UpdateStep)->Args({1000, 1})->Args({5000, 1})->Args({5000, 4})->Unit(benchmark::kMillisecond);

void BM_RunAllPhases(benchmark::State& state) {
  const auto data = mixed_pair(static_cast<std::size_t>(state.range(0)));
  const auto plan = PhasePlan::standard(Preset::Full);
  for (auto _ : state) benchmark::DoNotOptimize(run_all(data.source, data.target, plan, Settings{}).size());
}
BENCHMARK(BM_RunAllPhases)->Arg(1200)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mixed_pair(static_cast<std::size_t>(state.range(0))).source.size());
}
BENCHMARK(BM_Generate)->Arg(1200)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
