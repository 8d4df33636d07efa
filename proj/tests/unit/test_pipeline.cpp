#include <doctest.h>

#include "fixtures.hpp"
#include "taxalign/pipeline.hpp"
#include "taxalign/synth.hpp"

using namespace taxalign;

namespace {

SynthData mixed_pair(std::uint64_t seed, std::size_t nodes = 400) {
  SynthConfig c;
  c.seed = seed;
  c.node_count = nodes;
  c.noun_share = 0.4;
  c.verb_share = 0.25;
  c.adjective_share = 0.25;
  c.adverb_share = 0.1;
  c.word_pool_size = nodes / 2;
  c.polysemy_rate = 0.3;
  c.node_delete = 0.05;
  c.node_split = 0.05;
  c.word_rename = 0.05;
  c.edge_rewire = 0.05;
  return generate(c);
}

bool same(const PhaseResult& a, const PhaseResult& b) {
  return a.frozen->weights == b.frozen->weights && a.frozen->space == b.frozen->space &&
         a.stats.iterations == b.stats.iterations && a.mapping.entries.size() == b.mapping.entries.size();
}

}  // namespace

TEST_CASE("presets encode the phase recipes") {
  auto noun = preset_constraints(Preset::Basic, PartOfSpeech::Noun);
  REQUIRE(noun.structural.size() == 1);
  CHECK(noun.structural[0].code() == "aab");
  CHECK(noun.generalized.empty());
  CHECK(noun.heuristic.empty());

  auto verb = preset_constraints(Preset::Full, PartOfSpeech::Verb);
  CHECK(verb.names() == std::vector<std::string>{"structural aab", "generalized also_see", "generalized antonym",
                                                 "heuristic W", "heuristic G", "heuristic F"});
  auto adj = preset_constraints(Preset::Full, PartOfSpeech::Adjective);
  CHECK(adj.names() == std::vector<std::string>{"generalized antonym", "generalized similar_to", "generalized also_see",
                                                "generalized participle_of", "generalized pertains",
                                                "generalized attribute", "heuristic W", "heuristic G"});
  auto adv = preset_constraints(Preset::Full, PartOfSpeech::Adverb);
  CHECK(adv.names() == std::vector<std::string>{"generalized antonym", "generalized derived_from", "heuristic W",
                                                "heuristic G"});
  CHECK(preset_constraints(Preset::Basic, PartOfSpeech::Adjective).cross_pos_dependencies(PartOfSpeech::Adjective).empty());
  CHECK(preset_constraints(Preset::WordsOnly, PartOfSpeech::Noun).names() == std::vector<std::string>{"heuristic W"});
  for (auto name : {"basic", "basic+wgf", "basic+extra", "full", "words"}) CHECK(preset_name(*preset_from_name(name)) == name);
  CHECK_FALSE(preset_from_name("everything"));
}

TEST_CASE("build_problem wires frozen phases") {
  auto fx = fixtures::participle();
  const ConstraintSet adj{{}, {{Relation::ParticipleOf, 1.0}}, {{SimilarityKind::Words, 1.0}}};
  try {
    build_problem(fx.source, fx.target, PartOfSpeech::Adjective, adj, {});
    FAIL("expected a dependency error");
  } catch (const DependencyError& e) {
    CHECK(e.relation() == Relation::ParticipleOf);
    CHECK(e.missing() == PartOfSpeech::Verb);
    CHECK(std::string(e.what()).find("participle_of") != std::string::npos);
    CHECK(std::string(e.what()).find("verb") != std::string::npos);
  }

  auto noun = build_problem(fx.source, fx.target, PartOfSpeech::Noun, preset_constraints(Preset::Full, PartOfSpeech::Noun), {});
  CHECK(noun.frozen().empty());

  PhaseResults results;
  auto verbs = build_problem(fx.source, fx.target, PartOfSpeech::Verb, preset_constraints(Preset::Full, PartOfSpeech::Verb), {});
  results.emplace(PartOfSpeech::Verb, run_phase(verbs, Settings{}));
  auto p = build_problem(fx.source, fx.target, PartOfSpeech::Adjective, adj, results);
  REQUIRE(p.frozen().count(PartOfSpeech::Verb));
  CHECK(p.frozen().at(PartOfSpeech::Verb) == results.at(PartOfSpeech::Verb).frozen);
}

TEST_CASE("adverb problem builds on the frozen adjective phase") {
  auto data = mixed_pair(3);
  auto results = run_all(data.source, data.target, PhasePlan::standard(Preset::Full), Settings{});
  PhaseResults only_adj{{PartOfSpeech::Adjective, results.at(PartOfSpeech::Adjective)}};
  auto adv = build_problem(data.source, data.target, PartOfSpeech::Adverb,
                           preset_constraints(Preset::Full, PartOfSpeech::Adverb), only_adj);
  CHECK(adv.frozen().count(PartOfSpeech::Adjective) == 1);
  const auto names = adv.constraints().names();
  CHECK(std::find(names.begin(), names.end(), "generalized derived_from") != names.end());
  CHECK_THROWS_AS(build_problem(data.source, data.target, PartOfSpeech::Adverb,
                                preset_constraints(Preset::Full, PartOfSpeech::Adverb), {}),
                  DependencyError);
}

TEST_CASE("run_phase on an empty problem and on an identity problem") {
  auto g = fixtures::chain(20);
  auto empty = build_problem(g, g, PartOfSpeech::Verb, preset_constraints(Preset::Full, PartOfSpeech::Verb), {});
  auto r = run_phase(empty, Settings{});
  CHECK(r.mapping.entries.empty());
  CHECK(r.stats.converged);
  CHECK(r.stats.iterations == 0);

  auto ident = build_problem(g, g, PartOfSpeech::Noun, preset_constraints(Preset::Full, PartOfSpeech::Noun), {});
  auto id = run_phase(ident, Settings{});
  REQUIRE(id.mapping.entries.size() == 20);
  for (const auto& e : id.mapping.entries) {
    REQUIRE(e.targets.size() == 1);
    CHECK(e.targets[0].first == e.source);
    CHECK(e.targets[0].second == 1.0);
  }
}

TEST_CASE("500-node synthetic phase converges") {
  SynthConfig c;
  c.seed = 5;
  c.node_count = 500;
  c.word_pool_size = 300;
  c.polysemy_rate = 0.4;
  c.word_rename = 0.05;
  c.edge_rewire = 0.05;
  auto data = generate(c);
  auto p = build_problem(data.source, data.target, PartOfSpeech::Noun, preset_constraints(Preset::Full, PartOfSpeech::Noun), {});
  auto r = run_phase(p, Settings{});
  CHECK(r.stats.converged);
  CHECK(r.stats.iterations <= Settings{}.max_iterations);
}

TEST_CASE("default plan produces four results and adjectives read noun and verb weights") {
  auto data = mixed_pair(11);
  auto plan = PhasePlan::standard(Preset::Full);
  CHECK_NOTHROW(plan.check());
  auto results = run_all(data.source, data.target, plan, Settings{});
  REQUIRE(results.size() == 4);

  auto adj = build_problem(data.source, data.target, PartOfSpeech::Adjective,
                           preset_constraints(Preset::Full, PartOfSpeech::Adjective), results);
  CHECK(adj.frozen().at(PartOfSpeech::Noun) == results.at(PartOfSpeech::Noun).frozen);
  CHECK(adj.frozen().at(PartOfSpeech::Verb) == results.at(PartOfSpeech::Verb).frozen);

  // Instrumented check: the adjective supports actually move when the frozen
  // noun/verb weights are replaced by uniform ones.
  PhaseResults flattened = results;
  for (auto pos : {PartOfSpeech::Noun, PartOfSpeech::Verb}) {
    auto f = std::make_shared<FrozenPhase>(*results.at(pos).frozen);
    for (std::size_t v = 0; v < f->space.variable_count(); ++v)
      for (auto& w : f->weights.row(v)) w = 1.0 / static_cast<double>(f->space.labels(v).size());
    flattened.at(pos).frozen = f;
  }
  auto adj_flat = build_problem(data.source, data.target, PartOfSpeech::Adjective,
                                preset_constraints(Preset::Full, PartOfSpeech::Adjective), flattened);
  const auto state = initialize(adj, InitMode::Uniform);
  bool moved = false;
  for (std::size_t v = 0; v < adj.variable_count(); ++v)
    for (std::size_t l = 0; l < adj.space().labels(v).size(); ++l)
      moved = moved || adj.support(v, l, state) != adj_flat.support(v, l, state);
  CHECK(moved);

  // Every source synset is a variable of exactly one phase.
  std::map<std::string, int> seen;
  for (const auto& [pos, r] : results)
    for (const auto& e : r.mapping.entries) ++seen[e.source];
  CHECK(seen.size() == data.source.size());
  for (const auto& [id, n] : seen) CHECK(n == 1);
}

TEST_CASE("plan restricted to nouns yields one result") {
  auto data = mixed_pair(12);
  auto plan = PhasePlan::standard(Preset::Full);
  plan.restrict_to({PartOfSpeech::Noun});
  auto results = run_all(data.source, data.target, plan, Settings{});
  CHECK(results.size() == 1);
  CHECK(results.count(PartOfSpeech::Noun) == 1);
}

TEST_CASE("adverbs scheduled before adjectives are a dependency error") {
  auto plan = PhasePlan::standard(Preset::Full);
  std::swap(plan.phases[1], plan.phases[2]);
  CHECK_THROWS_AS(plan.check(), DependencyError);
  auto data = mixed_pair(13, 100);
  CHECK_THROWS_AS(run_all(data.source, data.target, plan, Settings{}), DependencyError);

  auto twice = PhasePlan::standard(Preset::Basic);
  twice.phases[1].pos.push_back(PartOfSpeech::Noun);
  twice.phases[1].constraints[PartOfSpeech::Noun] = preset_constraints(Preset::Basic, PartOfSpeech::Noun);
  CHECK_THROWS_AS(twice.check(), PlanError);
}

TEST_CASE("earlier phases do not depend on later ones and frozen results are plain data") {
  auto data = mixed_pair(21);
  auto full = run_all(data.source, data.target, PhasePlan::standard(Preset::Full), Settings{});
  auto first = PhasePlan::standard(Preset::Full);
  first.restrict_to({PartOfSpeech::Noun, PartOfSpeech::Verb});
  auto phase1 = run_all(data.source, data.target, first, Settings{});
  CHECK(same(phase1.at(PartOfSpeech::Noun), full.at(PartOfSpeech::Noun)));
  CHECK(same(phase1.at(PartOfSpeech::Verb), full.at(PartOfSpeech::Verb)));

  // Phase 2 rerun from the frozen phase-1 results only.
  auto adj = build_problem(data.source, data.target, PartOfSpeech::Adjective,
                           preset_constraints(Preset::Full, PartOfSpeech::Adjective), phase1);
  CHECK(same(run_phase(adj, Settings{}), full.at(PartOfSpeech::Adjective)));
}

TEST_CASE("thread count does not change results") {
  auto data = mixed_pair(8);
  Settings one, many;
  many.threads = 6;
  auto a = run_all(data.source, data.target, PhasePlan::standard(Preset::Full), one);
  auto b = run_all(data.source, data.target, PhasePlan::standard(Preset::Full), many);
  for (auto pos : kAllPos) CHECK(same(a.at(pos), b.at(pos)));
}

TEST_CASE("phase failures carry the phase context") {
  auto data = mixed_pair(9, 60);
  Settings bad;
  bad.max_iterations = 0;
  CHECK_THROWS(run_all(data.source, data.target, PhasePlan::standard(Preset::Full), bad));
  auto fx = fixtures::participle();
  auto plan = PhasePlan::standard(Preset::Full);
  plan.override_constraints(PartOfSpeech::Verb, ConstraintSet{{}, {}, {{SimilarityKind::Frames, 1.0}}});
  // frames on verbs without frames are fine; an inapplicable override is not
  plan.override_constraints(PartOfSpeech::Noun, ConstraintSet{{}, {}, {{SimilarityKind::Frames, 1.0}}});
  CHECK_THROWS_AS(plan.check(), ConstraintError);
}
