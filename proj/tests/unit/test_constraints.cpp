#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "random_graphs.hpp"
#include "taxalign/constraints.hpp"
#include "taxalign/relaxation.hpp"

using namespace taxalign;
using fixtures::GraphBuilder;

namespace {

StructuralConstraint structural(const char* code, double w = 1.0) {
  auto c = StructuralConstraint::from_code(std::string_view(code).substr(0, 2), std::string_view(code).substr(2), w);
  REQUIRE(c);
  return *c;
}

std::vector<std::string> ids(const SenseGraph& g, const std::vector<NodeIndex>& nodes) {
  std::vector<std::string> out;
  for (auto n : nodes) out.push_back(g.synset(n).id);
  return out;
}

// Uniform weights over the default label space of `pos`.
struct Uniform {
  LabelSpace space;
  Assignment weights;
  Uniform(const SenseGraph& s, const SenseGraph& t, PartOfSpeech pos) : space(candidate_space(s, t, pos)), weights(space) {
    for (std::size_t v = 0; v < space.variable_count(); ++v)
      for (auto& w : weights.row(v)) w = 1.0 / static_cast<double>(space.labels(v).size());
  }
  WeightState state() const { return {space, weights}; }
};

Connection conn(const SenseGraph& s, const SenseGraph& t, const char* a, const char* b) {
  return {s.index_of(a), t.index_of(b)};
}

}  // namespace

TEST_CASE("candidate labels") {
  auto t = GraphBuilder()
               .noun("t1", {"dog"}).noun("t2", {"frank", "hot_dog"}).noun("t3", {"dog", "pursuer"})
               .node("t4", PartOfSpeech::Verb, {"dog"}).noun("t0", {"cat"})
               .build();
  auto s = GraphBuilder()
               .noun("s1", {"domestic_dog", "canis"}).noun("s2", {"dog"}).noun("s3", {"unicorn"})
               .noun("s4", {"dog", "frank", "cat"})
               .build();
  CHECK(ids(t, candidate_labels(s.synset(s.index_of("s2")), t)) == std::vector<std::string>{"t1", "t3"});
  CHECK(candidate_labels(s.synset(s.index_of("s3")), t).empty());
  CHECK(candidate_labels(s.synset(s.index_of("s1")), t).empty());
  // shared by t0, t1, t2, t3; sorted, same POS only, checked against a word scan
  const auto four = ids(t, candidate_labels(s.synset(s.index_of("s4")), t));
  CHECK(four == std::vector<std::string>{"t0", "t1", "t2", "t3"});
  CHECK(four == oracle::candidates(oracle::raw(s), oracle::raw(t), "s4"));

  auto single = GraphBuilder().noun("x", {"dog", "domestic_dog"}).build();
  CHECK(ids(t, candidate_labels(single.synset(0), t)) == std::vector<std::string>{"t1", "t3"});
  auto only = GraphBuilder().noun("u1", {"dog"}).noun("u2", {"cat"}).build();
  CHECK(ids(only, candidate_labels(single.synset(0), only)) == std::vector<std::string>{"u1"});
}

TEST_CASE("similarity measures") {
  const auto stop = Stoplist::from_text("a\nthe\n");
  Synset s{"s", PartOfSpeech::Noun, {"a", "b", "c"}, "a small dog", {}};
  Synset t{"t", PartOfSpeech::Noun, {"a", "b", "c"}, "the small canine", {}};
  CHECK(similarity(SimilarityKind::Words, s, t, stop) == 3);
  CHECK(similarity(SimilarityKind::Gloss, s, t, stop) == 1);
  Synset v1{"v1", PartOfSpeech::Verb, {"run"}, "", {2, 8}};
  Synset v2{"v2", PartOfSpeech::Verb, {"run"}, "", {8, 9}};
  CHECK(similarity(SimilarityKind::Frames, v1, v2, stop) == 1);
  CHECK_THROWS_AS(similarity(SimilarityKind::Frames, s, t, stop), ConstraintError);
}

TEST_CASE("heuristic support uses the smaller set as normalizer") {
  auto s = GraphBuilder().noun("s1", {"a", "b"}, "river side").noun("s2", {"a", "b", "c"}).build();
  auto t = GraphBuilder().noun("t1", {"a", "b"}, "money lender").noun("t2", {"a", "x", "y"}).build();
  const auto stop = Stoplist::english();
  HeuristicConstraint w{SimilarityKind::Words, 2.0};
  CHECK(heuristic_support(conn(s, t, "s1", "t1"), w, s, t, stop) == 2.0);
  CHECK(heuristic_support(conn(s, t, "s1", "t2"), w, s, t, stop) == doctest::Approx(0.5 * 2.0));
  HeuristicConstraint g{SimilarityKind::Gloss, 1.0};
  CHECK(heuristic_support(conn(s, t, "s1", "t1"), g, s, t, stop) == 0.0);
  CHECK(heuristic_support(conn(s, t, "s2", "t1"), g, s, t, stop) == 0.0);  // empty gloss
}

TEST_CASE("bank chain: C4 is reinforced by its matched neighbours, C2 and C3 are not") {
  auto fig = fixtures::bank_chain();
  const auto& s = fig.source;
  const auto& t = fig.target;
  Uniform u(s, t, PartOfSpeech::Noun);
  const auto c4 = conn(s, t, "s_x", "t_x4"), c2 = conn(s, t, "s_x", "t_x2"), c3 = conn(s, t, "s_x", "t_x3");

  const auto iib = structural("iib");
  CHECK(structural_support(c4, iib, u.state(), s, t) == 2.0);  // C5 above, C1 below
  CHECK(structural_support(c2, iib, u.state(), s, t) == 0.0);
  CHECK(structural_support(c3, iib, u.state(), s, t) == 0.0);

  const auto aab = structural("aab");
  CHECK(structural_support(c4, aab, u.state(), s, t) == 3.0);  // C5, C6 and C1
  CHECK(structural_support(c2, aab, u.state(), s, t) == 0.0);

  ConstraintSet cs{{iib}, {}, {}};
  const auto stop = Stoplist::english();
  const double t4 = total_support(c4, cs, u.state(), {}, s, t, stop);
  CHECK(t4 > total_support(c2, cs, u.state(), {}, s, t, stop));
  CHECK(t4 > total_support(c3, cs, u.state(), {}, s, t, stop));
}

TEST_CASE("root connection has no hypernym-side support") {
  auto fig = fixtures::bank_chain();
  Uniform u(fig.source, fig.target, PartOfSpeech::Noun);
  const auto root = conn(fig.source, fig.target, "s_a", "t_a");
  CHECK(structural_support(root, structural("iie"), u.state(), fig.source, fig.target) == 0.0);
  CHECK(structural_support(root, structural("aae"), u.state(), fig.source, fig.target) == 0.0);
  CHECK(structural_support(root, structural("iio"), u.state(), fig.source, fig.target) == 1.0);
}

TEST_CASE("transitive source scope reaches the grandparent match") {
  // 4-node chain on both sides: leaf -> mid -> top -> root.
  GraphBuilder sb, tb;
  sb.noun("s_leaf", {"leaf"}).noun("s_mid", {"mid"}).noun("s_top", {"top"}).noun("s_root", {"root"});
  sb.isa("s_leaf", "s_mid").isa("s_mid", "s_top").isa("s_top", "s_root");
  // In the target the leaf hangs directly under top (mid was dropped).
  tb.noun("t_leaf", {"leaf"}).noun("t_mid", {"mid"}).noun("t_top", {"top"}).noun("t_root", {"root"});
  tb.isa("t_leaf", "t_top").isa("t_mid", "t_top").isa("t_top", "t_root");
  auto s = sb.build(), t = tb.build();
  Uniform u(s, t, PartOfSpeech::Noun);
  const auto c = conn(s, t, "s_leaf", "t_leaf");
  // iie: S = {mid}, T = {top}; (mid, top) is not a connection.
  CHECK(structural_support(c, structural("iie"), u.state(), s, t) == 0.0);
  // aie: S = {mid, top, root}, T = {top}; (top, top) matches.
  CHECK(structural_support(c, structural("aie"), u.state(), s, t) == 1.0);
  // aae: T = {top, root} adds (root, root).
  CHECK(structural_support(c, structural("aae"), u.state(), s, t) == 2.0);
  // iae: S = {mid}, T = {top, root}; nothing.
  CHECK(structural_support(c, structural("iae"), u.state(), s, t) == 0.0);
}

TEST_CASE("generalized support") {
  using P = PartOfSpeech;
  SUBCASE("antonym pair") {
    auto s = GraphBuilder().node("s1", P::Adjective, {"hot"}).node("s2", P::Adjective, {"cold"})
                 .edge(Relation::Antonym, "s1", "s2").build();
    auto t = GraphBuilder().node("t1", P::Adjective, {"hot"}).node("t2", P::Adjective, {"cold"})
                 .edge(Relation::Antonym, "t2", "t1").build();
    Uniform u(s, t, P::Adjective);
    GeneralizedConstraint c{Relation::Antonym, 1.5};
    CHECK(generalized_support(conn(s, t, "s1", "t1"), c, u.state(), {}, s, t) == 1.5);
    CHECK(generalized_support(conn(s, t, "s2", "t2"), c, u.state(), {}, s, t) == 1.5);
  }
  SUBCASE("relation present in the source only") {
    auto s = GraphBuilder().node("s1", P::Adjective, {"hot"}).node("s2", P::Adjective, {"cold"})
                 .edge(Relation::Antonym, "s1", "s2").build();
    auto t = GraphBuilder().node("t1", P::Adjective, {"hot"}).node("t2", P::Adjective, {"cold"}).build();
    Uniform u(s, t, P::Adjective);
    CHECK(generalized_support(conn(s, t, "s1", "t1"), {Relation::Antonym, 1.0}, u.state(), {}, s, t) == 0.0);
  }
  SUBCASE("participle_of reads the frozen verb weights") {
    auto fx = fixtures::participle();
    const auto& s = fx.source;
    const auto& t = fx.target;
    Uniform adj(s, t, P::Adjective);
    GeneralizedConstraint c{Relation::ParticipleOf, 1.0};
    CHECK_THROWS_AS(generalized_support(conn(s, t, "sa", "ta1"), c, adj.state(), {}, s, t), DependencyError);

    auto verbs = std::make_shared<FrozenPhase>();
    verbs->pos = P::Verb;
    verbs->space = candidate_space(s, t, P::Verb);
    verbs->weights = Assignment(verbs->space);
    REQUIRE(verbs->space.labels(0).size() == 1);
    verbs->weights.row(0)[0] = 1.0;
    FrozenContext frozen{{P::Verb, verbs}};
    CHECK(generalized_support(conn(s, t, "sa", "ta1"), c, adj.state(), frozen, s, t) == 1.0);
    CHECK(generalized_support(conn(s, t, "sa", "ta2"), c, adj.state(), frozen, s, t) == 0.0);
  }
}

TEST_CASE("total support is normalized by the total constraint weight") {
  auto s = GraphBuilder().noun("s", {"a", "b"}).build();
  auto t = GraphBuilder().noun("t", {"a", "b"}).build();
  Uniform u(s, t, PartOfSpeech::Noun);
  ConstraintSet words{{}, {}, {{SimilarityKind::Words, 3.0}}};
  CHECK(total_support({0, 0}, words, u.state(), {}, s, t, Stoplist::english()) == 1.0);
  ConstraintSet mixed{{structural("aab", 1.0)}, {}, {{SimilarityKind::Words, 3.0}}};
  CHECK(total_support({0, 0}, mixed, u.state(), {}, s, t, Stoplist::english()) == 0.75);
}

TEST_CASE("constraint applicability and dependencies") {
  ConstraintSet adj{{}, {{Relation::ParticipleOf, 1.0}, {Relation::Antonym, 1.0}, {Relation::Pertains, 1.0}}, {}};
  auto deps = adj.cross_pos_dependencies(PartOfSpeech::Adjective);
  REQUIRE(deps.size() == 2);
  CHECK(deps[0] == std::pair{Relation::ParticipleOf, PartOfSpeech::Verb});
  CHECK(deps[1] == std::pair{Relation::Pertains, PartOfSpeech::Noun});
  CHECK_NOTHROW(adj.check_applicable(PartOfSpeech::Adjective));
  CHECK_THROWS_AS(adj.check_applicable(PartOfSpeech::Noun), ConstraintError);
  CHECK_THROWS_AS((ConstraintSet{{structural("aab")}, {}, {}}.check_applicable(PartOfSpeech::Adjective)), ConstraintError);
  CHECK_THROWS_AS((ConstraintSet{{}, {}, {{SimilarityKind::Frames, 1.0}}}.check_applicable(PartOfSpeech::Noun)),
                  ConstraintError);
  CHECK_THROWS_AS(ConstraintSet{}.check(), ConstraintError);
  CHECK_THROWS_AS((ConstraintSet{{}, {}, {{SimilarityKind::Words, 0.0}}}.check()), ConstraintError);
}

TEST_CASE("constraint config grammar") {
  auto cfg = parse_constraint_config(
      "# nouns\nstructural aa b 1.0\nstructural iie\ngeneralized antonym 0.5\nheuristic w\nheuristic G 2\n"
      "stoplist stop.txt\n");
  REQUIRE(cfg.constraints.structural.size() == 2);
  CHECK(cfg.constraints.structural[0].code() == "aab");
  CHECK(cfg.constraints.structural[1].code() == "iie");
  CHECK(cfg.constraints.generalized[0].weight == 0.5);
  CHECK(cfg.constraints.heuristic[1].kind == SimilarityKind::Gloss);
  CHECK(cfg.constraints.heuristic[1].weight == 2.0);
  CHECK(cfg.stoplist_path == "stop.txt");
  auto again = parse_constraint_config(format_constraint_set(cfg.constraints));
  CHECK(format_constraint_set(again.constraints) == format_constraint_set(cfg.constraints));

  CHECK_THROWS_WITH_AS(parse_constraint_config("heuristic w\nbogus 1\n", "c.cfg"), doctest::Contains("c.cfg:2"),
                       ConstraintError);
  CHECK_THROWS_AS(parse_constraint_config("structural zz b\n"), ConstraintError);
  CHECK_THROWS_AS(parse_constraint_config("generalized likes\n"), ConstraintError);
  CHECK_THROWS_AS(parse_constraint_config("heuristic w -1\n"), ConstraintError);
  CHECK_THROWS_AS(parse_constraint_config("# nothing\n"), ConstraintError);
}

TEST_CASE("support agrees with the brute-force enumerator on random problems") {
  std::mt19937_64 rng(4242);
  const auto stop_words = std::set<std::string>{"the", "of", "a", "to", "and"};
  const auto stop = Stoplist::from_text("the\nof\na\nto\nand\n");
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    auto pair = fixtures::random_pair(rng, 20);
    const auto rs = oracle::raw(pair.source), rt = oracle::raw(pair.target);
    for (auto pos : kAllPos) {
      const auto cs = fixtures::random_constraints(rng, pos);
      FrozenContext frozen;
      std::map<PartOfSpeech, oracle::Weights> frozen_w;
      for (const auto& [rel, foreign] : cs.cross_pos_dependencies(pos)) {
        (void)rel;
        if (frozen.count(foreign)) continue;
        auto ph = std::make_shared<FrozenPhase>();
        ph->pos = foreign;
        ph->space = candidate_space(pair.source, pair.target, foreign);
        ph->weights = fixtures::random_assignment(ph->space, rng);
        frozen_w[foreign] = oracle::weights_of(pair.source, pair.target, ph->space, ph->weights);
        frozen[foreign] = ph;
      }
      const auto space = candidate_space(pair.source, pair.target, pos);
      const auto state = fixtures::random_assignment(space, rng);
      const auto w = oracle::weights_of(pair.source, pair.target, space, state);
      MappingProblem problem(pair.source, pair.target, pos, cs, frozen, stop);
      for (std::size_t v = 0; v < space.variable_count(); ++v) {
        const auto& sid = pair.source.synset(space.variable(v)).id;
        const auto labels = space.labels(v);
        for (std::size_t l = 0; l < labels.size(); ++l) {
          const auto& tid = pair.target.synset(labels[l]).id;
          const double expected = oracle::support(rs, rt, sid, tid, cs, w, frozen_w, stop_words);
          const Connection c{space.variable(v), labels[l]};
          CHECK(total_support(c, cs, {space, state}, frozen, pair.source, pair.target, stop) == expected);
          CHECK(problem.support(v, l, state) == expected);
          CHECK(support_breakdown(c, cs, {space, state}, frozen, pair.source, pair.target, stop) ==
                oracle::breakdown(rs, rt, sid, tid, cs, w, frozen_w, stop_words));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("monotonicity: raising a context weight never lowers contextual support") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; ++round) {
    auto pair = fixtures::random_pair(rng, 20);
    for (auto pos : {PartOfSpeech::Noun, PartOfSpeech::Verb, PartOfSpeech::Adjective}) {
      ConstraintSet cs = fixtures::random_constraints(rng, pos);
      cs.heuristic.clear();
      std::erase_if(cs.generalized, [&](const GeneralizedConstraint& g) {
        return !ConstraintSet{{}, {g}, {}}.cross_pos_dependencies(pos).empty();
      });
      if (cs.size() == 0) continue;
      const auto space = candidate_space(pair.source, pair.target, pos);
      if (space.label_count() == 0) continue;
      auto state = fixtures::random_assignment(space, rng);
      auto raised = state;
      // raise one random entry without renormalizing: support is linear in it
      const auto flat = std::uniform_int_distribution<std::size_t>(0, space.label_count() - 1)(rng);
      std::size_t v = 0;
      while (space.offsets()[v + 1] <= flat) ++v;
      raised.row(v)[flat - space.offsets()[v]] += 0.5;
      for (std::size_t u = 0; u < space.variable_count(); ++u)
        for (std::size_t l = 0; l < space.labels(u).size(); ++l) {
          const Connection c{space.variable(u), space.labels(u)[l]};
          CHECK(total_support(c, cs, {space, raised}, {}, pair.source, pair.target, Stoplist::english()) >=
                total_support(c, cs, {space, state}, {}, pair.source, pair.target, Stoplist::english()));
        }
    }
  }
}

TEST_CASE("locality: changing an unrelated part of the graph leaves support bit-identical") {
  auto fig = fixtures::bank_chain();
  const auto full = ConstraintSet{{structural("aab")}, {}, {{SimilarityKind::Words, 1.0}, {SimilarityKind::Gloss, 1.0}}};
  Uniform before(fig.source, fig.target, PartOfSpeech::Noun);
  const auto c4 = conn(fig.source, fig.target, "s_x", "t_x4");
  const double base = total_support(c4, full, before.state(), {}, fig.source, fig.target, Stoplist::english());

  // Add an unrelated subtree to both graphs, with its own matching words.
  GraphBuilder sb, tb;
  for (const auto& s : fig.source.synsets()) sb.node(s.id, s.pos, s.words, s.gloss, s.frames);
  for (const auto& e : fig.source.named_edges()) sb.edge(e.rel, e.from, e.to);
  for (const auto& s : fig.target.synsets()) tb.node(s.id, s.pos, s.words, s.gloss, s.frames);
  for (const auto& e : fig.target.named_edges()) tb.edge(e.rel, e.from, e.to);
  sb.noun("s_far", {"far"}).noun("s_far2", {"far2", "bank"}).isa("s_far2", "s_far");
  tb.noun("t_far", {"far"}).noun("t_far2", {"far2"}).isa("t_far2", "t_far");
  auto s2 = sb.build(), t2 = tb.build();
  Uniform after(s2, t2, PartOfSpeech::Noun);
  const Connection c4b{s2.index_of("s_x"), t2.index_of("t_x4")};
  CHECK(total_support(c4b, full, after.state(), {}, s2, t2, Stoplist::english()) == base);
}
