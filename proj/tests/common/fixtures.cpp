#include "fixtures.hpp"

namespace fixtures {

GraphBuilder& GraphBuilder::node(std::string id, PartOfSpeech pos, std::vector<std::string> words, std::string gloss,
                                 std::vector<int> frames) {
  synsets_.push_back(Synset{std::move(id), pos, std::move(words), std::move(gloss), std::move(frames)});
  return *this;
}

GraphBuilder& GraphBuilder::noun(std::string id, std::vector<std::string> words, std::string gloss) {
  return node(std::move(id), PartOfSpeech::Noun, std::move(words), std::move(gloss));
}

GraphBuilder& GraphBuilder::edge(Relation rel, std::string from, std::string to) {
  edges_.push_back(NamedEdge{rel, std::move(from), std::move(to)});
  return *this;
}

SenseGraph GraphBuilder::build() const { return SenseGraph::from_parts(synsets_, edges_); }

BankChain bank_chain() {
  GraphBuilder s;
  s.noun("s_a", {"entity"}).noun("s_b", {"object"}).noun("s_x", {"bank"}).noun("s_c", {"riverbank"});
  s.isa("s_b", "s_a").isa("s_x", "s_b").isa("s_c", "s_x");

  GraphBuilder t;
  t.noun("t_a", {"entity"}).noun("t_b", {"object"}).noun("t_x4", {"bank"}).noun("t_c", {"riverbank"});
  t.noun("t_p", {"institution"}).noun("t_x2", {"bank"}).noun("t_x3", {"bank"});
  t.isa("t_b", "t_a").isa("t_x4", "t_b").isa("t_c", "t_x4").isa("t_x2", "t_p");
  return {s.build(), t.build()};
}

Twins twins() {
  GraphBuilder s;
  s.noun("s_root", {"root"}).noun("s_x", {"twin"}, "a copy of the other");
  s.isa("s_x", "s_root");
  GraphBuilder t;
  t.noun("t_root", {"root"}).noun("t_x1", {"twin"}, "a copy of the other").noun("t_x2", {"twin"},
                                                                              "a copy of the other");
  t.isa("t_x1", "t_root").isa("t_x2", "t_root");
  return {s.build(), t.build()};
}

Participle participle() {
  using P = PartOfSpeech;
  GraphBuilder s;
  s.node("sv", P::Verb, {"hurry", "rush"}).node("sa", P::Adjective, {"hurrying"});
  s.edge(Relation::ParticipleOf, "sa", "sv");
  GraphBuilder t;
  t.node("tv1", P::Verb, {"hurry", "rush"}).node("tv2", P::Verb, {"scurry"});
  t.node("ta1", P::Adjective, {"hurrying"}).node("ta2", P::Adjective, {"hurrying"});
  t.edge(Relation::ParticipleOf, "ta1", "tv1").edge(Relation::ParticipleOf, "ta2", "tv2");
  return {s.build(), t.build()};
}

SenseGraph chain(std::size_t n) {
  GraphBuilder g;
  for (std::size_t i = 0; i < n; ++i) {
    g.noun("c" + std::to_string(1000 + i), {"word" + std::to_string(i)});
    if (i) g.isa("c" + std::to_string(1000 + i), "c" + std::to_string(1000 + i - 1));
  }
  return g.build();
}

}  // namespace fixtures
