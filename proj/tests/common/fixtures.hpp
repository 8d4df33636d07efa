#pragma once

#include <string>
#include <vector>

#include "taxalign/graph.hpp"

namespace fixtures {

using taxalign::NamedEdge;
using taxalign::PartOfSpeech;
using taxalign::Relation;
using taxalign::SenseGraph;
using taxalign::Synset;

class GraphBuilder {
 public:
  GraphBuilder& node(std::string id, PartOfSpeech pos, std::vector<std::string> words, std::string gloss = "",
                     std::vector<int> frames = {});
  GraphBuilder& noun(std::string id, std::vector<std::string> words, std::string gloss = "");
  GraphBuilder& edge(Relation rel, std::string from, std::string to);
  /// `child` is-a `parent`.
  GraphBuilder& isa(std::string child, std::string parent) { return edge(Relation::Hypernym, child, parent); }

  SenseGraph build() const;
  const std::vector<Synset>& synsets() const { return synsets_; }
  const std::vector<NamedEdge>& edges() const { return edges_; }

 private:
  std::vector<Synset> synsets_;
  std::vector<NamedEdge> edges_;
};

/// Source chain s_a <- s_b <- s_x <- s_c (arrows point at the hypernym).
/// The target repeats the chain as t_a <- t_b <- t_x4 <- t_c and adds two
/// decoys sharing s_x's word: t_x2 under its own parent t_p and the
/// isolated t_x3. Connections: C1 s_c->t_c, C2 s_x->t_x2, C3 s_x->t_x3,
/// C4 s_x->t_x4, C5 s_b->t_b, C6 s_a->t_a.
struct BankChain {
  SenseGraph source;
  SenseGraph target;
};
BankChain bank_chain();

/// One source child under a root; two target twins under the matching
/// root with identical words and glosses.
struct Twins {
  SenseGraph source;
  SenseGraph target;
};
Twins twins();

/// Adjective `hurrying` participle_of verb `hurry`. The target has two
/// adjectives `hurrying`, each the participle of a different verb; only one
/// of those verbs shares a word with the source verb.
struct Participle {
  SenseGraph source;
  SenseGraph target;
};
Participle participle();

/// Chain-shaped graph of `n` nouns with unique words, used for identity runs.
SenseGraph chain(std::size_t n);

}  // namespace fixtures
