#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taxalign {

enum class PartOfSpeech : std::uint8_t { Noun = 0, Verb = 1, Adjective = 2, Adverb = 3 };

inline constexpr std::size_t kPosCount = 4;
inline constexpr PartOfSpeech kAllPos[kPosCount] = {
    PartOfSpeech::Noun, PartOfSpeech::Verb, PartOfSpeech::Adjective, PartOfSpeech::Adverb};

/// Single-letter WordNet tag: n, v, a, r.
char pos_letter(PartOfSpeech pos);
std::optional<PartOfSpeech> pos_from_letter(std::string_view s);
std::string_view pos_name(PartOfSpeech pos);

enum class Relation : std::uint8_t {
  Hypernym,
  Hyponym,
  Antonym,
  AlsoSee,
  SimilarTo,
  ParticipleOf,
  Pertains,
  Attribute,
  DerivedFrom,
};

inline constexpr std::size_t kRelationCount = 9;

struct PosSignature {
  PartOfSpeech from;
  PartOfSpeech to;
};

/// Catalog entry for a relation. Symmetric relations are traversed in both
/// orientations regardless of how the edge was written.
struct RelationInfo {
  Relation relation;
  std::string_view name;
  bool symmetric;
  std::span<const PosSignature> signatures;
  std::optional<Relation> inverse;
};

const RelationInfo& relation_info(Relation rel);
std::span<const RelationInfo> relation_catalog();
std::optional<Relation> relation_from_name(std::string_view name);
bool signature_allows(Relation rel, PartOfSpeech from, PartOfSpeech to);
/// POS reached from `from` through `rel`, if the relation applies to `from`.
std::optional<PartOfSpeech> relation_target_pos(Relation rel, PartOfSpeech from);
/// Only the hypernym hierarchy is guaranteed acyclic.
bool is_transitive_eligible(Relation rel);

using NodeIndex = std::uint32_t;

struct Synset {
  std::string id;
  PartOfSpeech pos = PartOfSpeech::Noun;
  std::vector<std::string> words;
  std::string gloss;
  std::vector<int> frames;

  friend bool operator==(const Synset&, const Synset&) = default;
};

struct Edge {
  NodeIndex from;
  NodeIndex to;
  Relation rel;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// An edge expressed with synset ids, as read from or written to files.
struct NamedEdge {
  Relation rel;
  std::string from;
  std::string to;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public GraphError {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

struct Violation {
  std::string rule;
  std::vector<std::string> ids;
  std::string detail;
};

/// Immutable lexical sense graph. Synsets are stored in id order, so index
/// order and id order coincide. Hyponym edges are always the exact inverse of
/// hypernym edges.
class SenseGraph {
 public:
  SenseGraph() = default;

  /// Builds a graph without checking semantic invariants (use validate()).
  /// Throws GraphError on duplicate ids or edges naming unknown ids, since
  /// those cannot be represented at all. Words are normalized here.
  static SenseGraph from_parts(std::vector<Synset> synsets, const std::vector<NamedEdge>& edges);

  std::size_t size() const { return synsets_.size(); }
  const Synset& synset(NodeIndex i) const { return synsets_[i]; }
  std::span<const Synset> synsets() const { return synsets_; }
  std::span<const Edge> edges() const { return edges_; }

  std::optional<NodeIndex> find(std::string_view id) const;
  NodeIndex index_of(std::string_view id) const;  // throws GraphError

  /// Direct neighbours, sorted and deduplicated.
  std::span<const NodeIndex> immediate(NodeIndex node, Relation rel) const;
  /// Nodes reachable by one or more `rel` edges. Hypernym/hyponym only.
  std::span<const NodeIndex> transitive(NodeIndex node, Relation rel) const;

  /// Synsets of `pos` containing a normalized word; empty span if none.
  std::span<const NodeIndex> lookup_word(PartOfSpeech pos, std::string_view word) const;
  const std::unordered_map<std::string, std::vector<NodeIndex>>& word_index(PartOfSpeech pos) const {
    return word_index_[static_cast<std::size_t>(pos)];
  }

  /// Source-of-truth edges only (derived hyponym edges are omitted).
  std::vector<NamedEdge> named_edges() const;

 private:
  void build_adjacency();
  void build_word_index();
  void build_closures();

  std::vector<Synset> synsets_;
  std::unordered_map<std::string, NodeIndex> by_id_;
  std::vector<Edge> edges_;
  // [relation][node] -> sorted neighbours
  std::vector<std::vector<std::vector<NodeIndex>>> adjacency_;
  std::vector<std::vector<NodeIndex>> ancestors_;
  std::vector<std::vector<NodeIndex>> descendants_;
  std::unordered_map<std::string, std::vector<NodeIndex>> word_index_[kPosCount];
};

std::vector<Violation> validate(const SenseGraph& graph);

/// Parses the tab-separated interchange format. The returned graph is
/// validated; the first violation is raised as GraphError.
SenseGraph parse_graph(std::string_view nodes_text, std::string_view edges_text,
                       std::string_view nodes_name = "nodes", std::string_view edges_name = "edges");
SenseGraph load_graph(const std::string& nodes_path, const std::string& edges_path);

std::string serialize_nodes(const SenseGraph& graph);
std::string serialize_edges(const SenseGraph& graph);

// Free-function forms by id.
std::vector<std::string> immediate(const SenseGraph& graph, std::string_view node, Relation rel);
std::vector<std::string> transitive(const SenseGraph& graph, std::string_view node, Relation rel);

}  // namespace taxalign
