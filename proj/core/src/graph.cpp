#include "taxalign/graph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>
#include <sstream>

#include "taxalign/text.hpp"

namespace taxalign {

namespace {

using P = PartOfSpeech;

constexpr PosSignature kHierarchySig[] = {{P::Noun, P::Noun}, {P::Verb, P::Verb}};
constexpr PosSignature kSamePosSig[] = {
    {P::Noun, P::Noun}, {P::Verb, P::Verb}, {P::Adjective, P::Adjective}, {P::Adverb, P::Adverb}};
constexpr PosSignature kAlsoSeeSig[] = {{P::Verb, P::Verb}, {P::Adjective, P::Adjective}};
constexpr PosSignature kAdjAdjSig[] = {{P::Adjective, P::Adjective}};
constexpr PosSignature kAdjVerbSig[] = {{P::Adjective, P::Verb}};
constexpr PosSignature kAdjNounSig[] = {{P::Adjective, P::Noun}};
constexpr PosSignature kAdvAdjSig[] = {{P::Adverb, P::Adjective}};

const std::array<RelationInfo, kRelationCount> kCatalog = {{
    {Relation::Hypernym, "hypernym", false, kHierarchySig, Relation::Hyponym},
    {Relation::Hyponym, "hyponym", false, kHierarchySig, Relation::Hypernym},
    {Relation::Antonym, "antonym", true, kSamePosSig, std::nullopt},
    {Relation::AlsoSee, "also_see", true, kAlsoSeeSig, std::nullopt},
    {Relation::SimilarTo, "similar_to", true, kAdjAdjSig, std::nullopt},
    {Relation::ParticipleOf, "participle_of", false, kAdjVerbSig, std::nullopt},
    {Relation::Pertains, "pertains", false, kAdjNounSig, std::nullopt},
    {Relation::Attribute, "attribute", false, kAdjNounSig, std::nullopt},
    {Relation::DerivedFrom, "derived_from", false, kAdvAdjSig, std::nullopt},
}};

std::size_t rel_slot(Relation r) { return static_cast<std::size_t>(r); }

std::string describe(std::string_view file, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << file << ":" << line << ": " << what;
  return os.str();
}

std::vector<std::string_view> content_lines(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

bool skip_line(std::string_view line) {
  auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

char pos_letter(PartOfSpeech pos) {
  switch (pos) {
    case P::Noun: return 'n';
    case P::Verb: return 'v';
    case P::Adjective: return 'a';
    case P::Adverb: return 'r';
  }
  return '?';
}

std::optional<PartOfSpeech> pos_from_letter(std::string_view s) {
  if (s == "n") return P::Noun;
  if (s == "v") return P::Verb;
  if (s == "a") return P::Adjective;
  if (s == "r") return P::Adverb;
  return std::nullopt;
}

std::string_view pos_name(PartOfSpeech pos) {
  switch (pos) {
    case P::Noun: return "noun";
    case P::Verb: return "verb";
    case P::Adjective: return "adjective";
    case P::Adverb: return "adverb";
  }
  return "?";
}

const RelationInfo& relation_info(Relation rel) { return kCatalog[rel_slot(rel)]; }

std::span<const RelationInfo> relation_catalog() { return kCatalog; }

std::optional<Relation> relation_from_name(std::string_view name) {
  for (const auto& info : kCatalog)
    if (info.name == name) return info.relation;
  return std::nullopt;
}

bool signature_allows(Relation rel, PartOfSpeech from, PartOfSpeech to) {
  for (const auto& sig : relation_info(rel).signatures)
    if (sig.from == from && sig.to == to) return true;
  return false;
}

std::optional<PartOfSpeech> relation_target_pos(Relation rel, PartOfSpeech from) {
  for (const auto& sig : relation_info(rel).signatures)
    if (sig.from == from) return sig.to;
  return std::nullopt;
}

bool is_transitive_eligible(Relation rel) { return rel == Relation::Hypernym || rel == Relation::Hyponym; }

ParseError::ParseError(std::string file, std::size_t line, const std::string& what)
    : GraphError(describe(file, line, what)), file_(std::move(file)), line_(line) {}

SenseGraph SenseGraph::from_parts(std::vector<Synset> synsets, const std::vector<NamedEdge>& edges) {
  SenseGraph g;
  for (auto& s : synsets)
    for (auto& w : s.words) w = normalize_word(w);
  std::sort(synsets.begin(), synsets.end(), [](const Synset& a, const Synset& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < synsets.size(); ++i)
    if (synsets[i].id == synsets[i - 1].id) throw GraphError("duplicate synset id '" + synsets[i].id + "'");
  g.synsets_ = std::move(synsets);
  g.by_id_.reserve(g.synsets_.size());
  for (std::size_t i = 0; i < g.synsets_.size(); ++i) g.by_id_.emplace(g.synsets_[i].id, static_cast<NodeIndex>(i));

  g.edges_.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    auto from = g.find(e.from);
    auto to = g.find(e.to);
    if (!from) throw GraphError("edge references unknown synset '" + e.from + "'");
    if (!to) throw GraphError("edge references unknown synset '" + e.to + "'");
    g.edges_.push_back({*from, *to, e.rel});
    if (auto inv = relation_info(e.rel).inverse) g.edges_.push_back({*to, *from, *inv});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  g.build_adjacency();
  g.build_word_index();
  g.build_closures();
  return g;
}

void SenseGraph::build_adjacency() {
  adjacency_.assign(kRelationCount, std::vector<std::vector<NodeIndex>>(synsets_.size()));
  for (const auto& e : edges_) {
    adjacency_[rel_slot(e.rel)][e.from].push_back(e.to);
    if (relation_info(e.rel).symmetric) adjacency_[rel_slot(e.rel)][e.to].push_back(e.from);
  }
  for (auto& per_rel : adjacency_)
    for (auto& nbrs : per_rel) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
}

void SenseGraph::build_word_index() {
  for (auto& idx : word_index_) idx.clear();
  for (std::size_t i = 0; i < synsets_.size(); ++i) {
    auto& idx = word_index_[static_cast<std::size_t>(synsets_[i].pos)];
    for (const auto& w : synsets_[i].words) {
      auto& bucket = idx[w];
      if (bucket.empty() || bucket.back() != i) bucket.push_back(static_cast<NodeIndex>(i));
    }
  }
}

void SenseGraph::build_closures() {
  const auto n = synsets_.size();
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;
  std::vector<NodeIndex> stack;
  auto closure = [&](NodeIndex start, const std::vector<std::vector<NodeIndex>>& adj) {
    ++epoch;
    std::vector<NodeIndex> out;
    stack.assign(adj[start].begin(), adj[start].end());
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      if (stamp[v] == epoch) continue;
      stamp[v] = epoch;
      if (v != start) out.push_back(v);
      for (auto w : adj[v])
        if (stamp[w] != epoch) stack.push_back(w);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  ancestors_.resize(n);
  descendants_.resize(n);
  for (NodeIndex i = 0; i < n; ++i) {
    ancestors_[i] = closure(i, adjacency_[rel_slot(Relation::Hypernym)]);
    descendants_[i] = closure(i, adjacency_[rel_slot(Relation::Hyponym)]);
  }
}

std::optional<NodeIndex> SenseGraph::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

NodeIndex SenseGraph::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw GraphError("unknown synset id '" + std::string(id) + "'");
}

std::span<const NodeIndex> SenseGraph::immediate(NodeIndex node, Relation rel) const {
  if (node >= synsets_.size()) throw GraphError("node index out of range");
  return adjacency_[rel_slot(rel)][node];
}

std::span<const NodeIndex> SenseGraph::transitive(NodeIndex node, Relation rel) const {
  if (node >= synsets_.size()) throw GraphError("node index out of range");
  if (rel == Relation::Hypernym) return ancestors_[node];
  if (rel == Relation::Hyponym) return descendants_[node];
  throw GraphError("relation '" + std::string(relation_info(rel).name) + "' is not eligible for transitive traversal");
}

std::span<const NodeIndex> SenseGraph::lookup_word(PartOfSpeech pos, std::string_view word) const {
  const auto& idx = word_index_[static_cast<std::size_t>(pos)];
  auto it = idx.find(std::string(word));
  if (it == idx.end()) return {};
  return it->second;
}

std::vector<NamedEdge> SenseGraph::named_edges() const {
  std::vector<NamedEdge> out;
  for (const auto& e : edges_) {
    if (e.rel == Relation::Hyponym) continue;
    out.push_back({e.rel, synsets_[e.from].id, synsets_[e.to].id});
  }
  return out;
}

std::vector<Violation> validate(const SenseGraph& graph) {
  std::vector<Violation> out;
  const auto n = graph.size();

  for (const auto& s : graph.synsets()) {
    if (s.words.empty()) out.push_back({"non-empty-words", {s.id}, "synset has no words"});
    if (!s.frames.empty() && s.pos != PartOfSpeech::Verb)
      out.push_back({"pos-payload", {s.id}, "verb frames on a " + std::string(pos_name(s.pos)) + " synset"});
    if (s.gloss.find_first_of("\t\n") != std::string::npos)
      out.push_back({"gloss-format", {s.id}, "gloss contains a tab or newline"});
  }

  for (const auto& e : graph.edges()) {
    const auto& a = graph.synset(e.from);
    const auto& b = graph.synset(e.to);
    if (!signature_allows(e.rel, a.pos, b.pos)) {
      std::string detail = std::string(relation_info(e.rel).name) + " does not allow " +
                           std::string(pos_name(a.pos)) + " -> " + std::string(pos_name(b.pos));
      out.push_back({"pos-signature", {a.id, b.id}, std::move(detail)});
    }
    if (auto inv = relation_info(e.rel).inverse) {
      const Edge back{e.to, e.from, *inv};
      if (!std::binary_search(graph.edges().begin(), graph.edges().end(), back))
        out.push_back({"inverse-closure", {a.id, b.id}, "missing inverse edge"});
    }
  }

  // Tarjan SCC over hypernym edges; any non-trivial component is a cycle.
  {
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeIndex> stack;
    int counter = 0;
    std::function<void(NodeIndex)> strongconnect = [&](NodeIndex v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (auto w : graph.immediate(v, Relation::Hypernym)) {
        if (index[w] < 0) {
          strongconnect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<std::string> comp;
        bool self_loop = false;
        NodeIndex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(graph.synset(w).id);
        } while (w != v);
        if (comp.size() == 1) {
          auto nb = graph.immediate(v, Relation::Hypernym);
          self_loop = std::binary_search(nb.begin(), nb.end(), v);
        }
        if (comp.size() > 1 || self_loop) {
          std::sort(comp.begin(), comp.end());
          out.push_back({"hypernym-acyclic", std::move(comp), "hypernym cycle"});
        }
      }
    };
    for (NodeIndex v = 0; v < n; ++v)
      if (index[v] < 0) strongconnect(v);
  }

  for (auto pos : kAllPos) {
    std::unordered_map<std::string, std::vector<NodeIndex>> rebuilt;
    for (NodeIndex i = 0; i < n; ++i) {
      const auto& s = graph.synset(i);
      if (s.pos != pos) continue;
      for (const auto& w : s.words) {
        auto& bucket = rebuilt[w];
        if (bucket.empty() || bucket.back() != i) bucket.push_back(i);
      }
    }
    if (rebuilt != graph.word_index(pos))
      out.push_back({"word-index", {}, "word index disagrees with synset words for " + std::string(pos_name(pos))});
  }
  return out;
}

SenseGraph parse_graph(std::string_view nodes_text, std::string_view edges_text, std::string_view nodes_name,
                       std::string_view edges_name) {
  const std::string nfile(nodes_name), efile(edges_name);
  std::vector<Synset> synsets;
  std::unordered_map<std::string, std::size_t> first_line;
  std::unordered_map<std::string, PartOfSpeech> pos_of;

  const auto nlines = content_lines(nodes_text);
  for (std::size_t ln = 0; ln < nlines.size(); ++ln) {
    const auto line = strip_cr(nlines[ln]);
    const auto lineno = ln + 1;
    if (skip_line(line)) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4 && fields.size() != 5)
      throw ParseError(nfile, lineno, "expected 5 tab-separated fields, got " + std::to_string(fields.size()));
    Synset s;
    s.id = std::string(trim(fields[0]));
    if (s.id.empty()) throw ParseError(nfile, lineno, "empty synset id");
    auto pos = pos_from_letter(trim(fields[1]));
    if (!pos) throw ParseError(nfile, lineno, "unknown part of speech '" + std::string(fields[1]) + "'");
    s.pos = *pos;
    for (auto w : split(fields[2], ',')) {
      auto nw = normalize_word(w);
      if (nw.empty()) throw ParseError(nfile, lineno, "empty word in synset '" + s.id + "'");
      s.words.push_back(std::move(nw));
    }
    s.gloss = std::string(fields[3]);
    if (fields.size() == 5 && !trim(fields[4]).empty()) {
      for (auto f : split(fields[4], ',')) {
        f = trim(f);
        int value = 0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
        if (ec != std::errc() || p != f.data() + f.size())
          throw ParseError(nfile, lineno, "bad frame identifier '" + std::string(f) + "'");
        s.frames.push_back(value);
      }
      std::sort(s.frames.begin(), s.frames.end());
      s.frames.erase(std::unique(s.frames.begin(), s.frames.end()), s.frames.end());
      if (s.pos != PartOfSpeech::Verb)
        throw ParseError(nfile, lineno, "verb frames on non-verb synset '" + s.id + "'");
    }
    if (auto [it, inserted] = first_line.emplace(s.id, lineno); !inserted)
      throw ParseError(nfile, lineno,
                       "duplicate synset id '" + s.id + "' (first defined at line " + std::to_string(it->second) + ")");
    pos_of.emplace(s.id, s.pos);
    synsets.push_back(std::move(s));
  }

  std::vector<NamedEdge> edges;
  const auto elines = content_lines(edges_text);
  for (std::size_t ln = 0; ln < elines.size(); ++ln) {
    const auto line = strip_cr(elines[ln]);
    const auto lineno = ln + 1;
    if (skip_line(line)) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3)
      throw ParseError(efile, lineno, "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    auto rel = relation_from_name(trim(fields[0]));
    if (!rel) throw ParseError(efile, lineno, "unknown relation '" + std::string(trim(fields[0])) + "'");
    NamedEdge e{*rel, std::string(trim(fields[1])), std::string(trim(fields[2]))};
    auto from = pos_of.find(e.from);
    auto to = pos_of.find(e.to);
    if (from == pos_of.end()) throw ParseError(efile, lineno, "edge references unknown synset '" + e.from + "'");
    if (to == pos_of.end()) throw ParseError(efile, lineno, "edge references unknown synset '" + e.to + "'");
    if (!signature_allows(*rel, from->second, to->second))
      throw ParseError(efile, lineno,
                       std::string(relation_info(*rel).name) + " does not allow " +
                           std::string(pos_name(from->second)) + " -> " + std::string(pos_name(to->second)));
    edges.push_back(std::move(e));
  }

  auto graph = SenseGraph::from_parts(std::move(synsets), edges);
  auto violations = validate(graph);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::string ids;
    for (const auto& id : v.ids) ids += (ids.empty() ? "" : ",") + id;
    throw GraphError(v.rule + " violation: " + v.detail + (ids.empty() ? "" : " [" + ids + "]"));
  }
  return graph;
}

SenseGraph load_graph(const std::string& nodes_path, const std::string& edges_path) {
  return parse_graph(read_file(nodes_path), read_file(edges_path), nodes_path, edges_path);
}

std::string serialize_nodes(const SenseGraph& graph) {
  std::string out;
  for (const auto& s : graph.synsets()) {
    out += s.id;
    out += '\t';
    out += pos_letter(s.pos);
    out += '\t';
    for (std::size_t i = 0; i < s.words.size(); ++i) {
      if (i) out += ',';
      out += s.words[i];
    }
    out += '\t';
    out += s.gloss;
    out += '\t';
    for (std::size_t i = 0; i < s.frames.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(s.frames[i]);
    }
    out += '\n';
  }
  return out;
}

std::string serialize_edges(const SenseGraph& graph) {
  std::string out;
  for (const auto& e : graph.named_edges()) {
    out += relation_info(e.rel).name;
    out += '\t';
    out += e.from;
    out += '\t';
    out += e.to;
    out += '\n';
  }
  return out;
}

namespace {
std::vector<std::string> to_ids(const SenseGraph& g, std::span<const NodeIndex> nodes) {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (auto i : nodes) out.push_back(g.synset(i).id);
  return out;
}
}  // namespace

std::vector<std::string> immediate(const SenseGraph& graph, std::string_view node, Relation rel) {
  return to_ids(graph, graph.immediate(graph.index_of(node), rel));
}

std::vector<std::string> transitive(const SenseGraph& graph, std::string_view node, Relation rel) {
  return to_ids(graph, graph.transitive(graph.index_of(node), rel));
}

}  // namespace taxalign
