#include "taxalign/constraints.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace taxalign {

namespace {

// Calls f(i, j) for every a[i] == b[j]; both inputs sorted and unique.
template <class F>
void for_each_common(std::span<const NodeIndex> a, std::span<const NodeIndex> b, F&& f) {
  if (a.empty() || b.empty()) return;
  if (a.size() * 8 < b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto it = std::lower_bound(b.begin(), b.end(), a[i]);
      if (it != b.end() && *it == a[i]) f(i, static_cast<std::size_t>(it - b.begin()));
    }
  } else if (b.size() * 8 < a.size()) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      auto it = std::lower_bound(a.begin(), a.end(), b[j]);
      if (it != a.end() && *it == b[j]) f(static_cast<std::size_t>(it - a.begin()), j);
    }
  } else {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j]) {
        ++i;
      } else if (b[j] < a[i]) {
        ++j;
      } else {
        f(i, j);
        ++i;
        ++j;
      }
    }
  }
}

std::span<const NodeIndex> neighbourhood(const SenseGraph& g, NodeIndex n, Relation rel, Scope scope) {
  return scope == Scope::Immediate ? g.immediate(n, rel) : g.transitive(n, rel);
}

// Adds the weight of every context connection s2 -> t2 with s2 in `sources`
// and t2 in `targets`.
void gather_terms(std::span<const NodeIndex> sources, std::span<const NodeIndex> targets, const LabelSpace& space,
                  const Assignment& weights, std::vector<double>& terms) {
  for (auto s2 : sources) {
    auto slot = space.slot_of(s2);
    if (!slot) continue;
    const auto labels = space.labels(*slot);
    const auto row = weights.row(*slot);
    for_each_common(labels, targets, [&](std::size_t i, std::size_t) { terms.push_back(row[i]); });
  }
}

// Same traversal as gather_terms, keeping the matched pair with each weight.
void gather_pairs(std::span<const NodeIndex> sources, std::span<const NodeIndex> targets, const LabelSpace& space,
                  const Assignment& weights, std::vector<ContextTerm>& out) {
  for (auto s2 : sources) {
    auto slot = space.slot_of(s2);
    if (!slot) continue;
    const auto labels = space.labels(*slot);
    const auto row = weights.row(*slot);
    for_each_common(labels, targets, [&](std::size_t i, std::size_t) { out.push_back({s2, labels[i], row[i]}); });
  }
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

template <class T>
std::size_t intersection_size(const std::vector<T>& a, const std::vector<T>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

struct ComparedSets {
  std::size_t common;
  std::size_t smaller;
};

ComparedSets compare_sets(SimilarityKind kind, const Synset& s, const Synset& t, const Stoplist& stoplist) {
  switch (kind) {
    case SimilarityKind::Words: {
      auto a = sorted_unique(s.words);
      auto b = sorted_unique(t.words);
      return {intersection_size(a, b), std::min(a.size(), b.size())};
    }
    case SimilarityKind::Gloss: {
      auto a = content_words(s.gloss, stoplist);
      auto b = content_words(t.gloss, stoplist);
      return {intersection_size(a, b), std::min(a.size(), b.size())};
    }
    case SimilarityKind::Frames: {
      if (s.pos != PartOfSpeech::Verb || t.pos != PartOfSpeech::Verb)
        throw ConstraintError("frame similarity requested on non-verb synsets '" + s.id + "', '" + t.id + "'");
      auto a = sorted_unique(s.frames);
      auto b = sorted_unique(t.frames);
      return {intersection_size(a, b), std::min(a.size(), b.size())};
    }
  }
  return {0, 0};
}

std::optional<double> parse_weight(std::string_view s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string format_weight(double w) {
  std::ostringstream os;
  os << w;
  return os.str();
}

}  // namespace

DependencyError::DependencyError(Relation relation, PartOfSpeech missing)
    : ConstraintError("constraint on relation '" + std::string(relation_info(relation).name) +
                      "' needs the frozen " + std::string(pos_name(missing)) + " mapping of an earlier phase"),
      relation_(relation),
      missing_(missing) {}

std::string StructuralConstraint::code() const {
  std::string out;
  out += source_scope == Scope::Immediate ? 'i' : 'a';
  out += target_scope == Scope::Immediate ? 'i' : 'a';
  switch (side) {
    case HierarchySide::Hypernym: out += 'e'; break;
    case HierarchySide::Hyponym: out += 'o'; break;
    case HierarchySide::Both: out += 'b'; break;
  }
  return out;
}

std::optional<StructuralConstraint> StructuralConstraint::from_code(std::string_view scopes, std::string_view side,
                                                                    double weight) {
  if (scopes.size() != 2 || side.size() != 1) return std::nullopt;
  auto scope = [](char c) -> std::optional<Scope> {
    if (c == 'i') return Scope::Immediate;
    if (c == 'a') return Scope::Transitive;
    return std::nullopt;
  };
  auto src = scope(scopes[0]);
  auto tgt = scope(scopes[1]);
  if (!src || !tgt) return std::nullopt;
  StructuralConstraint c;
  c.source_scope = *src;
  c.target_scope = *tgt;
  c.weight = weight;
  switch (side[0]) {
    case 'e': c.side = HierarchySide::Hypernym; break;
    case 'o': c.side = HierarchySide::Hyponym; break;
    case 'b': c.side = HierarchySide::Both; break;
    default: return std::nullopt;
  }
  return c;
}

char similarity_letter(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::Words: return 'W';
    case SimilarityKind::Gloss: return 'G';
    case SimilarityKind::Frames: return 'F';
  }
  return '?';
}

std::optional<SimilarityKind> similarity_from_letter(std::string_view s) {
  if (s == "w" || s == "W") return SimilarityKind::Words;
  if (s == "g" || s == "G") return SimilarityKind::Gloss;
  if (s == "f" || s == "F") return SimilarityKind::Frames;
  return std::nullopt;
}

double ConstraintSet::total_weight() const {
  double w = 0.0;
  for (const auto& c : structural) w += c.weight;
  for (const auto& c : generalized) w += c.weight;
  for (const auto& c : heuristic) w += c.weight;
  return w;
}

void ConstraintSet::check() const {
  if (size() == 0) throw ConstraintError("constraint set is empty");
  auto ok = [](double w) { return std::isfinite(w) && w >= 0.0; };
  for (const auto& c : structural)
    if (!ok(c.weight)) throw ConstraintError("structural constraint weight must be finite and non-negative");
  for (const auto& c : generalized)
    if (!ok(c.weight)) throw ConstraintError("generalized constraint weight must be finite and non-negative");
  for (const auto& c : heuristic)
    if (!ok(c.weight)) throw ConstraintError("heuristic constraint weight must be finite and non-negative");
  if (!(total_weight() > 0.0)) throw ConstraintError("total constraint weight must be positive");
}

std::vector<std::string> ConstraintSet::names() const {
  std::vector<std::string> out;
  for (const auto& c : structural) out.push_back("structural " + c.code());
  for (const auto& c : generalized) out.push_back("generalized " + std::string(relation_info(c.relation).name));
  for (const auto& c : heuristic) out.push_back(std::string("heuristic ") + similarity_letter(c.kind));
  return out;
}

std::vector<std::pair<Relation, PartOfSpeech>> ConstraintSet::cross_pos_dependencies(PartOfSpeech pos) const {
  std::vector<std::pair<Relation, PartOfSpeech>> out;
  for (const auto& c : generalized) {
    auto to = relation_target_pos(c.relation, pos);
    if (to && *to != pos) out.emplace_back(c.relation, *to);
  }
  return out;
}

void ConstraintSet::check_applicable(PartOfSpeech pos) const {
  if (!structural.empty() && pos != PartOfSpeech::Noun && pos != PartOfSpeech::Verb)
    throw ConstraintError("structural hypernym constraints do not apply to " + std::string(pos_name(pos)) + "s");
  for (const auto& c : generalized)
    if (!relation_target_pos(c.relation, pos))
      throw ConstraintError("relation '" + std::string(relation_info(c.relation).name) + "' does not apply to " +
                            std::string(pos_name(pos)) + "s");
  for (const auto& c : heuristic)
    if (c.kind == SimilarityKind::Frames && pos != PartOfSpeech::Verb)
      throw ConstraintError("frame constraint only applies to verbs");
}

std::string format_constraint_set(const ConstraintSet& cs) {
  std::string out;
  for (const auto& c : cs.structural) {
    auto code = c.code();
    out += "structural " + code.substr(0, 2) + " " + code.substr(2) + " " + format_weight(c.weight) + "\n";
  }
  for (const auto& c : cs.generalized)
    out += "generalized " + std::string(relation_info(c.relation).name) + " " + format_weight(c.weight) + "\n";
  for (const auto& c : cs.heuristic)
    out += std::string("heuristic ") + similarity_letter(c.kind) + " " + format_weight(c.weight) + "\n";
  return out;
}

bool parse_constraint_tokens(const std::vector<std::string_view>& tok, ConstraintSet& into) {
  if (tok.empty()) return false;
  const auto key = tok[0];
  auto weight_at = [&](std::size_t i) -> double {
    if (tok.size() <= i) return 1.0;
    if (tok.size() > i + 1) throw ConstraintError("trailing tokens after weight");
    auto w = parse_weight(tok[i]);
    if (!w || !std::isfinite(*w) || *w < 0.0)
      throw ConstraintError("invalid weight '" + std::string(tok[i]) + "'");
    return *w;
  };
  if (key == "structural") {
    if (tok.size() < 2) throw ConstraintError("structural needs a scope pair and a side, e.g. 'structural aa b'");
    std::optional<StructuralConstraint> c;
    if (tok[1].size() == 3) {
      c = StructuralConstraint::from_code(tok[1].substr(0, 2), tok[1].substr(2), weight_at(2));
    } else {
      if (tok.size() < 3) throw ConstraintError("structural needs a scope pair and a side");
      c = StructuralConstraint::from_code(tok[1], tok[2], weight_at(3));
    }
    if (!c) throw ConstraintError("bad structural constraint code");
    into.structural.push_back(*c);
    return true;
  }
  if (key == "generalized") {
    if (tok.size() < 2) throw ConstraintError("generalized needs a relation name");
    auto rel = relation_from_name(tok[1]);
    if (!rel) throw ConstraintError("unknown relation '" + std::string(tok[1]) + "'");
    into.generalized.push_back({*rel, weight_at(2)});
    return true;
  }
  if (key == "heuristic") {
    if (tok.size() < 2) throw ConstraintError("heuristic needs one of w, g, f");
    auto kind = similarity_from_letter(tok[1]);
    if (!kind) throw ConstraintError("unknown heuristic '" + std::string(tok[1]) + "'");
    into.heuristic.push_back({*kind, weight_at(2)});
    return true;
  }
  return false;
}

namespace {
std::vector<std::string_view> words_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}
}  // namespace

ConstraintConfig parse_constraint_config(std::string_view text, std::string_view name) {
  ConstraintConfig cfg;
  auto lines = split(text, '\n');
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    auto tok = words_of(line);
    const auto where = std::string(name) + ":" + std::to_string(ln + 1) + ": ";
    try {
      if (tok[0] == "stoplist") {
        if (tok.size() != 2) throw ConstraintError("stoplist takes one path");
        cfg.stoplist_path = std::string(tok[1]);
      } else if (!parse_constraint_tokens(tok, cfg.constraints)) {
        throw ConstraintError("unknown key '" + std::string(tok[0]) + "'");
      }
    } catch (const ConstraintError& e) {
      throw ConstraintError(where + e.what());
    }
  }
  cfg.constraints.check();
  return cfg;
}

std::vector<NodeIndex> candidate_labels(const Synset& source, const SenseGraph& target) {
  std::vector<NodeIndex> out;
  for (const auto& w : source.words) {
    auto hits = target.lookup_word(source.pos, w);
    out.insert(out.end(), hits.begin(), hits.end());
  }
  return sorted_unique(std::move(out));
}

int similarity(SimilarityKind kind, const Synset& s, const Synset& t, const Stoplist& stoplist) {
  return static_cast<int>(compare_sets(kind, s, t, stoplist).common);
}

double structural_support(Connection conn, const StructuralConstraint& c, const WeightState& state,
                          const SenseGraph& source, const SenseGraph& target) {
  thread_local std::vector<double> terms;
  terms.clear();
  auto side = [&](Relation rel) {
    gather_terms(neighbourhood(source, conn.source, rel, c.source_scope),
                 neighbourhood(target, conn.target, rel, c.target_scope), state.space, state.weights, terms);
  };
  if (c.side != HierarchySide::Hyponym) side(Relation::Hypernym);
  if (c.side != HierarchySide::Hypernym) side(Relation::Hyponym);
  return c.weight * order_free_sum(terms);
}

double generalized_support(Connection conn, const GeneralizedConstraint& c, const WeightState& state,
                           const FrozenContext& frozen, const SenseGraph& source, const SenseGraph& target) {
  thread_local std::vector<double> terms;
  terms.clear();
  const auto own_pos = source.synset(conn.source).pos;
  const auto targets = target.immediate(conn.target, c.relation);
  for (auto s2 : source.immediate(conn.source, c.relation)) {
    const auto pos2 = source.synset(s2).pos;
    const LabelSpace* space = &state.space;
    const Assignment* weights = &state.weights;
    if (pos2 != own_pos) {
      auto it = frozen.find(pos2);
      if (it == frozen.end() || !it->second) throw DependencyError(c.relation, pos2);
      space = &it->second->space;
      weights = &it->second->weights;
    }
    const std::array<NodeIndex, 1> one{s2};
    gather_terms(one, targets, *space, *weights, terms);
  }
  return c.weight * order_free_sum(terms);
}

std::vector<ContextTerm> structural_terms(Connection conn, const StructuralConstraint& c, const WeightState& state,
                                          const SenseGraph& source, const SenseGraph& target) {
  std::vector<ContextTerm> out;
  auto side = [&](Relation rel) {
    gather_pairs(neighbourhood(source, conn.source, rel, c.source_scope),
                 neighbourhood(target, conn.target, rel, c.target_scope), state.space, state.weights, out);
  };
  if (c.side != HierarchySide::Hyponym) side(Relation::Hypernym);
  if (c.side != HierarchySide::Hypernym) side(Relation::Hyponym);
  return out;
}

std::vector<ContextTerm> generalized_terms(Connection conn, const GeneralizedConstraint& c, const WeightState& state,
                                           const FrozenContext& frozen, const SenseGraph& source,
                                           const SenseGraph& target) {
  std::vector<ContextTerm> out;
  const auto own_pos = source.synset(conn.source).pos;
  const auto targets = target.immediate(conn.target, c.relation);
  for (auto s2 : source.immediate(conn.source, c.relation)) {
    const auto pos2 = source.synset(s2).pos;
    const LabelSpace* space = &state.space;
    const Assignment* weights = &state.weights;
    if (pos2 != own_pos) {
      auto it = frozen.find(pos2);
      if (it == frozen.end() || !it->second) throw DependencyError(c.relation, pos2);
      space = &it->second->space;
      weights = &it->second->weights;
    }
    const std::array<NodeIndex, 1> one{s2};
    gather_pairs(one, targets, *space, *weights, out);
  }
  return out;
}

double heuristic_support(Connection conn, const HeuristicConstraint& c, const SenseGraph& source,
                         const SenseGraph& target, const Stoplist& stoplist) {
  const auto cmp = compare_sets(c.kind, source.synset(conn.source), target.synset(conn.target), stoplist);
  const auto normalizer = static_cast<double>(std::max<std::size_t>(1, cmp.smaller));
  return c.weight * (static_cast<double>(cmp.common) / normalizer);
}

std::vector<double> support_breakdown(Connection conn, const ConstraintSet& cs, const WeightState& state,
                                      const FrozenContext& frozen, const SenseGraph& source,
                                      const SenseGraph& target, const Stoplist& stoplist) {
  std::vector<double> out;
  out.reserve(cs.size());
  for (const auto& c : cs.structural) out.push_back(structural_support(conn, c, state, source, target));
  for (const auto& c : cs.generalized) out.push_back(generalized_support(conn, c, state, frozen, source, target));
  for (const auto& c : cs.heuristic) out.push_back(heuristic_support(conn, c, source, target, stoplist));
  return out;
}

double total_support(Connection conn, const ConstraintSet& cs, const WeightState& state, const FrozenContext& frozen,
                     const SenseGraph& source, const SenseGraph& target, const Stoplist& stoplist) {
  double s = 0.0, g = 0.0, h = 0.0;
  for (const auto& c : cs.structural) s += structural_support(conn, c, state, source, target);
  for (const auto& c : cs.generalized) g += generalized_support(conn, c, state, frozen, source, target);
  for (const auto& c : cs.heuristic) h += heuristic_support(conn, c, source, target, stoplist);
  return combine_support(s, g, h, cs.total_weight());
}

}  // namespace taxalign
