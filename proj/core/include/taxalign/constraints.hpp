#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "taxalign/graph.hpp"
#include "taxalign/labeling.hpp"
#include "taxalign/text.hpp"

namespace taxalign {

class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cross-POS constraint needs the frozen result of an earlier phase that
/// is not available.
class DependencyError : public ConstraintError {
 public:
  DependencyError(Relation relation, PartOfSpeech missing);
  Relation relation() const { return relation_; }
  PartOfSpeech missing() const { return missing_; }

 private:
  Relation relation_;
  PartOfSpeech missing_;
};

/// A candidate link between a source synset and a target synset.
struct Connection {
  NodeIndex source;
  NodeIndex target;
};

// Suffix letters of the structural constraint names: e = hypernym side,
// o = hyponym side, b = both.
enum class HierarchySide { Hypernym, Hyponym, Both };

// Scope letters: i = immediate neighbours, a = the transitive closure along
// the side's direction (ancestors for hypernyms, descendants for hyponyms).
enum class Scope { Immediate, Transitive };

struct StructuralConstraint {
  HierarchySide side = HierarchySide::Both;
  Scope source_scope = Scope::Immediate;
  Scope target_scope = Scope::Immediate;
  double weight = 1.0;

  /// Three-letter code such as "iib" or "aae".
  std::string code() const;
  static std::optional<StructuralConstraint> from_code(std::string_view scopes, std::string_view side,
                                                       double weight = 1.0);
};

/// s1 R s2 and t1 R t2 for an arbitrary relation R; immediate neighbours.
struct GeneralizedConstraint {
  Relation relation = Relation::Antonym;
  double weight = 1.0;
};

enum class SimilarityKind { Words, Gloss, Frames };

char similarity_letter(SimilarityKind kind);
std::optional<SimilarityKind> similarity_from_letter(std::string_view s);

struct HeuristicConstraint {
  SimilarityKind kind = SimilarityKind::Words;
  double weight = 1.0;
};

struct ConstraintSet {
  std::vector<StructuralConstraint> structural;
  std::vector<GeneralizedConstraint> generalized;
  std::vector<HeuristicConstraint> heuristic;

  std::size_t size() const { return structural.size() + generalized.size() + heuristic.size(); }
  double total_weight() const;
  /// Throws ConstraintError unless non-empty with positive total weight and
  /// every weight finite and non-negative.
  void check() const;
  /// Human-readable names in evaluation order: structural, generalized, heuristic.
  std::vector<std::string> names() const;
  /// Foreign parts of speech reached by generalized constraints from `pos`.
  std::vector<std::pair<Relation, PartOfSpeech>> cross_pos_dependencies(PartOfSpeech pos) const;
  /// Throws ConstraintError if a constraint cannot be applied to `pos`.
  void check_applicable(PartOfSpeech pos) const;
};

/// Textual form used in configuration files, one constraint per line.
std::string format_constraint_set(const ConstraintSet& cs);

/// Constraint-set configuration: `structural`, `generalized`, `heuristic`
/// and `stoplist` lines. See docs in README for the grammar.
struct ConstraintConfig {
  ConstraintSet constraints;
  std::optional<std::string> stoplist_path;
};
ConstraintConfig parse_constraint_config(std::string_view text, std::string_view name = "config");

/// Parses a single `structural|generalized|heuristic ...` line split into
/// tokens. Returns false if the key is not a constraint key.
bool parse_constraint_tokens(const std::vector<std::string_view>& tokens, ConstraintSet& into);

/// Target synsets of the same POS sharing at least one word with `source`,
/// sorted by id (which is index order).
std::vector<NodeIndex> candidate_labels(const Synset& source, const SenseGraph& target);

/// Raw coincidence count (set semantics).
int similarity(SimilarityKind kind, const Synset& s, const Synset& t, const Stoplist& stoplist);

double structural_support(Connection conn, const StructuralConstraint& c, const WeightState& state,
                          const SenseGraph& source, const SenseGraph& target);

double generalized_support(Connection conn, const GeneralizedConstraint& c, const WeightState& state,
                           const FrozenContext& frozen, const SenseGraph& source, const SenseGraph& target);

/// A matched context connection s2 -> t2 and its current weight.
struct ContextTerm {
  NodeIndex source;
  NodeIndex target;
  double weight;
};

/// The context connections summed by structural_support / generalized_support,
/// before the constraint weight is applied. For tracing.
std::vector<ContextTerm> structural_terms(Connection conn, const StructuralConstraint& c, const WeightState& state,
                                          const SenseGraph& source, const SenseGraph& target);
std::vector<ContextTerm> generalized_terms(Connection conn, const GeneralizedConstraint& c, const WeightState& state,
                                           const FrozenContext& frozen, const SenseGraph& source,
                                           const SenseGraph& target);

/// weight * similarity / max(1, min set size); independent of the state.
double heuristic_support(Connection conn, const HeuristicConstraint& c, const SenseGraph& source,
                         const SenseGraph& target, const Stoplist& stoplist);

/// Weighted contribution of every constraint, in ConstraintSet::names() order.
std::vector<double> support_breakdown(Connection conn, const ConstraintSet& cs, const WeightState& state,
                                      const FrozenContext& frozen, const SenseGraph& source,
                                      const SenseGraph& target, const Stoplist& stoplist);

/// Sum of all contributions divided by the total constraint weight.
double total_support(Connection conn, const ConstraintSet& cs, const WeightState& state, const FrozenContext& frozen,
                     const SenseGraph& source, const SenseGraph& target, const Stoplist& stoplist);

/// Combines per-family sums into the normalized total. Shared by every
/// caller so cached and uncached paths agree bit for bit.
inline double combine_support(double structural, double generalized, double heuristic, double total_weight) {
  return (structural + generalized + heuristic) / total_weight;
}

}  // namespace taxalign
