#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "taxalign/relaxation.hpp"

namespace taxalign {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reference answer for one sampled source synset. `no_correspondence`
/// marks a synset removed from the target resource; it is distinct from the
/// synset being absent from the sample.
struct GoldItem {
  bool no_correspondence = false;
  std::vector<std::string> targets;

  static GoldItem none() { return {true, {}}; }
  static GoldItem of(std::vector<std::string> t) { return {false, std::move(t)}; }
  friend bool operator==(const GoldItem&, const GoldItem&) = default;
};

struct GoldSample {
  std::map<std::string, GoldItem> items;

  /// Items whose source synset has part of speech `pos` in `source`.
  GoldSample restricted_to(const SenseGraph& source, PartOfSpeech pos) const;
  friend bool operator==(const GoldSample&, const GoldSample&) = default;
};

/// Scores for one population of sampled synsets.
///
/// Interval bounds: an answer P for gold G is optimistically correct when it
/// shares a target with G and pessimistically correct when it is non-empty
/// and contained in G. An answer to a removed synset is wrong at both
/// bounds; leaving a removed synset unanswered is a correct abstention that
/// enters neither precision nor recall.
struct PopulationScore {
  std::size_t sampled = 0;
  std::size_t answered = 0;
  std::size_t scoreable = 0;  // gold has a correspondence
  std::size_t correct_optimistic = 0;
  std::size_t correct_pessimistic = 0;
  std::size_t correct_abstentions = 0;

  double coverage() const { return ratio(answered, sampled); }
  double precision_low() const { return ratio(correct_pessimistic, answered); }
  double precision_high() const { return ratio(correct_optimistic, answered); }
  double recall_low() const { return ratio(correct_pessimistic, scoreable); }
  double recall_high() const { return ratio(correct_optimistic, scoreable); }

 private:
  static double ratio(std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  }
};

struct EvalReport {
  PartOfSpeech pos = PartOfSpeech::Noun;
  PopulationScore ambiguous;
  PopulationScore non_ambiguous;
  PopulationScore overall;
};

/// Variables with at least two candidate labels, and the rest (including
/// variables without candidates). Returned as source ids.
std::pair<std::vector<std::string>, std::vector<std::string>> partition_ambiguity(const MappingProblem& problem);
std::pair<std::vector<std::string>, std::vector<std::string>> partition_ambiguity(const SenseGraph& source,
                                                                                  const LabelSpace& space);

/// Throws EvalError if a gold id is not a variable or has no mapping entry.
EvalReport evaluate(const Mapping& mapping, const GoldSample& gold, const MappingProblem& problem);
EvalReport evaluate(const Mapping& mapping, const GoldSample& gold, const SenseGraph& source,
                    const LabelSpace& space);

/// Aligned table with one row per part of speech and the columns
/// Cover. / ambiguous / overall; cells hold low--high intervals.
std::string render_table(const std::vector<EvalReport>& reports, bool recall = false);
/// `key=value` lines, e.g. `n.overall.precision_low=0.976000`.
std::string render_key_values(const std::vector<EvalReport>& reports);

}  // namespace taxalign
