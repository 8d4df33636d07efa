#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "taxalign/constraints.hpp"
#include "taxalign/graph.hpp"
#include "taxalign/labeling.hpp"
#include "taxalign/text.hpp"

namespace taxalign {

/// Every source synset of `pos` with its candidate_labels() in the target.
LabelSpace candidate_space(const SenseGraph& source, const SenseGraph& target, PartOfSpeech pos);

/// One consistent-labelling problem: every source synset of one part of
/// speech is a variable whose labels are its candidate target synsets.
///
/// The graphs are borrowed and must outlive the problem. State-independent
/// heuristic contributions are computed once at construction.
class MappingProblem {
 public:
  /// Variables are all source synsets of `pos`; labels come from
  /// candidate_labels(). Throws ConstraintError (DependencyError for a
  /// missing frozen phase) when the constraint set cannot be applied.
  MappingProblem(const SenseGraph& source, const SenseGraph& target, PartOfSpeech pos, ConstraintSet constraints,
                 FrozenContext frozen = {}, Stoplist stoplist = Stoplist::english());

  /// Explicit label space, for fixtures and reordering experiments.
  MappingProblem(const SenseGraph& source, const SenseGraph& target, PartOfSpeech pos, LabelSpace space,
                 ConstraintSet constraints, FrozenContext frozen = {}, Stoplist stoplist = Stoplist::english());

  PartOfSpeech pos() const { return pos_; }
  const SenseGraph& source() const { return *source_; }
  const SenseGraph& target() const { return *target_; }
  const LabelSpace& space() const { return space_; }
  const ConstraintSet& constraints() const { return constraints_; }
  const FrozenContext& frozen() const { return frozen_; }
  const Stoplist& stoplist() const { return stoplist_; }

  std::size_t variable_count() const { return space_.variable_count(); }
  bool unmappable(std::size_t v) const { return space_.labels(v).empty(); }

  /// Normalized total support of label `label` of variable `v` under `state`.
  double support(std::size_t v, std::size_t label, const Assignment& state) const;
  /// Per-constraint weighted contributions, in ConstraintSet::names() order.
  std::vector<double> support_breakdown(std::size_t v, std::size_t label, const Assignment& state) const;

 private:
  void prepare();

  const SenseGraph* source_;
  const SenseGraph* target_;
  PartOfSpeech pos_;
  LabelSpace space_;
  ConstraintSet constraints_;
  FrozenContext frozen_;
  Stoplist stoplist_;
  double total_weight_ = 0.0;
  std::vector<double> heuristic_;  // per flat label

  // Matched context connections of every (flat label, contextual constraint)
  // cell, found once: the structure does not change between iterations.
  // A term reads the current weight at `position`, or is the fixed weight
  // of a frozen earlier phase when position == kFrozen.
  struct ContextRef {
    static constexpr std::uint32_t kFrozen = 0xffffffffu;
    std::uint32_t position;
    double frozen_weight;
  };
  std::vector<std::size_t> context_offsets_;  // label_count * contextual + 1
  std::vector<ContextRef> context_;
};

enum class InitMode { Uniform, Random };

struct Settings {
  InitMode init = InitMode::Uniform;
  std::uint64_t seed = 0;
  double epsilon = 1e-4;
  int max_iterations = 500;
  double output_threshold = 0.5;
  /// Worker threads for one update step; 1 runs everything inline.
  unsigned threads = 1;

  void check() const;
};

Assignment initialize(const MappingProblem& problem, InitMode mode, std::uint64_t seed = 0);

struct StepResult {
  Assignment next;
  double max_delta = 0.0;
};

/// Synchronous update: all supports are computed against `state`, then
/// w'(l) = w(l)(1 + S(l)) / sum_k w(k)(1 + S(k)).
StepResult update_step(const MappingProblem& problem, const Assignment& state, unsigned threads = 1);

struct RunStats {
  int iterations = 0;
  double final_max_delta = 0.0;
  bool converged = false;
  double wall_seconds = 0.0;
};

struct RunResult {
  Assignment final;
  RunStats stats;
};

/// Called with iteration 0 for the initial state, then after every step.
using IterationObserver = std::function<void(int iteration, const Assignment& state)>;

RunResult run(const MappingProblem& problem, const Settings& settings, const IterationObserver& observer = {});

struct MappingEntry {
  std::string source;
  /// Sorted by descending weight, then id.
  std::vector<std::pair<std::string, double>> targets;

  bool covered() const { return !targets.empty(); }
  bool ambiguous() const { return targets.size() > 1; }
};

struct Mapping {
  PartOfSpeech pos = PartOfSpeech::Noun;
  /// Sorted by source id.
  std::vector<MappingEntry> entries;
  int iterations = 0;
  bool converged = false;

  const MappingEntry* find(std::string_view source) const;
  double coverage() const;
};

/// Keeps every label whose weight reaches `threshold` (within 1e-9).
Mapping extract_mapping(const MappingProblem& problem, const Assignment& final, double threshold);

}  // namespace taxalign
