#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "taxalign/constraints.hpp"
#include "taxalign/relaxation.hpp"

namespace taxalign {

/// Named constraint recipes per part of speech.
///   basic       hierarchy (aa, both sides) plus same-POS relations in ii mode
///   basic+wgf   basic plus word/gloss similarity (and frames for verbs)
///   basic+extra basic plus cross-POS relations
///   full        basic + wgf + extra
///   words       word similarity alone, as a baseline
enum class Preset { Basic, BasicWgf, BasicExtra, Full, WordsOnly };

std::optional<Preset> preset_from_name(std::string_view name);
std::string_view preset_name(Preset preset);
ConstraintSet preset_constraints(Preset preset, PartOfSpeech pos);

struct PhaseSpec {
  std::vector<PartOfSpeech> pos;
  std::map<PartOfSpeech, ConstraintSet> constraints;
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PhasePlan {
  std::vector<PhaseSpec> phases;

  /// [{noun, verb}, {adjective}, {adverb}] with the preset's constraints.
  static PhasePlan standard(Preset preset = Preset::Full);

  /// Replaces the constraint set used for `pos`, wherever it is scheduled.
  void override_constraints(PartOfSpeech pos, ConstraintSet cs);
  /// Drops every part of speech not in `keep` (empty phases are removed).
  void restrict_to(const std::vector<PartOfSpeech>& keep);

  /// Each POS appears once and only depends on strictly earlier phases.
  /// Throws DependencyError / PlanError.
  void check() const;
};

/// Immutable outcome of solving one part of speech.
struct PhaseResult {
  PartOfSpeech pos = PartOfSpeech::Noun;
  Mapping mapping;
  RunStats stats;
  std::shared_ptr<const FrozenPhase> frozen;
};

using PhaseResults = std::map<PartOfSpeech, PhaseResult>;

/// Builds the problem for `pos`, wiring in the frozen weights the
/// constraints need. Throws DependencyError naming the relation and the
/// missing part of speech.
MappingProblem build_problem(const SenseGraph& source, const SenseGraph& target, PartOfSpeech pos,
                             ConstraintSet constraints, const PhaseResults& frozen,
                             const Stoplist& stoplist = Stoplist::english());

PhaseResult run_phase(const MappingProblem& problem, const Settings& settings,
                      const IterationObserver& observer = {});

/// Observer hook for tracing; when set, phases run sequentially.
using PhaseObserver =
    std::function<void(const MappingProblem& problem, int iteration, const Assignment& state)>;

/// Runs every phase in order. Problems within a phase are independent and
/// run concurrently when settings.threads > 1.
PhaseResults run_all(const SenseGraph& source, const SenseGraph& target, const PhasePlan& plan,
                     const Settings& settings, const Stoplist& stoplist = Stoplist::english(),
                     const PhaseObserver& observer = {});

}  // namespace taxalign
