#include "taxalign/pipeline.hpp"

#include <algorithm>
#include <future>
#include <set>

namespace taxalign {

namespace {

StructuralConstraint hierarchy_aab() {
  return StructuralConstraint{HierarchySide::Both, Scope::Transitive, Scope::Transitive, 1.0};
}

void add_relations(ConstraintSet& cs, std::initializer_list<Relation> rels) {
  for (auto r : rels) cs.generalized.push_back({r, 1.0});
}

void add_heuristics(ConstraintSet& cs, PartOfSpeech pos) {
  cs.heuristic.push_back({SimilarityKind::Words, 1.0});
  cs.heuristic.push_back({SimilarityKind::Gloss, 1.0});
  if (pos == PartOfSpeech::Verb) cs.heuristic.push_back({SimilarityKind::Frames, 1.0});
}

ConstraintSet basic(PartOfSpeech pos) {
  ConstraintSet cs;
  switch (pos) {
    case PartOfSpeech::Noun: cs.structural.push_back(hierarchy_aab()); break;
    case PartOfSpeech::Verb:
      cs.structural.push_back(hierarchy_aab());
      add_relations(cs, {Relation::AlsoSee, Relation::Antonym});
      break;
    case PartOfSpeech::Adjective: add_relations(cs, {Relation::Antonym, Relation::SimilarTo, Relation::AlsoSee}); break;
    case PartOfSpeech::Adverb: add_relations(cs, {Relation::Antonym}); break;
  }
  return cs;
}

void add_extra(ConstraintSet& cs, PartOfSpeech pos) {
  if (pos == PartOfSpeech::Adjective)
    add_relations(cs, {Relation::ParticipleOf, Relation::Pertains, Relation::Attribute});
  else if (pos == PartOfSpeech::Adverb)
    add_relations(cs, {Relation::DerivedFrom});
}

std::string pos_list(const std::vector<PartOfSpeech>& v) {
  std::string out;
  for (auto p : v) out += (out.empty() ? "" : ",") + std::string(pos_name(p));
  return out;
}

}  // namespace

std::optional<Preset> preset_from_name(std::string_view name) {
  if (name == "basic") return Preset::Basic;
  if (name == "basic+wgf") return Preset::BasicWgf;
  if (name == "basic+extra") return Preset::BasicExtra;
  if (name == "full") return Preset::Full;
  if (name == "words") return Preset::WordsOnly;
  return std::nullopt;
}

std::string_view preset_name(Preset preset) {
  switch (preset) {
    case Preset::Basic: return "basic";
    case Preset::BasicWgf: return "basic+wgf";
    case Preset::BasicExtra: return "basic+extra";
    case Preset::Full: return "full";
    case Preset::WordsOnly: return "words";
  }
  return "?";
}

ConstraintSet preset_constraints(Preset preset, PartOfSpeech pos) {
  if (preset == Preset::WordsOnly) {
    ConstraintSet cs;
    cs.heuristic.push_back({SimilarityKind::Words, 1.0});
    return cs;
  }
  auto cs = basic(pos);
  if (preset == Preset::BasicWgf || preset == Preset::Full) add_heuristics(cs, pos);
  if (preset == Preset::BasicExtra || preset == Preset::Full) add_extra(cs, pos);
  return cs;
}

PhasePlan PhasePlan::standard(Preset preset) {
  PhasePlan plan;
  auto phase = [&](std::vector<PartOfSpeech> pos) {
    PhaseSpec spec;
    spec.pos = std::move(pos);
    for (auto p : spec.pos) spec.constraints[p] = preset_constraints(preset, p);
    plan.phases.push_back(std::move(spec));
  };
  phase({PartOfSpeech::Noun, PartOfSpeech::Verb});
  phase({PartOfSpeech::Adjective});
  phase({PartOfSpeech::Adverb});
  return plan;
}

void PhasePlan::override_constraints(PartOfSpeech pos, ConstraintSet cs) {
  for (auto& ph : phases)
    if (std::find(ph.pos.begin(), ph.pos.end(), pos) != ph.pos.end()) ph.constraints[pos] = cs;
}

void PhasePlan::restrict_to(const std::vector<PartOfSpeech>& keep) {
  for (auto& ph : phases) {
    std::erase_if(ph.pos, [&](PartOfSpeech p) { return std::find(keep.begin(), keep.end(), p) == keep.end(); });
    std::erase_if(ph.constraints, [&](const auto& kv) {
      return std::find(ph.pos.begin(), ph.pos.end(), kv.first) == ph.pos.end();
    });
  }
  std::erase_if(phases, [](const PhaseSpec& ph) { return ph.pos.empty(); });
}

void PhasePlan::check() const {
  std::set<PartOfSpeech> done;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const auto& ph = phases[i];
    for (auto p : ph.pos) {
      if (done.count(p) || std::count(ph.pos.begin(), ph.pos.end(), p) > 1)
        throw PlanError(std::string(pos_name(p)) + " is scheduled more than once");
      auto it = ph.constraints.find(p);
      if (it == ph.constraints.end())
        throw PlanError("phase " + std::to_string(i + 1) + " has no constraints for " + std::string(pos_name(p)));
      it->second.check();
      it->second.check_applicable(p);
      for (const auto& [rel, foreign] : it->second.cross_pos_dependencies(p))
        if (!done.count(foreign)) throw DependencyError(rel, foreign);
    }
    for (auto p : ph.pos) done.insert(p);
  }
}

MappingProblem build_problem(const SenseGraph& source, const SenseGraph& target, PartOfSpeech pos,
                             ConstraintSet constraints, const PhaseResults& frozen, const Stoplist& stoplist) {
  FrozenContext ctx;
  for (const auto& [rel, foreign] : constraints.cross_pos_dependencies(pos)) {
    auto it = frozen.find(foreign);
    if (it == frozen.end() || !it->second.frozen) throw DependencyError(rel, foreign);
    ctx[foreign] = it->second.frozen;
  }
  return MappingProblem(source, target, pos, std::move(constraints), std::move(ctx), stoplist);
}

PhaseResult run_phase(const MappingProblem& problem, const Settings& settings, const IterationObserver& observer) {
  auto result = run(problem, settings, observer);
  PhaseResult out;
  out.pos = problem.pos();
  out.mapping = extract_mapping(problem, result.final, settings.output_threshold);
  out.mapping.iterations = result.stats.iterations;
  out.mapping.converged = result.stats.converged;
  out.stats = result.stats;
  out.frozen = std::make_shared<const FrozenPhase>(FrozenPhase{problem.pos(), problem.space(), std::move(result.final)});
  return out;
}

PhaseResults run_all(const SenseGraph& source, const SenseGraph& target, const PhasePlan& plan,
                     const Settings& settings, const Stoplist& stoplist, const PhaseObserver& observer) {
  plan.check();
  settings.check();
  PhaseResults results;
  for (std::size_t i = 0; i < plan.phases.size(); ++i) {
    const auto& ph = plan.phases[i];
    auto solve = [&](PartOfSpeech pos) {
      auto problem = build_problem(source, target, pos, ph.constraints.at(pos), results, stoplist);
      IterationObserver it_obs;
      if (observer) it_obs = [&](int it, const Assignment& a) { observer(problem, it, a); };
      return run_phase(problem, settings, it_obs);
    };
    std::vector<PhaseResult> produced;
    try {
      if (settings.threads > 1 && ph.pos.size() > 1 && !observer) {
        std::vector<std::future<PhaseResult>> futures;
        for (auto pos : ph.pos) futures.push_back(std::async(std::launch::async, solve, pos));
        for (auto& f : futures) produced.push_back(f.get());
      } else {
        for (auto pos : ph.pos) produced.push_back(solve(pos));
      }
    } catch (const DependencyError&) {
      throw;
    } catch (const std::exception& e) {
      throw PlanError("phase " + std::to_string(i + 1) + " (" + pos_list(ph.pos) + "): " + e.what());
    }
    for (auto& r : produced) results.emplace(r.pos, std::move(r));
  }
  return results;
}

}  // namespace taxalign
