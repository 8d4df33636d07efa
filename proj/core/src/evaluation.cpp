#include "taxalign/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace taxalign {

GoldSample GoldSample::restricted_to(const SenseGraph& source, PartOfSpeech pos) const {
  GoldSample out;
  for (const auto& [id, item] : items) {
    auto i = source.find(id);
    if (i && source.synset(*i).pos == pos) out.items.emplace(id, item);
  }
  return out;
}

std::pair<std::vector<std::string>, std::vector<std::string>> partition_ambiguity(const SenseGraph& source,
                                                                                  const LabelSpace& space) {
  std::pair<std::vector<std::string>, std::vector<std::string>> out;
  for (std::size_t v = 0; v < space.variable_count(); ++v) {
    const auto& id = source.synset(space.variable(v)).id;
    (space.labels(v).size() >= 2 ? out.first : out.second).push_back(id);
  }
  return out;
}

std::pair<std::vector<std::string>, std::vector<std::string>> partition_ambiguity(const MappingProblem& problem) {
  return partition_ambiguity(problem.source(), problem.space());
}

EvalReport evaluate(const Mapping& mapping, const GoldSample& gold, const MappingProblem& problem) {
  auto report = evaluate(mapping, gold, problem.source(), problem.space());
  report.pos = problem.pos();
  return report;
}

EvalReport evaluate(const Mapping& mapping, const GoldSample& gold, const SenseGraph& source,
                    const LabelSpace& space) {
  EvalReport report;
  report.pos = mapping.pos;
  for (const auto& [id, item] : gold.items) {
    auto node = source.find(id);
    if (!node) throw EvalError("gold synset '" + id + "' is not in the source graph");
    auto slot = space.slot_of(*node);
    if (!slot) throw EvalError("gold synset '" + id + "' is not a variable of the " +
                               std::string(pos_name(mapping.pos)) + " problem");
    const auto* entry = mapping.find(id);
    if (!entry) throw EvalError("gold synset '" + id + "' has no entry in the mapping");

    auto& pop = space.labels(*slot).size() >= 2 ? report.ambiguous : report.non_ambiguous;
    for (PopulationScore* p : {&pop, &report.overall}) {
      ++p->sampled;
      const bool answered = entry->covered();
      if (answered) ++p->answered;
      if (item.no_correspondence) {
        if (!answered) ++p->correct_abstentions;
        continue;
      }
      ++p->scoreable;
      if (!answered) continue;
      const std::set<std::string> g(item.targets.begin(), item.targets.end());
      bool any = false, all = true;
      for (const auto& [t, w] : entry->targets) {
        (void)w;
        if (g.count(t))
          any = true;
        else
          all = false;
      }
      if (any) ++p->correct_optimistic;
      if (all) ++p->correct_pessimistic;
    }
  }
  return report;
}

namespace {

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * x);
  return buf;
}

std::string interval(double lo, double hi, std::size_t denom) {
  if (denom == 0) return "--";
  return percent(lo) + "--" + percent(hi);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

char row_letter(PartOfSpeech pos) {
  return static_cast<char>(pos_letter(pos) - 'a' + 'A');
}

}  // namespace

std::string render_table(const std::vector<EvalReport>& reports, bool recall) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"", "Cover.", "ambiguous", "overall"});
  for (const auto& r : reports) {
    auto cell = [&](const PopulationScore& p) {
      return recall ? interval(p.recall_low(), p.recall_high(), p.scoreable)
                    : interval(p.precision_low(), p.precision_high(), p.answered);
    };
    rows.push_back({std::string(1, row_letter(r.pos)),
                    r.overall.sampled ? percent(r.overall.coverage()) : std::string("--"), cell(r.ambiguous),
                    cell(r.overall)});
  }
  std::vector<std::size_t> width(4, 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out = recall ? "recall intervals\n" : "precision intervals\n";
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += pad(row[c], width[c]);
      if (c + 1 < row.size()) line += " | ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string render_key_values(const std::vector<EvalReport>& reports) {
  std::string out;
  char buf[160];
  for (const auto& r : reports) {
    const char p = pos_letter(r.pos);
    const std::pair<const char*, const PopulationScore*> pops[] = {
        {"ambiguous", &r.ambiguous}, {"non_ambiguous", &r.non_ambiguous}, {"overall", &r.overall}};
    for (const auto& [name, s] : pops) {
      auto kv_count = [&](const char* key, std::size_t v) {
        std::snprintf(buf, sizeof buf, "%c.%s.%s=%zu\n", p, name, key, v);
        out += buf;
      };
      auto kv_real = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%c.%s.%s=%.6f\n", p, name, key, v);
        out += buf;
      };
      kv_count("sampled", s->sampled);
      kv_count("answered", s->answered);
      kv_count("scoreable", s->scoreable);
      kv_count("correct_optimistic", s->correct_optimistic);
      kv_count("correct_pessimistic", s->correct_pessimistic);
      kv_count("correct_abstentions", s->correct_abstentions);
      kv_real("coverage", s->coverage());
      kv_real("precision_low", s->precision_low());
      kv_real("precision_high", s->precision_high());
      kv_real("recall_low", s->recall_low());
      kv_real("recall_high", s->recall_high());
    }
  }
  return out;
}

}  // namespace taxalign
