#include "taxalign/relaxation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace taxalign {

LabelSpace candidate_space(const SenseGraph& source, const SenseGraph& target, PartOfSpeech pos) {
  std::vector<NodeIndex> variables;
  std::vector<std::vector<NodeIndex>> labels;
  for (NodeIndex i = 0; i < source.size(); ++i) {
    const auto& s = source.synset(i);
    if (s.pos != pos) continue;
    variables.push_back(i);
    labels.push_back(candidate_labels(s, target));
  }
  return LabelSpace(source.size(), std::move(variables), std::move(labels));
}

namespace {

// Splits [0, n) into contiguous chunks and runs body(begin, end) on each.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(threads, n);
  std::vector<std::jthread> workers;
  workers.reserve(chunks);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    workers.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

MappingProblem::MappingProblem(const SenseGraph& source, const SenseGraph& target, PartOfSpeech pos,
                               ConstraintSet constraints, FrozenContext frozen, Stoplist stoplist)
    : MappingProblem(source, target, pos, candidate_space(source, target, pos), std::move(constraints),
                     std::move(frozen), std::move(stoplist)) {}

MappingProblem::MappingProblem(const SenseGraph& source, const SenseGraph& target, PartOfSpeech pos, LabelSpace space,
                               ConstraintSet constraints, FrozenContext frozen, Stoplist stoplist)
    : source_(&source),
      target_(&target),
      pos_(pos),
      space_(std::move(space)),
      constraints_(std::move(constraints)),
      frozen_(std::move(frozen)),
      stoplist_(std::move(stoplist)) {
  prepare();
}

void MappingProblem::prepare() {
  constraints_.check();
  constraints_.check_applicable(pos_);
  for (const auto& [rel, foreign] : constraints_.cross_pos_dependencies(pos_)) {
    auto it = frozen_.find(foreign);
    if (it == frozen_.end() || !it->second) throw DependencyError(rel, foreign);
  }
  total_weight_ = constraints_.total_weight();
  heuristic_.assign(space_.label_count(), 0.0);
  for (std::size_t v = 0; v < space_.variable_count(); ++v) {
    const auto labels = space_.labels(v);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const Connection conn{space_.variable(v), labels[k]};
      double h = 0.0;
      for (const auto& c : constraints_.heuristic) h += heuristic_support(conn, c, *source_, *target_, stoplist_);
      heuristic_[space_.offsets()[v] + k] = h;
    }
  }

  // The weights only decide the term values, so a zero state finds them all.
  const Assignment zero(space_);
  const WeightState ws{space_, zero};
  const std::size_t contextual = constraints_.structural.size() + constraints_.generalized.size();
  context_offsets_.assign(1, 0);
  context_offsets_.reserve(space_.label_count() * contextual + 1);
  context_.clear();
  auto add = [&](const std::vector<ContextTerm>& terms) {
    for (const auto& t : terms) {
      if (source_->synset(t.source).pos == pos_) {
        context_.push_back({static_cast<std::uint32_t>(*space_.position(t.source, t.target)), 0.0});
      } else {
        context_.push_back({ContextRef::kFrozen, t.weight});
      }
    }
    context_offsets_.push_back(context_.size());
  };
  for (std::size_t v = 0; v < space_.variable_count(); ++v) {
    for (const auto t : space_.labels(v)) {
      const Connection conn{space_.variable(v), t};
      for (const auto& c : constraints_.structural) add(structural_terms(conn, c, ws, *source_, *target_));
      for (const auto& c : constraints_.generalized)
        add(generalized_terms(conn, c, ws, frozen_, *source_, *target_));
    }
  }
}

double MappingProblem::support(std::size_t v, std::size_t label, const Assignment& state) const {
  // Same terms and summation order as total_support, read from the index.
  const std::size_t flat = space_.offsets()[v] + label;
  const std::size_t contextual = constraints_.structural.size() + constraints_.generalized.size();
  thread_local std::vector<double> terms;
  auto cell = [&](std::size_t k, double weight) {
    terms.clear();
    const auto cell_index = flat * contextual + k;
    for (auto i = context_offsets_[cell_index]; i < context_offsets_[cell_index + 1]; ++i) {
      const auto& ref = context_[i];
      terms.push_back(ref.position == ContextRef::kFrozen ? ref.frozen_weight : state.at(ref.position));
    }
    return weight * order_free_sum(terms);
  };
  double s = 0.0, g = 0.0;
  std::size_t k = 0;
  for (const auto& c : constraints_.structural) s += cell(k++, c.weight);
  for (const auto& c : constraints_.generalized) g += cell(k++, c.weight);
  return combine_support(s, g, heuristic_[flat], total_weight_);
}

std::vector<double> MappingProblem::support_breakdown(std::size_t v, std::size_t label,
                                                      const Assignment& state) const {
  const Connection conn{space_.variable(v), space_.labels(v)[label]};
  return taxalign::support_breakdown(conn, constraints_, WeightState{space_, state}, frozen_, *source_, *target_,
                                     stoplist_);
}

void Settings::check() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (!(output_threshold > 0.0 && output_threshold <= 1.0))
    throw std::invalid_argument("output threshold must be in (0, 1]");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

Assignment initialize(const MappingProblem& problem, InitMode mode, std::uint64_t seed) {
  Assignment a(problem.space());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  for (std::size_t v = 0; v < a.variable_count(); ++v) {
    auto row = a.row(v);
    if (row.empty()) continue;
    if (row.size() == 1) {
      row[0] = 1.0;
      continue;
    }
    if (mode == InitMode::Uniform) {
      std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
    } else {
      for (auto& w : row) w = dist(rng);
      std::vector<double> tmp(row.begin(), row.end());
      const double sum = order_free_sum(tmp);
      for (auto& w : row) w /= sum;
    }
  }
  return a;
}

StepResult update_step(const MappingProblem& problem, const Assignment& state, unsigned threads) {
  StepResult out{state, 0.0};
  const auto n = problem.variable_count();
  std::vector<double> chunk_delta(std::max(1u, threads), 0.0);
  std::atomic<std::size_t> chunk_id{0};

  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    const auto my_chunk = chunk_id.fetch_add(1);
    double local_delta = 0.0;
    std::vector<double> supports, scaled;
    for (std::size_t v = begin; v < end; ++v) {
      const auto old_row = state.row(v);
      if (old_row.size() < 2) continue;
      supports.resize(old_row.size());
      for (std::size_t k = 0; k < old_row.size(); ++k) supports[k] = problem.support(v, k, state);
      if (std::all_of(supports.begin(), supports.end(), [&](double s) { return s == supports.front(); })) continue;

      auto new_row = out.next.row(v);
      scaled.resize(old_row.size());
      for (std::size_t k = 0; k < old_row.size(); ++k) scaled[k] = old_row[k] * (1.0 + supports[k]);
      std::vector<double> tmp = scaled;
      const double denom = order_free_sum(tmp);
      for (std::size_t k = 0; k < old_row.size(); ++k) new_row[k] = scaled[k] / denom;
      tmp.assign(new_row.begin(), new_row.end());
      const double renorm = order_free_sum(tmp);
      for (std::size_t k = 0; k < old_row.size(); ++k) {
        new_row[k] /= renorm;
        local_delta = std::max(local_delta, std::abs(new_row[k] - old_row[k]));
      }
    }
    chunk_delta[my_chunk] = local_delta;
  });

  out.max_delta = *std::max_element(chunk_delta.begin(), chunk_delta.end());
  return out;
}

RunResult run(const MappingProblem& problem, const Settings& settings, const IterationObserver& observer) {
  settings.check();
  const auto start = std::chrono::steady_clock::now();
  RunResult result{initialize(problem, settings.init, settings.seed), {}};
  if (observer) observer(0, result.final);
  if (problem.variable_count() == 0) {
    result.stats.converged = true;
  } else {
    for (int it = 1; it <= settings.max_iterations; ++it) {
      auto step = update_step(problem, result.final, settings.threads);
      result.final = std::move(step.next);
      result.stats.iterations = it;
      result.stats.final_max_delta = step.max_delta;
      if (observer) observer(it, result.final);
      if (step.max_delta < settings.epsilon) {
        result.stats.converged = true;
        break;
      }
    }
  }
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

const MappingEntry* Mapping::find(std::string_view source) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), source,
                             [](const MappingEntry& e, std::string_view id) { return e.source < id; });
  if (it == entries.end() || it->source != source) return nullptr;
  return &*it;
}

double Mapping::coverage() const {
  if (entries.empty()) return 0.0;
  const auto covered = std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.covered(); });
  return static_cast<double>(covered) / static_cast<double>(entries.size());
}

Mapping extract_mapping(const MappingProblem& problem, const Assignment& final, double threshold) {
  constexpr double kSlack = 1e-9;
  Mapping m;
  m.pos = problem.pos();
  const auto& space = problem.space();
  m.entries.reserve(space.variable_count());
  for (std::size_t v = 0; v < space.variable_count(); ++v) {
    MappingEntry e;
    e.source = problem.source().synset(space.variable(v)).id;
    const auto labels = space.labels(v);
    const auto row = final.row(v);
    for (std::size_t k = 0; k < labels.size(); ++k)
      if (row[k] + kSlack >= threshold) e.targets.emplace_back(problem.target().synset(labels[k]).id, row[k]);
    std::sort(e.targets.begin(), e.targets.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    m.entries.push_back(std::move(e));
  }
  std::sort(m.entries.begin(), m.entries.end(),
            [](const MappingEntry& a, const MappingEntry& b) { return a.source < b.source; });
  return m;
}

}  // namespace taxalign
