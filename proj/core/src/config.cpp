#include "taxalign/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>

#include "taxalign/text.hpp"

namespace taxalign {

namespace {

std::vector<std::string_view> words_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
T number(std::string_view key, std::string_view text) {
  T value{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || p != text.data() + text.size())
    throw ConfigError("bad value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

std::string resolve(std::string_view path, const std::string& base_dir) {
  std::filesystem::path p{std::string(path)};
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  return p.string();
}

// The subset of `cs` that can be applied to `pos`.
ConstraintSet applicable_part(const ConstraintSet& cs, PartOfSpeech pos) {
  ConstraintSet out;
  auto fits = [&](ConstraintSet single) {
    try {
      single.check_applicable(pos);
      return true;
    } catch (const ConstraintError&) {
      return false;
    }
  };
  for (const auto& c : cs.structural)
    if (fits(ConstraintSet{{c}, {}, {}})) out.structural.push_back(c);
  for (const auto& c : cs.generalized)
    if (fits(ConstraintSet{{}, {c}, {}})) out.generalized.push_back(c);
  for (const auto& c : cs.heuristic)
    if (fits(ConstraintSet{{}, {}, {c}})) out.heuristic.push_back(c);
  return out;
}

}  // namespace

PhasePlan RunFile::plan(Preset fallback) const {
  auto out = PhasePlan::standard(preset.value_or(fallback));
  for (auto pos : kAllPos) {
    auto it = pos_constraints.find(pos);
    if (it != pos_constraints.end())
      out.override_constraints(pos, it->second);
    else if (global_constraints) {
      auto part = applicable_part(*global_constraints, pos);
      if (part.size() > 0) out.override_constraints(pos, std::move(part));
    }
  }
  return out;
}

Settings RunFile::apply(Settings base) const {
  if (threshold) base.output_threshold = *threshold;
  if (epsilon) base.epsilon = *epsilon;
  if (max_iterations) base.max_iterations = *max_iterations;
  if (seed) base.seed = *seed;
  if (init) base.init = *init;
  if (threads) base.threads = *threads;
  return base;
}

RunFile parse_run_file(std::string_view text, std::string_view name, const std::string& base_dir) {
  RunFile rf;
  std::optional<PartOfSpeech> section;
  auto lines = split(text, '\n');
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    const auto where = std::string(name) + ":" + std::to_string(ln + 1) + ": ";
    auto tok = words_of(line);
    // a token starting with '#' begins a trailing comment
    tok.erase(std::find_if(tok.begin(), tok.end(), [](std::string_view t) { return t.front() == '#'; }), tok.end());
    const auto key = tok[0];
    try {
      auto one = [&]() {
        if (tok.size() != 2) throw ConfigError(std::string(key) + " takes exactly one value");
        return tok[1];
      };
      if (key == "pos") {
        auto pos = pos_from_letter(one());
        if (!pos) throw ConfigError("unknown part of speech '" + std::string(tok[1]) + "'");
        if (rf.pos_constraints.count(*pos)) throw ConfigError("duplicate section for " + std::string(tok[1]));
        rf.pos_constraints[*pos];
        section = pos;
      } else if (key == "structural" || key == "generalized" || key == "heuristic") {
        auto& cs = section ? rf.pos_constraints[*section]
                           : (rf.global_constraints ? *rf.global_constraints : rf.global_constraints.emplace());
        parse_constraint_tokens(tok, cs);
      } else if (section) {
        throw ConfigError("only constraint lines may follow a pos header, got '" + std::string(key) + "'");
      } else if (key == "preset") {
        auto p = preset_from_name(one());
        if (!p) throw ConfigError("unknown preset '" + std::string(tok[1]) + "'");
        rf.preset = p;
      } else if (key == "threshold") {
        rf.threshold = number<double>(key, one());
      } else if (key == "epsilon") {
        rf.epsilon = number<double>(key, one());
      } else if (key == "max_iters") {
        rf.max_iterations = number<int>(key, one());
      } else if (key == "seed") {
        rf.seed = number<std::uint64_t>(key, one());
      } else if (key == "threads") {
        rf.threads = number<unsigned>(key, one());
      } else if (key == "init") {
        const auto v = one();
        if (v == "uniform")
          rf.init = InitMode::Uniform;
        else if (v == "random")
          rf.init = InitMode::Random;
        else
          throw ConfigError("init must be uniform or random");
      } else if (key == "stoplist") {
        rf.stoplist = resolve(one(), base_dir);
      } else if (std::find(std::begin(kRunFilePathKeys), std::end(kRunFilePathKeys), key) !=
                 std::end(kRunFilePathKeys)) {
        rf.paths[std::string(key)] = resolve(one(), base_dir);
      } else {
        throw ConfigError("unknown key '" + std::string(key) + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const ConstraintError& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    if (rf.global_constraints) rf.global_constraints->check();
    for (auto& [pos, cs] : rf.pos_constraints) {
      cs.check();
      cs.check_applicable(pos);
    }
  } catch (const ConstraintError& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  }
  return rf;
}

RunFile load_run_file(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_run_file(read_file(path), path, dir);
}

}  // namespace taxalign
