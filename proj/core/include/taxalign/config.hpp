#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "taxalign/constraints.hpp"
#include "taxalign/pipeline.hpp"
#include "taxalign/relaxation.hpp"

namespace taxalign {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contents of a run configuration file. Every field is optional so that
/// command-line flags can be layered on top and built-in defaults below.
///
///   # comment
///   preset full                  basic | basic+wgf | basic+extra | full | words
///   threshold 0.5
///   epsilon 1e-4
///   max_iters 500
///   seed 7
///   init uniform                 uniform | random
///   threads 4
///   stoplist stop.txt            relative to the config file
///   source_nodes a.nodes         (also source_edges, target_nodes,
///                                 target_edges, gold, output)
///   structural aab 1.0           constraint lines before any `pos` header
///   pos v                        replace every preset with the lines that
///   heuristic F                  apply to that POS; after a header they
///                                replace that POS's preset
struct RunFile {
  std::optional<Preset> preset;
  std::optional<double> threshold;
  std::optional<double> epsilon;
  std::optional<int> max_iterations;
  std::optional<std::uint64_t> seed;
  std::optional<InitMode> init;
  std::optional<unsigned> threads;
  std::optional<std::string> stoplist;
  std::map<std::string, std::string> paths;

  std::optional<ConstraintSet> global_constraints;
  std::map<PartOfSpeech, ConstraintSet> pos_constraints;

  /// Standard plan for the preset with the file's constraint overrides.
  PhasePlan plan(Preset fallback = Preset::Full) const;
  /// Overlays the file's values on `base`.
  Settings apply(Settings base) const;
};

/// Path keys accepted by the run file.
inline constexpr std::string_view kRunFilePathKeys[] = {"source_nodes", "source_edges", "target_nodes",
                                                       "target_edges", "gold",         "output"};

/// Throws ConfigError with `name:line:` prefixes. Relative paths are resolved
/// against `base_dir` when it is non-empty.
RunFile parse_run_file(std::string_view text, std::string_view name = "config", const std::string& base_dir = "");
RunFile load_run_file(const std::string& path);

}  // namespace taxalign
