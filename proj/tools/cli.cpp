#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "taxalign/config.hpp"
#include "taxalign/evaluation.hpp"
#include "taxalign/graph.hpp"
#include "taxalign/mapping_io.hpp"
#include "taxalign/pipeline.hpp"
#include "taxalign/relaxation.hpp"
#include "taxalign/synth.hpp"
#include "taxalign/text.hpp"

namespace taxalign::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string path_help(const std::string& key) {
  static const std::map<std::string, std::string> help = {
      {"source_nodes", "source synsets file"},       {"source_edges", "source relations file"},
      {"target_nodes", "target synsets file"},       {"target_edges", "target relations file"},
      {"gold", "gold sample file"},                  {"output", "output prefix (same as -o)"},
  };
  auto it = help.find(key);
  return it == help.end() ? std::string() : it->second;
}

// Flags shared by every subcommand. Values only take effect when the flag
// was given, so that config-file values survive otherwise.
struct CommonFlags {
  std::string config;
  std::uint64_t seed = 0;
  double threshold = 0.0;
  double epsilon = 0.0;
  int max_iters = 0;
  unsigned threads = 1;
  std::string trace;
  std::string preset;
  std::string pos;
  std::string stoplist;
  std::map<std::string, std::string> paths;

  std::map<std::string, CLI::Option*> given;

  void attach(CLI::App& app, const std::vector<std::string>& path_keys) {
    given["config"] = app.add_option("--config", config, "run configuration file");
    given["seed"] = app.add_option("--seed", seed, "seed for random initialization or generation");
    given["threshold"] = app.add_option("--threshold", threshold, "output weight threshold (default 0.5)");
    given["epsilon"] = app.add_option("--epsilon", epsilon, "convergence bound on weight change (default 1e-4)");
    given["max-iters"] = app.add_option("--max-iters", max_iters, "iteration cap (default 500)");
    given["threads"] = app.add_option("--threads", threads, "worker threads; 1 is fully sequential");
    given["trace"] = app.add_option("--trace", trace, "comma-separated source ids to trace");
    given["preset"] = app.add_option("--preset", preset, "basic | basic+wgf | basic+extra | full | words");
    given["pos"] = app.add_option("--pos", pos, "comma-separated parts of speech to map (n,v,a,r)");
    given["stoplist"] = app.add_option("--stoplist", stoplist, "stopword file for gloss similarity");
    for (const auto& key : path_keys) {
      auto flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      given[key] = app.add_option(flag, paths[key], path_help(key));
    }
  }

  bool has(const std::string& key) const {
    auto it = given.find(key);
    return it != given.end() && it->second->count() > 0;
  }
};

std::vector<std::string> comma_list(std::string_view s) {
  std::vector<std::string> out;
  for (auto part : split(s, ',')) {
    part = trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

std::vector<PartOfSpeech> pos_list(std::string_view s) {
  std::vector<PartOfSpeech> out;
  for (const auto& p : comma_list(s)) {
    auto pos = pos_from_letter(p);
    if (!pos) throw UsageError("unknown part of speech '" + p + "'");
    out.push_back(*pos);
  }
  return out;
}

// Everything one pipeline invocation needs, after layering
// flags > config file > defaults.
struct RunConfig {
  std::map<std::string, std::string> paths;
  Settings settings;
  PhasePlan plan;
  Stoplist stoplist = Stoplist::english();
  std::vector<std::string> trace;

  const std::string& path(const std::string& key) const {
    auto it = paths.find(key);
    if (it == paths.end() || it->second.empty()) {
      auto flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      throw UsageError("missing " + flag + " (or `" + key + "` in the config file)");
    }
    return it->second;
  }
};

RunConfig resolve(const CommonFlags& f) {
  RunConfig rc;
  RunFile file;
  if (f.has("config")) file = load_run_file(f.config);

  rc.settings = file.apply(Settings{});
  if (f.has("seed")) rc.settings.seed = f.seed;
  if (f.has("threshold")) rc.settings.output_threshold = f.threshold;
  if (f.has("epsilon")) rc.settings.epsilon = f.epsilon;
  if (f.has("max-iters")) rc.settings.max_iterations = f.max_iters;
  if (f.has("threads")) rc.settings.threads = f.threads;
  rc.settings.check();

  if (f.has("preset")) {
    file.preset = preset_from_name(f.preset);
    if (!file.preset) throw UsageError("unknown preset '" + f.preset + "'");
  }
  rc.plan = file.plan();
  if (f.has("pos")) rc.plan.restrict_to(pos_list(f.pos));
  rc.plan.check();

  if (f.has("stoplist"))
    rc.stoplist = Stoplist::from_file(f.stoplist);
  else if (file.stoplist)
    rc.stoplist = Stoplist::from_file(*file.stoplist);

  rc.paths = file.paths;
  for (const auto& [key, value] : f.paths)
    if (f.has(key)) rc.paths[key] = value;
  if (f.has("trace")) rc.trace = comma_list(f.trace);
  return rc;
}

std::pair<SenseGraph, SenseGraph> load_graphs(const RunConfig& rc) {
  // resolve paths in a fixed order so the first missing one is reported
  const auto source_nodes = rc.path("source_nodes");
  const auto source_edges = rc.path("source_edges");
  const auto target_nodes = rc.path("target_nodes");
  const auto target_edges = rc.path("target_edges");
  auto source = load_graph(source_nodes, source_edges);
  auto target = load_graph(target_nodes, target_edges);
  return {std::move(source), std::move(target)};
}

std::string output_path(const std::string& prefix, PartOfSpeech pos) {
  return prefix + "." + pos_letter(pos);
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Per-iteration support traces for a set of source ids.
class Tracer {
 public:
  Tracer(const SenseGraph& source, const std::vector<std::string>& ids, std::ostream& out, std::ostream& err)
      : out_(out) {
    for (const auto& id : ids) {
      if (source.find(id))
        wanted_.insert(id);
      else
        err << "warning: trace id '" << id << "' is not in the source graph\n";
    }
  }

  bool active() const { return !wanted_.empty(); }

  void operator()(const MappingProblem& problem, int iteration, const Assignment& state) {
    const auto& src = problem.source();
    const auto& tgt = problem.target();
    auto names = problem.constraints().names();
    for (auto& n : names) std::replace(n.begin(), n.end(), ' ', ':');
    for (std::size_t v = 0; v < problem.variable_count(); ++v) {
      const auto& id = src.synset(problem.space().variable(v)).id;
      if (!wanted_.count(id)) continue;
      const auto labels = problem.space().labels(v);
      if (labels.size() <= 1) {
        if (iteration == 0) {
          out_ << "trace " << id << " (" << pos_letter(problem.pos()) << "): ";
          if (labels.empty())
            out_ << "no candidates\n";
          else
            out_ << "single candidate " << tgt.synset(labels[0]).id << ", weight 1.000000 throughout\n";
        }
        continue;
      }
      if (iteration == 0) {
        out_ << "trace " << id << " (" << pos_letter(problem.pos()) << ")\n";
        out_ << "  candidates:";
        for (auto t : labels) out_ << ' ' << tgt.synset(t).id;
        out_ << "\n  constraints:";
        for (const auto& n : names) out_ << ' ' << n;
        out_ << '\n';
      }
      out_ << "  iteration " << iteration << '\n';
      const auto row = state.row(v);
      for (std::size_t l = 0; l < labels.size(); ++l) {
        out_ << "    " << tgt.synset(labels[l]).id << " weight=" << fixed(row[l], 6)
             << " support=" << exact(problem.support(v, l, state));
        const auto parts = problem.support_breakdown(v, l, state);
        for (std::size_t c = 0; c < parts.size(); ++c) out_ << ' ' << names[c] << '=' << exact(parts[c]);
        out_ << '\n';
        context(problem, Connection{problem.space().variable(v), labels[l]}, state, names);
      }
      auto& snap = last_[id];
      snap.clear();
      for (std::size_t l = 0; l < labels.size(); ++l) snap.emplace_back(tgt.synset(labels[l]).id, row[l]);
    }
  }

  void finish() {
    for (const auto& [id, snap] : last_) {
      out_ << "final " << id << ':';
      for (const auto& [target, weight] : snap) out_ << ' ' << target << '=' << fixed(weight, 6);
      out_ << '\n';
    }
  }

 private:
  // Lists the context connections behind the structural and generalized terms.
  void context(const MappingProblem& problem, Connection conn, const Assignment& state,
               const std::vector<std::string>& names) {
    const WeightState ws{problem.space(), state};
    const auto& cs = problem.constraints();
    std::size_t c = 0;
    auto show = [&](const std::vector<ContextTerm>& terms) {
      for (const auto& t : terms)
        if (t.weight > 0.0)
          out_ << "      via " << names[c] << ' ' << problem.source().synset(t.source).id << "->"
               << problem.target().synset(t.target).id << ' ' << fixed(t.weight, 6) << '\n';
      ++c;
    };
    for (const auto& k : cs.structural) show(structural_terms(conn, k, ws, problem.source(), problem.target()));
    for (const auto& k : cs.generalized)
      show(generalized_terms(conn, k, ws, problem.frozen(), problem.source(), problem.target()));
  }

  // Last observed (target, weight) row per traced id; problems do not
  // outlive their phase, so rows are copied out.
  using Snapshot = std::vector<std::pair<std::string, double>>;
  std::ostream& out_;
  std::set<std::string> wanted_;
  std::map<std::string, Snapshot> last_;
};

int cmd_map(const CommonFlags& flags, const std::string& out_prefix, std::ostream& out, std::ostream& err) {
  auto rc = resolve(flags);
  auto prefix = out_prefix.empty() ? rc.path("output") : out_prefix;
  const auto dir = fs::path(prefix).parent_path();
  if (!dir.empty() && !fs::is_directory(dir)) throw UsageError("output directory " + dir.string() + " does not exist");
  auto [source, target] = load_graphs(rc);

  Tracer tracer(source, rc.trace, err, err);
  PhaseObserver observer;
  if (tracer.active())
    observer = [&](const MappingProblem& p, int it, const Assignment& a) { tracer(p, it, a); };
  const auto results = run_all(source, target, rc.plan, rc.settings, rc.stoplist, observer);
  tracer.finish();

  // Nothing is written until every phase has succeeded.
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& [pos, r] : results) files.emplace_back(output_path(prefix, pos), format_mapping(r.mapping));
  for (const auto& [path, text] : files) write_file_atomic(path, text);

  out << "pos  variables  ambiguous  iterations  converged  coverage\n";
  for (const auto& [pos, r] : results) {
    const auto space = r.frozen->space;
    std::size_t ambiguous = 0;
    for (std::size_t v = 0; v < space.variable_count(); ++v) ambiguous += space.labels(v).size() >= 2;
    char line[160];
    std::snprintf(line, sizeof line, "%-4c %10zu %10zu %11d  %-9s  %.4f\n", pos_letter(pos), space.variable_count(),
                  ambiguous, r.stats.iterations, r.stats.converged ? "yes" : "no", r.mapping.coverage());
    out << line;
  }
  return 0;
}

int cmd_eval(const CommonFlags& flags, const std::string& mapping_prefix, std::ostream& out) {
  auto rc = resolve(flags);
  auto prefix = mapping_prefix.empty() ? rc.path("output") : mapping_prefix;
  auto [source, target] = load_graphs(rc);
  const auto gold = parse_gold(read_file(rc.path("gold")), rc.path("gold"));

  std::set<PartOfSpeech> wanted;
  if (flags.has("pos"))
    for (auto p : pos_list(flags.pos)) wanted.insert(p);
  std::vector<EvalReport> reports;
  for (auto pos : kAllPos) {
    if (!wanted.empty() && !wanted.count(pos)) continue;
    const auto sample = gold.restricted_to(source, pos);
    const auto path = output_path(prefix, pos);
    if (sample.items.empty()) continue;
    const auto mapping = parse_mapping(read_file(path), pos, path);
    reports.push_back(evaluate(mapping, sample, source, candidate_space(source, target, pos)));
  }
  for (const auto& [id, item] : gold.items) {
    (void)item;
    if (!source.find(id)) throw EvalError("gold synset '" + id + "' is not in the source graph");
  }
  out << render_table(reports, false) << '\n' << render_table(reports, true) << '\n' << render_key_values(reports);
  return 0;
}

int cmd_gen(const CommonFlags& flags, const std::string& synth_path, const std::string& out_dir,
            const std::string& sample, std::ostream& out) {
  SynthConfig cfg;
  if (!synth_path.empty()) cfg = parse_synth_config(read_file(synth_path));
  if (flags.has("seed")) cfg.seed = flags.seed;
  cfg.check();
  if (!fs::is_directory(out_dir)) throw UsageError("output directory " + out_dir + " does not exist");

  auto data = generate(cfg);
  auto gold = data.gold;
  if (!sample.empty()) {
    std::map<PartOfSpeech, std::size_t> counts;
    for (const auto& item : comma_list(sample)) {
      const auto eq = item.find('=');
      auto pos = eq == std::string::npos ? std::nullopt : pos_from_letter(item.substr(0, eq));
      if (!pos) throw UsageError("sample entries look like n=190, got '" + item + "'");
      counts[*pos] = static_cast<std::size_t>(std::stoull(item.substr(eq + 1)));
    }
    gold = sample_gold(gold, data.source, counts, cfg.seed);
  }
  const fs::path d(out_dir);
  const std::pair<const char*, std::string> files[] = {
      {"source.nodes", serialize_nodes(data.source)}, {"source.edges", serialize_edges(data.source)},
      {"target.nodes", serialize_nodes(data.target)}, {"target.edges", serialize_edges(data.target)},
      {"gold.tsv", format_gold(gold)}};
  for (const auto& [name, text] : files) write_file_atomic((d / name).string(), text);
  out << "generated " << data.source.size() << " source and " << data.target.size() << " target synsets, "
      << gold.items.size() << " gold items in " << out_dir << '\n';
  return 0;
}

int cmd_inspect(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  auto rc = resolve(flags);
  if (rc.trace.empty()) throw UsageError("inspect needs --trace <id,...>");
  auto [source, target] = load_graphs(rc);
  Tracer tracer(source, rc.trace, out, err);
  if (!tracer.active()) return 0;
  run_all(source, target, rc.plan, rc.settings, rc.stoplist,
          [&](const MappingProblem& p, int it, const Assignment& a) { tracer(p, it, a); });
  tracer.finish();
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taxonomy alignment by relaxation labelling"};
  app.name("taxalign");
  app.require_subcommand(1);

  const std::vector<std::string> graph_keys = {"source_nodes", "source_edges", "target_nodes", "target_edges"};

  CommonFlags map_flags, eval_flags, gen_flags, inspect_flags;
  std::string map_out, eval_mapping, gen_synth, gen_out = ".", gen_sample;

  auto* map = app.add_subcommand("map", "map every part of speech of the source onto the target");
  auto map_keys = graph_keys;
  map_keys.push_back("output");
  map_flags.attach(*map, map_keys);
  map->add_option("--out,-o", map_out, "output prefix; files get .n/.v/.a/.r suffixes");

  auto* eval = app.add_subcommand("eval", "score mapping files against a gold sample");
  auto eval_keys = graph_keys;
  eval_keys.push_back("gold");
  eval_flags.attach(*eval, eval_keys);
  eval->add_option("--mapping,-m", eval_mapping, "mapping prefix written by `map`");

  auto* gen = app.add_subcommand("gen", "generate a synthetic source/target pair with gold");
  gen_flags.attach(*gen, {});
  gen->add_option("--synth", gen_synth, "generator settings file");
  gen->add_option("--out-dir,-o", gen_out, "directory for the generated files");
  gen->add_option("--sample", gen_sample, "gold subsample per POS, e.g. n=190,v=100");

  auto* inspect = app.add_subcommand("inspect", "trace per-constraint supports for selected synsets");
  inspect_flags.attach(*inspect, graph_keys);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*map) return cmd_map(map_flags, map_out, out, err);
    if (*eval) return cmd_eval(eval_flags, eval_mapping, out);
    if (*gen) return cmd_gen(gen_flags, gen_synth, gen_out, gen_sample, out);
    if (*inspect) return cmd_inspect(inspect_flags, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace taxalign::cli
