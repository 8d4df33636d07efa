#include "taxalign/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <variant>

#include "taxalign/text.hpp"

namespace taxalign {

namespace {

// Portable draws on top of mt19937_64 (std distributions are
// implementation-defined, which would break cross-platform determinism).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Field = std::variant<double SynthConfig::*, std::size_t SynthConfig::*>;

const std::vector<std::pair<std::string_view, Field>>& fields() {
  static const std::vector<std::pair<std::string_view, Field>> table = {
      {"node_count", &SynthConfig::node_count},
      {"noun_share", &SynthConfig::noun_share},
      {"verb_share", &SynthConfig::verb_share},
      {"adjective_share", &SynthConfig::adjective_share},
      {"adverb_share", &SynthConfig::adverb_share},
      {"max_branching", &SynthConfig::max_branching},
      {"multi_parent_rate", &SynthConfig::multi_parent_rate},
      {"verb_root_rate", &SynthConfig::verb_root_rate},
      {"word_pool_size", &SynthConfig::word_pool_size},
      {"max_words", &SynthConfig::max_words},
      {"polysemy_rate", &SynthConfig::polysemy_rate},
      {"antonym_rate", &SynthConfig::antonym_rate},
      {"also_see_rate", &SynthConfig::also_see_rate},
      {"similar_to_rate", &SynthConfig::similar_to_rate},
      {"participle_rate", &SynthConfig::participle_rate},
      {"pertains_rate", &SynthConfig::pertains_rate},
      {"attribute_rate", &SynthConfig::attribute_rate},
      {"derived_rate", &SynthConfig::derived_rate},
      {"gloss_words", &SynthConfig::gloss_words},
      {"gloss_vocabulary", &SynthConfig::gloss_vocabulary},
      {"frame_count", &SynthConfig::frame_count},
      {"max_frames", &SynthConfig::max_frames},
      {"node_delete", &SynthConfig::node_delete},
      {"node_split", &SynthConfig::node_split},
      {"word_rename", &SynthConfig::word_rename},
      {"edge_rewire", &SynthConfig::edge_rewire},
      {"gloss_edit", &SynthConfig::gloss_edit},
  };
  return table;
}

std::string make_id(PartOfSpeech pos, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%06zu", pos_letter(pos), i);
  return buf;
}

enum class Fate { Keep, Split, Delete };

struct SourceNode {
  Synset synset;
  std::size_t order;  // creation order within its POS
};

}  // namespace

void SynthConfig::check() const {
  if (node_count < 1) throw SynthError("node_count must be at least 1");
  const double shares[] = {noun_share, verb_share, adjective_share, adverb_share};
  double total = 0.0;
  for (double s : shares) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw SynthError("POS shares must be non-negative");
    total += s;
  }
  if (!(total > 0.0)) throw SynthError("at least one POS share must be positive");
  const std::pair<const char*, double> rates[] = {
      {"multi_parent_rate", multi_parent_rate}, {"verb_root_rate", verb_root_rate},
      {"polysemy_rate", polysemy_rate},         {"antonym_rate", antonym_rate},
      {"also_see_rate", also_see_rate},         {"similar_to_rate", similar_to_rate},
      {"participle_rate", participle_rate},     {"pertains_rate", pertains_rate},
      {"attribute_rate", attribute_rate},       {"derived_rate", derived_rate},
      {"node_delete", node_delete},             {"node_split", node_split},
      {"word_rename", word_rename},             {"edge_rewire", edge_rewire},
      {"gloss_edit", gloss_edit}};
  for (const auto& [name, r] : rates)
    if (!(r >= 0.0 && r <= 1.0)) throw SynthError(std::string(name) + " must be in [0, 1]");
  if (node_delete + node_split > 1.0) throw SynthError("node_delete + node_split must not exceed 1");
  if (max_words < 1) throw SynthError("max_words must be at least 1");
  if (gloss_vocabulary < 1) throw SynthError("gloss_vocabulary must be at least 1");
  if (frame_count < 1 || max_frames < 1) throw SynthError("frame_count and max_frames must be at least 1");
  if (max_frames > frame_count) throw SynthError("max_frames cannot exceed frame_count");
  const double noun_nodes = static_cast<double>(node_count) * noun_share / total;
  const double verb_nodes = static_cast<double>(node_count) * verb_share / total;
  if (max_branching == 0 && (noun_nodes > 1.5 || (verb_nodes > 1.5 && verb_root_rate < 1.0)))
    throw SynthError("max_branching 0 cannot build a hierarchy over more than one node");
}

SynthConfig parse_synth_config(std::string_view text, SynthConfig cfg) {
  auto lines = split(text, '\n');
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    const auto where = "synth config line " + std::to_string(ln + 1) + ": ";
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) throw SynthError(where + "expected 'key value'");
    const auto key = line.substr(0, sp);
    const auto value = trim(line.substr(sp));
    if (key == "seed") {
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), cfg.seed);
      if (ec != std::errc() || p != value.data() + value.size())
        throw SynthError(where + "bad value '" + std::string(value) + "' for seed");
      continue;
    }
    auto it = std::find_if(fields().begin(), fields().end(), [&](const auto& f) { return f.first == key; });
    if (it == fields().end()) throw SynthError(where + "unknown key '" + std::string(key) + "'");
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(cfg.*member)>;
          T v{};
          auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
          if (ec != std::errc() || p != value.data() + value.size())
            throw SynthError(where + "bad value '" + std::string(value) + "' for " + std::string(key));
          cfg.*member = v;
        },
        it->second);
  }
  return cfg;
}

std::string format_synth_config(const SynthConfig& cfg) {
  std::string out = "seed " + std::to_string(cfg.seed) + "\n";
  char buf[96];
  for (const auto& [name, field] : fields()) {
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, double>)
            std::snprintf(buf, sizeof buf, "%.*s %.17g\n", static_cast<int>(name.size()), name.data(), cfg.*member);
          else
            std::snprintf(buf, sizeof buf, "%.*s %llu\n", static_cast<int>(name.size()), name.data(),
                          static_cast<unsigned long long>(cfg.*member));
        },
        field);
    out += buf;
  }
  return out;
}

SynthData generate(const SynthConfig& cfg) {
  cfg.check();
  Rng rng(substream(cfg.seed, 0));

  // Split node_count across POS by cumulative rounding.
  const double shares[kPosCount] = {cfg.noun_share, cfg.verb_share, cfg.adjective_share, cfg.adverb_share};
  const double total_share = shares[0] + shares[1] + shares[2] + shares[3];
  std::size_t counts[kPosCount];
  {
    double acc = 0.0;
    std::size_t assigned = 0;
    for (std::size_t p = 0; p < kPosCount; ++p) {
      acc += shares[p];
      const auto upto = static_cast<std::size_t>(std::llround(static_cast<double>(cfg.node_count) * acc / total_share));
      counts[p] = upto - assigned;
      assigned = upto;
    }
  }

  std::vector<SourceNode> nodes;
  std::vector<std::size_t> first_of(kPosCount + 1, 0);  // nodes of POS p: [first_of[p], first_of[p+1])
  std::vector<NamedEdge> edges;
  std::size_t word_counter = 0;
  std::vector<std::vector<std::string>> used_words(kPosCount);
  // The pool is split across POS like the nodes, so no POS starves the others.
  std::size_t pool_of[kPosCount];
  for (std::size_t p = 0; p < kPosCount; ++p)
    pool_of[p] = cfg.word_pool_size == 0 || cfg.node_count == 0
                     ? 0
                     : std::max<std::size_t>(1, cfg.word_pool_size * counts[p] / cfg.node_count);

  auto fresh_word = [&](std::size_t p) -> std::string {
    const bool pool_full = pool_of[p] != 0 && used_words[p].size() >= pool_of[p];
    if ((pool_full || rng.chance(cfg.polysemy_rate)) && !used_words[p].empty())
      return used_words[p][rng.index(used_words[p].size())];
    std::string w = "w" + std::to_string(word_counter++);
    used_words[p].push_back(w);
    return w;
  };

  for (std::size_t p = 0; p < kPosCount; ++p) {
    first_of[p] = nodes.size();
    const auto pos = kAllPos[p];
    for (std::size_t i = 0; i < counts[p]; ++i) {
      Synset s;
      s.id = make_id(pos, i);
      s.pos = pos;
      const std::size_t nwords = 1 + rng.index(cfg.max_words);
      for (std::size_t k = 0; k < nwords; ++k) {
        auto w = fresh_word(p);
        if (std::find(s.words.begin(), s.words.end(), w) == s.words.end()) s.words.push_back(std::move(w));
      }
      std::string gloss = "the";
      for (std::size_t k = 0; k < cfg.gloss_words; ++k) {
        gloss += " g" + std::to_string(rng.index(cfg.gloss_vocabulary));
        if (k == 1) gloss += " of";
      }
      s.gloss = std::move(gloss);
      if (pos == PartOfSpeech::Verb) {
        const std::size_t nframes = 1 + rng.index(cfg.max_frames);
        std::set<int> f;
        while (f.size() < nframes) f.insert(1 + static_cast<int>(rng.index(cfg.frame_count)));
        s.frames.assign(f.begin(), f.end());
      }
      nodes.push_back({std::move(s), i});
    }
  }
  first_of[kPosCount] = nodes.size();
  auto pos_range = [&](PartOfSpeech pos) {
    const auto p = static_cast<std::size_t>(pos);
    return std::pair{first_of[p], first_of[p + 1]};
  };
  auto id_of = [&](std::size_t n) -> const std::string& { return nodes[n].synset.id; };

  // Hypernym hierarchies: each node picks an earlier parent with spare
  // branching capacity, so the result is acyclic by construction.
  std::vector<std::vector<std::size_t>> parents(nodes.size());
  for (auto pos : {PartOfSpeech::Noun, PartOfSpeech::Verb}) {
    auto [b, e] = pos_range(pos);
    std::vector<std::size_t> open;
    std::vector<std::size_t> children(nodes.size(), 0);
    for (std::size_t n = b; n < e; ++n) {
      const bool root = n == b || open.empty() || (pos == PartOfSpeech::Verb && rng.chance(cfg.verb_root_rate));
      if (!root) {
        const auto k = rng.index(open.size());
        const auto parent = open[k];
        parents[n].push_back(parent);
        if (++children[parent] >= cfg.max_branching) {
          open[k] = open.back();
          open.pop_back();
        }
        if (n - b >= 2 && rng.chance(cfg.multi_parent_rate)) {
          const auto extra = b + rng.index(n - b);
          if (extra != parent) parents[n].push_back(extra);
        }
      }
      if (cfg.max_branching > 0) open.push_back(n);
    }
  }
  for (std::size_t n = 0; n < nodes.size(); ++n)
    for (auto p : parents[n]) edges.push_back({Relation::Hypernym, id_of(n), id_of(p)});

  std::set<std::pair<std::size_t, std::size_t>> symmetric_seen;
  auto symmetric_edge = [&](Relation rel, std::size_t a, std::size_t b) {
    if (a == b) return;
    auto key = std::minmax(a, b);
    if (symmetric_seen.insert({key.first * nodes.size() + key.second, static_cast<std::size_t>(rel)}).second)
      edges.push_back({rel, id_of(a), id_of(b)});
  };
  auto random_in = [&](PartOfSpeech pos) -> std::optional<std::size_t> {
    auto [b, e] = pos_range(pos);
    if (b == e) return std::nullopt;
    return b + rng.index(e - b);
  };

  for (auto pos : kAllPos) {
    auto [b, e] = pos_range(pos);
    for (std::size_t n = b; n < e; ++n) {
      if (rng.chance(cfg.antonym_rate))
        if (auto o = random_in(pos)) symmetric_edge(Relation::Antonym, n, *o);
      if ((pos == PartOfSpeech::Verb || pos == PartOfSpeech::Adjective) && rng.chance(cfg.also_see_rate))
        if (auto o = random_in(pos)) symmetric_edge(Relation::AlsoSee, n, *o);
    }
  }
  {
    auto [b, e] = pos_range(PartOfSpeech::Adjective);
    std::vector<std::size_t> heads;
    for (std::size_t n = b; n < e; ++n) {
      if (!heads.empty() && rng.chance(cfg.similar_to_rate))
        symmetric_edge(Relation::SimilarTo, n, heads[rng.index(heads.size())]);
      else
        heads.push_back(n);
      if (rng.chance(cfg.participle_rate))
        if (auto v = random_in(PartOfSpeech::Verb)) edges.push_back({Relation::ParticipleOf, id_of(n), id_of(*v)});
      if (rng.chance(cfg.pertains_rate))
        if (auto v = random_in(PartOfSpeech::Noun)) edges.push_back({Relation::Pertains, id_of(n), id_of(*v)});
      if (rng.chance(cfg.attribute_rate))
        if (auto v = random_in(PartOfSpeech::Noun)) edges.push_back({Relation::Attribute, id_of(n), id_of(*v)});
    }
  }
  {
    auto [b, e] = pos_range(PartOfSpeech::Adverb);
    for (std::size_t n = b; n < e; ++n)
      if (rng.chance(cfg.derived_rate))
        if (auto a = random_in(PartOfSpeech::Adjective)) edges.push_back({Relation::DerivedFrom, id_of(n), id_of(*a)});
  }

  // ---- target: perturbed copy ----
  Rng fate_rng(substream(cfg.seed, 1));
  Rng edge_rng(substream(cfg.seed, 2));
  Rng word_rng(substream(cfg.seed, 3));

  std::vector<Fate> fate(nodes.size(), Fate::Keep);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const double u = fate_rng.uniform();
    if (u < cfg.node_delete)
      fate[n] = Fate::Delete;
    else if (u < cfg.node_delete + cfg.node_split)
      fate[n] = Fate::Split;
  }

  struct TargetNode {
    Synset synset;
    std::size_t order;
  };
  std::vector<TargetNode> tnodes;
  std::vector<std::vector<std::size_t>> images(nodes.size());
  GoldSample gold;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto& src = nodes[n].synset;
    switch (fate[n]) {
      case Fate::Delete: gold.items.emplace(src.id, GoldItem::none()); break;
      case Fate::Keep:
        images[n].push_back(tnodes.size());
        tnodes.push_back({src, nodes[n].order});
        gold.items.emplace(src.id, GoldItem::of({src.id}));
        break;
      case Fate::Split: {
        Synset a = src, b = src;
        a.id += ".1";
        b.id += ".2";
        a.words = {src.words.front()};
        b.words = {src.words.front()};
        for (std::size_t k = 1; k < src.words.size(); ++k) (k % 2 ? a : b).words.push_back(src.words[k]);
        gold.items.emplace(src.id, GoldItem::of({a.id, b.id}));
        images[n].push_back(tnodes.size());
        tnodes.push_back({std::move(a), nodes[n].order});
        images[n].push_back(tnodes.size());
        tnodes.push_back({std::move(b), nodes[n].order});
        break;
      }
    }
  }

  // Where a hypernym pointing at source node p lands in the target. Deleted
  // parents hand their children to their own parents.
  std::function<void(std::size_t, std::vector<std::size_t>&)> resolve_parent = [&](std::size_t p,
                                                                                    std::vector<std::size_t>& out) {
    if (fate[p] == Fate::Delete) {
      for (auto pp : parents[p]) resolve_parent(pp, out);
    } else if (fate[p] == Fate::Split) {
      out.push_back(images[p][edge_rng.index(2)]);
    } else {
      out.push_back(images[p].front());
    }
  };

  struct TEdge {
    Relation rel;
    std::size_t from, to;
  };
  std::vector<TEdge> tedges;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (images[n].empty()) continue;
    for (auto child : images[n]) {
      std::vector<std::size_t> resolved;
      for (auto p : parents[n]) resolve_parent(p, resolved);
      for (auto r : resolved) tedges.push_back({Relation::Hypernym, child, r});
    }
  }
  // Non-hierarchical edges connect first images; edges touching a deleted
  // node disappear.
  {
    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t n = 0; n < nodes.size(); ++n) index_of.emplace(nodes[n].synset.id, n);
    for (const auto& e : edges) {
      if (e.rel == Relation::Hypernym) continue;
      const auto a = index_of.at(e.from);
      const auto b = index_of.at(e.to);
      if (images[a].empty() || images[b].empty()) continue;
      tedges.push_back({e.rel, images[a].front(), images[b].front()});
    }
  }

  // Rewiring keeps POS signatures and, for hypernyms, creation order.
  std::vector<std::vector<std::size_t>> tnodes_of_pos(kPosCount);
  for (std::size_t t = 0; t < tnodes.size(); ++t)
    tnodes_of_pos[static_cast<std::size_t>(tnodes[t].synset.pos)].push_back(t);
  for (auto& e : tedges) {
    if (!edge_rng.chance(cfg.edge_rewire)) continue;
    const auto& pool = tnodes_of_pos[static_cast<std::size_t>(tnodes[e.to].synset.pos)];
    if (e.rel == Relation::Hypernym) {
      std::vector<std::size_t> earlier;
      for (auto t : pool)
        if (tnodes[t].order < tnodes[e.from].order) earlier.push_back(t);
      if (!earlier.empty()) e.to = earlier[edge_rng.index(earlier.size())];
    } else {
      const auto t = pool[edge_rng.index(pool.size())];
      if (t != e.from) e.to = t;
    }
  }

  std::size_t rename_counter = 0;
  for (auto& tn : tnodes) {
    for (auto& w : tn.synset.words)
      if (word_rng.chance(cfg.word_rename)) w = "x" + std::to_string(rename_counter++);
    if (cfg.gloss_edit > 0.0) {
      auto tokens = split(tn.synset.gloss, ' ');
      std::string g;
      for (auto tok : tokens) {
        std::string t(tok);
        if (t.size() > 1 && t[0] == 'g' && word_rng.chance(cfg.gloss_edit))
          t = "g" + std::to_string(word_rng.index(cfg.gloss_vocabulary));
        g += (g.empty() ? "" : " ") + t;
      }
      tn.synset.gloss = std::move(g);
    }
  }

  std::vector<Synset> src_synsets, tgt_synsets;
  src_synsets.reserve(nodes.size());
  for (auto& n : nodes) src_synsets.push_back(std::move(n.synset));
  tgt_synsets.reserve(tnodes.size());
  std::vector<NamedEdge> target_edges;
  target_edges.reserve(tedges.size());
  for (const auto& e : tedges) target_edges.push_back({e.rel, tnodes[e.from].synset.id, tnodes[e.to].synset.id});
  for (auto& t : tnodes) tgt_synsets.push_back(std::move(t.synset));

  SynthData out{SenseGraph::from_parts(std::move(src_synsets), edges),
                SenseGraph::from_parts(std::move(tgt_synsets), target_edges), std::move(gold)};
  return out;
}

GoldSample sample_gold(const GoldSample& gold, const SenseGraph& source,
                       const std::map<PartOfSpeech, std::size_t>& counts, std::uint64_t seed) {
  Rng rng(substream(seed, 17));
  GoldSample out;
  for (auto pos : kAllPos) {
    auto want = counts.find(pos);
    if (want == counts.end()) continue;
    std::vector<std::string> ids;
    for (const auto& [id, item] : gold.items) {
      auto i = source.find(id);
      if (i && source.synset(*i).pos == pos) ids.push_back(id);
    }
    for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.index(i)]);
    ids.resize(std::min(ids.size(), want->second));
    for (const auto& id : ids) out.items.emplace(id, gold.items.at(id));
  }
  return out;
}

}  // namespace taxalign
