#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "taxalign/evaluation.hpp"
#include "taxalign/graph.hpp"

namespace taxalign {

class SynthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters of the synthetic source/target generator. Rates are
/// probabilities in [0, 1]; shares are relative sizes of each POS.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t node_count = 200;
  double noun_share = 1.0;
  double verb_share = 0.0;
  double adjective_share = 0.0;
  double adverb_share = 0.0;

  // hierarchy (nouns and verbs)
  std::size_t max_branching = 6;
  double multi_parent_rate = 0.0;
  double verb_root_rate = 0.15;

  // lexicon
  std::size_t word_pool_size = 0;  // distinct words, split by POS share; 0: unlimited
  std::size_t max_words = 3;
  double polysemy_rate = 0.0;

  // relation mix; a zero rate disables the relation
  double antonym_rate = 0.1;
  double also_see_rate = 0.05;
  double similar_to_rate = 0.5;
  double participle_rate = 0.15;
  double pertains_rate = 0.2;
  double attribute_rate = 0.1;
  double derived_rate = 0.7;

  // glosses and frames
  std::size_t gloss_words = 6;
  std::size_t gloss_vocabulary = 5000;
  std::size_t frame_count = 35;
  std::size_t max_frames = 3;

  // target perturbations
  double node_delete = 0.0;
  double node_split = 0.0;
  double word_rename = 0.0;
  double edge_rewire = 0.0;
  double gloss_edit = 0.0;

  /// Throws SynthError for out-of-range or infeasible settings.
  void check() const;
};

/// `key value` lines using the field names above; unknown keys throw.
SynthConfig parse_synth_config(std::string_view text, SynthConfig base = {});
std::string format_synth_config(const SynthConfig& config);

struct SynthData {
  SenseGraph source;
  SenseGraph target;
  GoldSample gold;  // covers every source synset
};

/// Random hypernym DAGs plus the configured relations; the target is a
/// perturbed copy. Deleted synsets get no-correspondence gold, split
/// synsets map to both parts. Fully determined by the config.
SynthData generate(const SynthConfig& config);

/// Random per-POS subsample of a gold sample (all items if fewer exist).
GoldSample sample_gold(const GoldSample& gold, const SenseGraph& source,
                       const std::map<PartOfSpeech, std::size_t>& counts, std::uint64_t seed);

}  // namespace taxalign
