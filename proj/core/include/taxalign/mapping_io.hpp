#pragma once

#include <string>
#include <string_view>

#include "taxalign/evaluation.hpp"
#include "taxalign/graph.hpp"
#include "taxalign/relaxation.hpp"

namespace taxalign {

/// `source<TAB>t1:w1,t2:w2` per line, weights with six decimals; uncovered
/// synsets have an empty second field.
std::string format_mapping(const Mapping& mapping);
Mapping parse_mapping(std::string_view text, PartOfSpeech pos, std::string_view name = "mapping");

/// `source<TAB>t1,t2` per line, or `source<TAB>-` for no correspondence.
std::string format_gold(const GoldSample& gold);
GoldSample parse_gold(std::string_view text, std::string_view name = "gold");

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never observe a partial file.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace taxalign
