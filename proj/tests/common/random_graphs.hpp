#pragma once

#include <random>

#include "taxalign/constraints.hpp"
#include "taxalign/graph.hpp"
#include "taxalign/labeling.hpp"

namespace fixtures {

struct RandomPair {
  taxalign::SenseGraph source;
  taxalign::SenseGraph target;
};

/// Small random graphs over every part of speech. Words come from a small
/// shared pool so that candidate sets overlap; half of the time the target
/// is a perturbed copy of the source so that structure matches too.
RandomPair random_pair(std::mt19937_64& rng, std::size_t max_nodes = 30);

/// Random non-empty constraint set that is applicable to `pos`.
taxalign::ConstraintSet random_constraints(std::mt19937_64& rng, taxalign::PartOfSpeech pos);

/// Positive random weights, each row normalized.
taxalign::Assignment random_assignment(const taxalign::LabelSpace& space, std::mt19937_64& rng);

}  // namespace fixtures
