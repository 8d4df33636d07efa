#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "taxalign/graph.hpp"

namespace taxalign {

/// Variables (source synsets) and their candidate labels (target synsets),
/// stored flat. Labels of each variable are sorted and unique.
class LabelSpace {
 public:
  LabelSpace() = default;
  /// `source_size` is the node count of the source graph, used for the
  /// reverse source -> variable lookup.
  LabelSpace(std::size_t source_size, std::vector<NodeIndex> variables, std::vector<std::vector<NodeIndex>> labels);

  std::size_t variable_count() const { return variables_.size(); }
  std::size_t label_count() const { return flat_labels_.size(); }
  NodeIndex variable(std::size_t v) const { return variables_[v]; }
  std::span<const NodeIndex> variables() const { return variables_; }
  std::span<const NodeIndex> labels(std::size_t v) const {
    return std::span<const NodeIndex>(flat_labels_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
  }
  std::span<const std::size_t> offsets() const { return offsets_; }

  std::optional<std::size_t> slot_of(NodeIndex source) const;
  std::span<const NodeIndex> labels_of(NodeIndex source) const;
  /// Flat label position of the connection source -> target.
  std::optional<std::size_t> position(NodeIndex source, NodeIndex target) const;

  friend bool operator==(const LabelSpace&, const LabelSpace&) = default;

 private:
  std::vector<NodeIndex> variables_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeIndex> flat_labels_;
  std::vector<std::uint32_t> slot_of_;
};

/// Per-variable weight vectors aligned with a LabelSpace.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(const LabelSpace& space);

  std::size_t variable_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<double> row(std::size_t v) {
    return std::span<double>(weights_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
  }
  std::span<const double> row(std::size_t v) const {
    return std::span<const double>(weights_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
  }
  std::span<const double> flat() const { return weights_; }
  double at(std::size_t flat_position) const { return weights_[flat_position]; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<double> weights_;
};

/// Read-only view of a weight state; connections that are not in the label
/// space weigh 0.
struct WeightState {
  const LabelSpace& space;
  const Assignment& weights;

  double weight(NodeIndex source, NodeIndex target) const;
};

/// Largest deviation of any row sum from 1 and whether any entry is negative.
struct NormalizationCheck {
  double max_sum_error = 0.0;
  bool has_negative = false;
  bool ok(double tol) const { return !has_negative && max_sum_error <= tol; }
};
NormalizationCheck check_normalization(const Assignment& a);

/// Final weights of an earlier phase, consulted by cross-POS constraints.
struct FrozenPhase {
  PartOfSpeech pos;
  LabelSpace space;
  Assignment weights;
};

using FrozenContext = std::map<PartOfSpeech, std::shared_ptr<const FrozenPhase>>;

/// Sum that does not depend on the order of `terms` (sorts in place).
double order_free_sum(std::span<double> terms);

}  // namespace taxalign
