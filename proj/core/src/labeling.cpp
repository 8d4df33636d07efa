#include "taxalign/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace taxalign {

namespace {
constexpr std::uint32_t kNoSlot = std::numeric_limits<std::uint32_t>::max();
}

LabelSpace::LabelSpace(std::size_t source_size, std::vector<NodeIndex> variables,
                       std::vector<std::vector<NodeIndex>> labels)
    : variables_(std::move(variables)), slot_of_(source_size, kNoSlot) {
  if (labels.size() != variables_.size()) throw std::invalid_argument("LabelSpace: labels/variables size mismatch");
  offsets_.reserve(variables_.size() + 1);
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    const auto s = variables_[v];
    if (s >= source_size) throw std::invalid_argument("LabelSpace: variable outside source graph");
    if (slot_of_[s] != kNoSlot) throw std::invalid_argument("LabelSpace: duplicate variable");
    slot_of_[s] = static_cast<std::uint32_t>(v);
    auto& l = labels[v];
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    flat_labels_.insert(flat_labels_.end(), l.begin(), l.end());
    offsets_.push_back(flat_labels_.size());
  }
}

std::optional<std::size_t> LabelSpace::slot_of(NodeIndex source) const {
  if (source >= slot_of_.size() || slot_of_[source] == kNoSlot) return std::nullopt;
  return slot_of_[source];
}

std::span<const NodeIndex> LabelSpace::labels_of(NodeIndex source) const {
  if (auto v = slot_of(source)) return labels(*v);
  return {};
}

std::optional<std::size_t> LabelSpace::position(NodeIndex source, NodeIndex target) const {
  auto v = slot_of(source);
  if (!v) return std::nullopt;
  auto l = labels(*v);
  auto it = std::lower_bound(l.begin(), l.end(), target);
  if (it == l.end() || *it != target) return std::nullopt;
  return offsets_[*v] + static_cast<std::size_t>(it - l.begin());
}

Assignment::Assignment(const LabelSpace& space)
    : offsets_(space.offsets().begin(), space.offsets().end()), weights_(space.label_count(), 0.0) {}

double WeightState::weight(NodeIndex source, NodeIndex target) const {
  auto p = space.position(source, target);
  return p ? weights.at(*p) : 0.0;
}

NormalizationCheck check_normalization(const Assignment& a) {
  NormalizationCheck out;
  for (std::size_t v = 0; v < a.variable_count(); ++v) {
    auto row = a.row(v);
    if (row.empty()) continue;
    double sum = 0.0;
    for (double w : row) {
      if (w < 0.0 || std::isnan(w)) out.has_negative = true;
      sum += w;
    }
    out.max_sum_error = std::max(out.max_sum_error, std::abs(sum - 1.0));
  }
  return out;
}

double order_free_sum(std::span<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace taxalign
