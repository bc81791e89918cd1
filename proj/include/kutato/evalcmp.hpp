#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kutato/inference.hpp"
#include "kutato/model.hpp"

namespace kutato {

struct Arc {
  std::string from;
  std::string to;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Arc-set differences of a learned network against a reference. A pair
/// adjacent in both with opposite orientation is `reversed` (reported in the
/// reference's orientation) and appears in neither other list.
struct StructuralDiff {
  std::vector<Arc> missing;
  std::vector<Arc> extra;
  std::vector<Arc> reversed;

  bool empty() const noexcept { return missing.empty() && extra.empty() && reversed.empty(); }
};

// Variables are matched by name; the sets must be equal. Arcs are listed in
// the reference's canonical index order.
StructuralDiff structural_diff(const Structure& learned, const Structure& reference);
StructuralDiff structural_diff(const BeliefNetwork& learned, const BeliefNetwork& reference);

// True when both networks have the same variables (names and label sets,
// in any order) and the same parent sets.
bool same_structure(const BeliefNetwork& a, const BeliefNetwork& b);

// max |p_learned - p_reference| over every node, configuration and value.
// Requires same_structure; parent and label order may differ.
double cpt_max_abs_error(const BeliefNetwork& learned, const BeliefNetwork& reference);

// D(reference || learned) between the enumerated joints; +infinity when the
// learned joint is zero where the reference is not. Labels are matched by
// text, so each variable needs the same label set in both.
double distribution_kl(const BeliefNetwork& learned, const BeliefNetwork& reference,
                       std::size_t cell_budget = kDefaultCellBudget);

}  // namespace kutato
