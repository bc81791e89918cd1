#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kutato/model.hpp"

namespace kutato {

inline constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 24;

/// Probabilities over the joint configurations of `scope`, in mixed-radix
/// order with the first scope variable most significant.
struct MarginalTable {
  std::vector<std::size_t> scope;
  std::vector<std::size_t> arities;
  std::vector<double> probabilities;

  std::size_t size() const noexcept { return probabilities.size(); }
  MixedRadix radix() const { return MixedRadix(arities); }
};

struct InferenceOptions {
  // Largest intermediate factor allowed, in cells.
  std::size_t cell_budget = kDefaultCellBudget;
  // Overrides the min-degree heuristic. Variables not needed for the query
  // are skipped; needed variables missing from the list are eliminated
  // afterwards in heuristic order.
  std::optional<std::vector<std::size_t>> elimination_order;
};

// Exact prior marginal over `scope` by variable elimination on the ancestral
// subnetwork. Throws ResourceError when a factor would exceed the budget.
MarginalTable marginal_over(const BeliefNetwork& net, const std::vector<std::size_t>& scope,
                            const InferenceOptions& options = {});

// Full joint over every variable in canonical order by enumeration.
MarginalTable brute_force_joint(const BeliefNetwork& net, std::size_t cell_budget = kDefaultCellBudget);

}  // namespace kutato
