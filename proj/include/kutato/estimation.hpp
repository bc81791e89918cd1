#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kutato/model.hpp"

namespace kutato {

enum class Estimator { dirichlet, ml };

std::string_view to_string(Estimator e);

/// Weighted tallies for one node family, indexed [configuration][child value].
struct FamilyCounts {
  std::size_t child = 0;
  ParentList parents;
  std::size_t arity = 0;              // child arity
  std::vector<double> counts;         // configurations * arity, row-major
  std::vector<double> config_totals;  // C(parent configuration)

  std::size_t configurations() const noexcept { return config_totals.size(); }
  double count(std::size_t config, std::size_t value) const { return counts[config * arity + value]; }
  // Total weight of rows complete for the family.
  double total() const;
};

// A row contributes its weight iff the child and every parent are observed.
// Parent configurations use the database's vocabularies in mixed-radix order.
FamilyCounts count_family(const CaseDatabase& db, std::size_t child, const ParentList& parents);

// dirichlet: (C(x,pi) + 1) / (C(pi) + arity). ml: C(x,pi) / C(pi), uniform
// when C(pi) = 0.
Cpt estimate_cpt(const FamilyCounts& counts, Estimator mode);

// Database column of each structure variable, matched by name. Throws
// ValidationError on a missing variable or differing vocabulary.
std::vector<std::size_t> match_columns(const Structure& structure, const CaseDatabase& db);

// Fits every node's CPT from db. Structure variables are matched to db
// columns by name and must carry identical vocabularies.
BeliefNetwork fit_parameters(const Structure& structure, const CaseDatabase& db, Estimator mode,
                             std::string name = "fitted");

}  // namespace kutato
