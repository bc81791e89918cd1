#pragma once

#include <cstddef>
#include <vector>

#include "kutato/estimation.hpp"
#include "kutato/inference.hpp"
#include "kutato/model.hpp"

namespace kutato {

/// Network entropy in nats, split into per-node family contributions.
struct EntropyReport {
  double total = 0.0;
  std::vector<double> per_node;
};

// -sum p ln p of one probability vector, with 0 ln 0 = 0.
double distribution_entropy(std::span<const double> p);

// Sum over nodes of P(parents = pi) * H(X | pi), with the parent marginals
// from exact inference.
EntropyReport network_entropy(const BeliefNetwork& net, const InferenceOptions& options = {});

// -sum p ln p over the enumerated full joint.
double brute_force_entropy(const BeliefNetwork& net, std::size_t cell_budget = kDefaultCellBudget);

struct FamilyEntropy {
  double entropy = 0.0;  // sum_pi C(pi)/N * H(p_hat(. | pi))
  double weight = 0.0;   // N: complete-row weight of the family
};

// Empirical conditional entropy of one family. Zero-weight families report
// entropy 0 and weight 0; callers decide whether that is an error.
FamilyEntropy family_entropy(const FamilyCounts& counts, Estimator mode);

// Structure variables are matched to db columns by name. Throws
// ValidationError naming the family when it has no complete rows.
EntropyReport empirical_network_entropy(const Structure& structure, const CaseDatabase& db, Estimator mode);

// sum p ln(p/q). Returns +infinity when p > 0 somewhere q = 0.
double kl_divergence(const MarginalTable& p, const MarginalTable& q);

}  // namespace kutato
