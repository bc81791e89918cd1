#include "kutato/entropy.hpp"

#include <cmath>
#include <limits>

#include "kutato/errors.hpp"

namespace kutato {

double distribution_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

EntropyReport network_entropy(const BeliefNetwork& net, const InferenceOptions& options) {
  EntropyReport report;
  report.per_node.assign(net.size(), 0.0);
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto& cpt = net.cpt(v);
    double h = 0.0;
    if (net.parents(v).empty()) {
      h = distribution_entropy(cpt.row(0));
    } else {
      // Parent marginal is laid out in the same mixed radix as the CPT rows.
      const auto marginal = marginal_over(net, net.parents(v), options);
      for (std::size_t r = 0; r < cpt.rows(); ++r) {
        const double w = marginal.probabilities[r];
        if (w > 0.0) h += w * distribution_entropy(cpt.row(r));
      }
    }
    report.per_node[v] = h;
    report.total += h;
  }
  return report;
}

double brute_force_entropy(const BeliefNetwork& net, std::size_t cell_budget) {
  return distribution_entropy(brute_force_joint(net, cell_budget).probabilities);
}

FamilyEntropy family_entropy(const FamilyCounts& counts, Estimator mode) {
  FamilyEntropy out;
  out.weight = counts.total();
  if (!(out.weight > 0.0)) return out;
  const auto cpt = estimate_cpt(counts, mode);
  for (std::size_t c = 0; c < counts.configurations(); ++c) {
    const double w = counts.config_totals[c];
    if (w > 0.0) out.entropy += w * distribution_entropy(cpt.row(c));
  }
  out.entropy /= out.weight;
  return out;
}

EntropyReport empirical_network_entropy(const Structure& structure, const CaseDatabase& db, Estimator mode) {
  const auto column = match_columns(structure, db);
  EntropyReport report;
  report.per_node.assign(structure.size(), 0.0);
  for (std::size_t v = 0; v < structure.size(); ++v) {
    ParentList parents;
    for (auto p : structure.parents[v]) parents.push_back(column[p]);
    const auto fe = family_entropy(count_family(db, column[v], parents), mode);
    if (!(fe.weight > 0.0)) {
      throw ValidationError("family of '" + structure.variables[v].name + "' has no complete rows");
    }
    report.per_node[v] = fe.entropy;
    report.total += fe.entropy;
  }
  return report;
}

double kl_divergence(const MarginalTable& p, const MarginalTable& q) {
  if (p.scope != q.scope || p.arities != q.arities || p.size() != q.size()) {
    throw ValidationError("kl_divergence: tables have different scopes");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.probabilities[i];
    if (pi <= 0.0) continue;
    const double qi = q.probabilities[i];
    if (qi <= 0.0) return std::numeric_limits<double>::infinity();
    d += pi * std::log(pi / qi);
  }
  return d;
}

}  // namespace kutato
