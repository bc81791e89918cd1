#include "kutato/sampling.hpp"

#include <random>

#include "kutato/inference.hpp"

namespace kutato {
namespace {

std::size_t draw(std::span<const double> row, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] <= 0.0) continue;
    cumulative += row[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  // Round-off left u just above the final cumulative sum.
  return last_positive;
}

}  // namespace

CaseDatabase logic_sample(const BeliefNetwork& net, const SampleSpec& spec) {
  const auto order = topological_order(net);
  const std::size_t width = net.size();
  std::mt19937_64 gen(spec.seed);
  std::vector<std::int32_t> cells(spec.n_cases * width);
  std::vector<std::size_t> values(width, 0);
  for (std::size_t c = 0; c < spec.n_cases; ++c) {
    for (auto v : order) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      const auto config = net.structure().parent_configuration(v, values);
      values[v] = draw(net.cpt(v).row(config), u);
    }
    for (std::size_t v = 0; v < width; ++v) cells[c * width + v] = static_cast<std::int32_t>(values[v]);
  }
  return CaseDatabase(net.variables(), std::move(cells));
}

CaseDatabase exact_joint_database(const BeliefNetwork& net, double total_weight, std::size_t cell_budget) {
  const auto joint = brute_force_joint(net, cell_budget);
  const auto radix = joint.radix();
  std::vector<std::int32_t> cells;
  std::vector<double> weights;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    const double p = joint.probabilities[i];
    if (p <= 0.0) continue;
    for (auto d : radix.decode(i)) cells.push_back(static_cast<std::int32_t>(d));
    weights.push_back(p * total_weight);
  }
  return CaseDatabase(net.variables(), std::move(cells), std::move(weights));
}

}  // namespace kutato
