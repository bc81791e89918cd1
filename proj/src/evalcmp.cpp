#include "kutato/evalcmp.hpp"

#include <algorithm>
#include <cmath>

#include "kutato/entropy.hpp"
#include "kutato/errors.hpp"

namespace kutato {
namespace {

// learned index -> reference index, by name.
std::vector<std::size_t> name_map(const Structure& learned, const Structure& reference) {
  if (learned.size() != reference.size()) {
    throw ValidationError("networks have different variable counts (" + std::to_string(learned.size()) + " vs " +
                          std::to_string(reference.size()) + ")");
  }
  std::vector<std::size_t> map(learned.size());
  for (std::size_t v = 0; v < learned.size(); ++v) {
    auto idx = reference.index_of(learned.variables[v].name);
    if (!idx) throw ValidationError("variable '" + learned.variables[v].name + "' missing from reference");
    map[v] = *idx;
  }
  return map;
}

bool same_label_set(const Variable& a, const Variable& b) {
  if (a.arity() != b.arity()) return false;
  return std::all_of(a.values.begin(), a.values.end(), [&](const std::string& l) { return b.index_of(l).has_value(); });
}

// labels[v][learned value] = reference value, matched by label text.
std::vector<std::vector<std::size_t>> label_maps(const Structure& learned, const Structure& reference,
                                                 const std::vector<std::size_t>& map) {
  std::vector<std::vector<std::size_t>> labels(learned.size());
  for (std::size_t v = 0; v < learned.size(); ++v) {
    const auto& lv = learned.variables[v];
    const auto& rv = reference.variables[map[v]];
    if (!same_label_set(lv, rv)) throw ValidationError("variable '" + lv.name + "' has different value labels");
    for (const auto& l : lv.values) labels[v].push_back(*rv.index_of(l));
  }
  return labels;
}

}  // namespace

StructuralDiff structural_diff(const Structure& learned, const Structure& reference) {
  const auto map = name_map(learned, reference);
  const std::size_t n = reference.size();
  // adjacency[from][to] in reference indexing.
  std::vector<std::vector<bool>> ref(n, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> got(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) {
    for (auto p : reference.parents[v]) ref[p][v] = true;
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (auto p : learned.parents[v]) got[map[p]][map[v]] = true;
  }
  auto arc = [&](std::size_t a, std::size_t b) { return Arc{reference.variables[a].name, reference.variables[b].name}; };

  StructuralDiff diff;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      if (ref[a][b] && !got[a][b]) {
        (got[b][a] ? diff.reversed : diff.missing).push_back(arc(a, b));
      } else if (got[a][b] && !ref[a][b] && !ref[b][a]) {
        diff.extra.push_back(arc(a, b));
      }
    }
  }
  return diff;
}

StructuralDiff structural_diff(const BeliefNetwork& learned, const BeliefNetwork& reference) {
  return structural_diff(learned.structure(), reference.structure());
}

bool same_structure(const BeliefNetwork& a, const BeliefNetwork& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t v = 0; v < a.size(); ++v) {
    auto w = b.index_of(a.variable(v).name);
    if (!w || !same_label_set(a.variable(v), b.variable(*w))) return false;
    if (a.parents(v).size() != b.parents(*w).size()) return false;
    for (auto p : a.parents(v)) {
      auto q = b.index_of(a.variable(p).name);
      if (!q || !b.structure().has_arc(*q, *w)) return false;
    }
  }
  return true;
}

double cpt_max_abs_error(const BeliefNetwork& learned, const BeliefNetwork& reference) {
  if (!same_structure(learned, reference)) {
    throw ValidationError("cpt_max_abs_error: networks have different structures");
  }
  const auto map = name_map(learned.structure(), reference.structure());
  const auto labels = label_maps(learned.structure(), reference.structure(), map);
  std::vector<std::size_t> inverse(map.size());
  for (std::size_t v = 0; v < map.size(); ++v) inverse[map[v]] = v;
  // Reference value -> learned value, per learned variable.
  std::vector<std::vector<std::size_t>> back(map.size());
  for (std::size_t v = 0; v < map.size(); ++v) {
    back[v].resize(labels[v].size());
    for (std::size_t x = 0; x < labels[v].size(); ++x) back[v][labels[v][x]] = x;
  }

  double worst = 0.0;
  for (std::size_t rv = 0; rv < reference.size(); ++rv) {
    const std::size_t lv = inverse[rv];
    const auto& ref_parents = reference.parents(rv);
    const auto& learned_parents = learned.parents(lv);
    const auto ref_radix = reference.structure().parent_radix(rv);
    const auto learned_radix = learned.structure().parent_radix(lv);
    // Position of each learned parent within the reference parent list.
    std::vector<std::size_t> slot(learned_parents.size());
    for (std::size_t k = 0; k < learned_parents.size(); ++k) {
      const auto target = map[learned_parents[k]];
      slot[k] = static_cast<std::size_t>(std::find(ref_parents.begin(), ref_parents.end(), target) -
                                         ref_parents.begin());
    }
    std::vector<std::size_t> learned_digits(learned_parents.size());
    for (std::size_t r = 0; r < ref_radix.size(); ++r) {
      const auto digits = ref_radix.decode(r);
      for (std::size_t k = 0; k < slot.size(); ++k) learned_digits[k] = back[learned_parents[k]][digits[slot[k]]];
      const auto lr = learned_radix.encode(learned_digits);
      for (std::size_t x = 0; x < reference.variable(rv).arity(); ++x) {
        worst = std::max(worst, std::abs(learned.cpt(lv).at(lr, back[lv][x]) - reference.cpt(rv).at(r, x)));
      }
    }
  }
  return worst;
}

double distribution_kl(const BeliefNetwork& learned, const BeliefNetwork& reference, std::size_t cell_budget) {
  const auto map = name_map(learned.structure(), reference.structure());
  const auto labels = label_maps(learned.structure(), reference.structure(), map);
  std::vector<std::vector<std::size_t>> back(map.size());
  for (std::size_t v = 0; v < map.size(); ++v) {
    back[v].resize(labels[v].size());
    for (std::size_t x = 0; x < labels[v].size(); ++x) back[v][labels[v][x]] = x;
  }
  const auto p = brute_force_joint(reference, cell_budget);
  const auto raw = brute_force_joint(learned, cell_budget);

  // Re-lay the learned joint in the reference's variable order.
  MarginalTable q = p;
  const auto ref_radix = p.radix();
  const auto learned_radix = raw.radix();
  std::vector<std::size_t> learned_digits(map.size());
  for (std::size_t i = 0; i < ref_radix.size(); ++i) {
    const auto digits = ref_radix.decode(i);
    for (std::size_t v = 0; v < map.size(); ++v) learned_digits[v] = back[v][digits[map[v]]];
    q.probabilities[i] = raw.probabilities[learned_radix.encode(learned_digits)];
  }
  return kl_divergence(p, q);
}

}  // namespace kutato
