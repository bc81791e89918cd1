#include "kutato/inference.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "kutato/errors.hpp"

namespace kutato {
namespace {

struct Factor {
  std::vector<std::size_t> vars;  // sorted ascending
  std::vector<std::size_t> cards;
  std::vector<double> values;     // mixed radix, first var most significant

  bool contains(std::size_t v) const { return std::binary_search(vars.begin(), vars.end(), v); }
};

// Multiplies a and b, returning false on overflow past `limit`.
bool checked_mul(std::size_t a, std::size_t b, std::size_t limit, std::size_t& out) {
  if (b != 0 && a > limit / b) return false;
  out = a * b;
  return out <= limit;
}

Factor cpt_factor(const BeliefNetwork& net, std::size_t node) {
  // Scope is parents + node; build values in sorted-scope order.
  Factor f;
  f.vars = net.parents(node);
  f.vars.push_back(node);
  std::sort(f.vars.begin(), f.vars.end());
  for (auto v : f.vars) f.cards.push_back(net.variable(v).arity());
  MixedRadix radix(f.cards);
  f.values.resize(radix.size());

  const auto& parents = net.parents(node);
  const auto& cpt = net.cpt(node);
  std::vector<std::size_t> full(net.size(), 0);
  for (std::size_t i = 0; i < radix.size(); ++i) {
    auto digits = radix.decode(i);
    for (std::size_t k = 0; k < f.vars.size(); ++k) full[f.vars[k]] = digits[k];
    std::size_t row = 0;
    for (auto p : parents) row = row * net.variable(p).arity() + full[p];
    f.values[i] = cpt.at(row, full[node]);
  }
  return f;
}

// Product of `factors`, optionally summing out `eliminate` on the fly.
Factor combine(const std::vector<const Factor*>& factors, std::optional<std::size_t> eliminate,
               std::size_t budget) {
  std::set<std::size_t> all;
  std::vector<std::size_t> card_of;
  for (const auto* f : factors) {
    for (std::size_t k = 0; k < f->vars.size(); ++k) {
      all.insert(f->vars[k]);
      if (card_of.size() <= f->vars[k]) card_of.resize(f->vars[k] + 1, 0);
      card_of[f->vars[k]] = f->cards[k];
    }
  }
  std::vector<std::size_t> vars(all.begin(), all.end());
  std::vector<std::size_t> cards;
  std::size_t cells = 1;
  bool fits = true;
  long double wanted = 1.0L;
  for (auto v : vars) {
    cards.push_back(card_of[v]);
    wanted *= static_cast<long double>(card_of[v]);
    if (fits && !checked_mul(cells, card_of[v], budget, cells)) fits = false;
  }
  if (!fits) {
    const auto shown = wanted >= static_cast<long double>(std::numeric_limits<std::size_t>::max())
                           ? std::numeric_limits<std::size_t>::max()
                           : static_cast<std::size_t>(wanted);
    throw ResourceError("intermediate factor over " + std::to_string(vars.size()) + " variables needs " +
                            std::to_string(shown) + " cells, budget is " + std::to_string(budget),
                        shown);
  }

  // Per-factor stride of each product variable (0 when absent).
  std::vector<std::vector<std::size_t>> strides(factors.size(), std::vector<std::size_t>(vars.size(), 0));
  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    const auto& f = *factors[fi];
    std::size_t stride = 1;
    for (std::size_t k = f.vars.size(); k-- > 0;) {
      auto pos = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), f.vars[k]) - vars.begin());
      strides[fi][pos] = stride;
      stride *= f.cards[k];
    }
  }

  Factor out;
  std::size_t elim_pos = vars.size();
  if (eliminate) {
    elim_pos = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), *eliminate) - vars.begin());
  }
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (k == elim_pos) continue;
    out.vars.push_back(vars[k]);
    out.cards.push_back(cards[k]);
  }
  std::vector<std::size_t> out_strides(vars.size(), 0);
  {
    std::size_t stride = 1;
    for (std::size_t k = vars.size(); k-- > 0;) {
      if (k == elim_pos) continue;
      out_strides[k] = stride;
      stride *= cards[k];
    }
    out.values.assign(stride, 0.0);
  }

  std::vector<std::size_t> digits(vars.size(), 0);
  std::vector<std::size_t> index(factors.size(), 0);
  std::size_t out_index = 0;
  for (std::size_t i = 0; i < cells; ++i) {
    double p = 1.0;
    for (std::size_t fi = 0; fi < factors.size(); ++fi) p *= factors[fi]->values[index[fi]];
    out.values[out_index] += p;
    // Odometer increment, last variable fastest.
    for (std::size_t k = vars.size(); k-- > 0;) {
      if (++digits[k] < cards[k]) {
        for (std::size_t fi = 0; fi < factors.size(); ++fi) index[fi] += strides[fi][k];
        out_index += out_strides[k];
        break;
      }
      for (std::size_t fi = 0; fi < factors.size(); ++fi) index[fi] -= strides[fi][k] * (cards[k] - 1);
      out_index -= out_strides[k] * (cards[k] - 1);
      digits[k] = 0;
    }
  }
  return out;
}

std::vector<bool> ancestral_set(const BeliefNetwork& net, const std::vector<std::size_t>& scope) {
  std::vector<bool> keep(net.size(), false);
  std::vector<std::size_t> stack(scope.begin(), scope.end());
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (auto p : net.parents(v)) stack.push_back(p);
  }
  return keep;
}

// Greedy min-degree elimination over the moralized ancestral graph.
std::vector<std::size_t> min_degree_order(const BeliefNetwork& net, const std::vector<bool>& keep,
                                          const std::vector<bool>& is_query,
                                          const std::vector<std::size_t>& forced) {
  const std::size_t n = net.size();
  std::vector<std::set<std::size_t>> adj(n);
  auto link = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    adj[a].insert(b);
    adj[b].insert(a);
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    const auto& ps = net.parents(v);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      link(ps[i], v);
      for (std::size_t j = i + 1; j < ps.size(); ++j) link(ps[i], ps[j]);
    }
  }
  std::vector<bool> done(n, false);
  std::vector<std::size_t> order;
  auto eliminate = [&](std::size_t v) {
    std::vector<std::size_t> nb(adj[v].begin(), adj[v].end());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      adj[nb[i]].erase(v);
      for (std::size_t j = i + 1; j < nb.size(); ++j) link(nb[i], nb[j]);
    }
    adj[v].clear();
    done[v] = true;
    order.push_back(v);
  };
  for (auto v : forced) {
    if (v < n && keep[v] && !is_query[v] && !done[v]) eliminate(v);
  }
  for (;;) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!keep[v] || is_query[v] || done[v]) continue;
      if (best == n || adj[v].size() < adj[best].size()) best = v;
    }
    if (best == n) break;
    eliminate(best);
  }
  return order;
}

}  // namespace

MarginalTable marginal_over(const BeliefNetwork& net, const std::vector<std::size_t>& scope,
                            const InferenceOptions& options) {
  if (scope.empty()) throw ValidationError("marginal_over: empty scope");
  std::vector<bool> is_query(net.size(), false);
  for (auto v : scope) {
    if (v >= net.size()) throw ValidationError("marginal_over: variable index out of range");
    if (is_query[v]) throw ValidationError("marginal_over: duplicate variable '" + net.variable(v).name + "'");
    is_query[v] = true;
  }

  const auto keep = ancestral_set(net, scope);
  std::vector<Factor> pool;
  for (std::size_t v = 0; v < net.size(); ++v) {
    if (keep[v]) pool.push_back(cpt_factor(net, v));
  }
  const auto order = min_degree_order(net, keep, is_query,
                                      options.elimination_order.value_or(std::vector<std::size_t>{}));

  for (auto v : order) {
    std::vector<Factor> rest;
    std::vector<Factor> touching;
    for (auto& f : pool) (f.contains(v) ? touching : rest).push_back(std::move(f));
    std::vector<const Factor*> ptrs;
    for (const auto& f : touching) ptrs.push_back(&f);
    rest.push_back(combine(ptrs, v, options.cell_budget));
    pool = std::move(rest);
  }

  std::vector<const Factor*> ptrs;
  for (const auto& f : pool) ptrs.push_back(&f);
  const Factor joint = combine(ptrs, std::nullopt, options.cell_budget);

  MarginalTable table;
  table.scope = scope;
  for (auto v : scope) table.arities.push_back(net.variable(v).arity());
  const MixedRadix out_radix(table.arities);
  table.probabilities.resize(out_radix.size());
  std::vector<std::size_t> pos(scope.size());
  std::vector<std::size_t> fstride(joint.vars.size(), 1);
  for (std::size_t k = joint.vars.size(); k-- > 1;) fstride[k - 1] = fstride[k] * joint.cards[k];
  for (std::size_t s = 0; s < scope.size(); ++s) {
    pos[s] = static_cast<std::size_t>(std::lower_bound(joint.vars.begin(), joint.vars.end(), scope[s]) -
                                      joint.vars.begin());
  }
  for (std::size_t i = 0; i < out_radix.size(); ++i) {
    auto digits = out_radix.decode(i);
    std::size_t fi = 0;
    for (std::size_t s = 0; s < scope.size(); ++s) fi += digits[s] * fstride[pos[s]];
    table.probabilities[i] = joint.values[fi];
  }
  return table;
}

MarginalTable brute_force_joint(const BeliefNetwork& net, std::size_t cell_budget) {
  MarginalTable table;
  std::size_t cells = 1;
  for (std::size_t v = 0; v < net.size(); ++v) {
    table.scope.push_back(v);
    table.arities.push_back(net.variable(v).arity());
    if (!checked_mul(cells, net.variable(v).arity(), cell_budget, cells)) {
      throw ResourceError("joint table of network '" + net.name() + "' exceeds " +
                              std::to_string(cell_budget) + " cells",
                          cell_budget + 1);
    }
  }
  const MixedRadix radix(table.arities);
  table.probabilities.resize(cells);
  Assignment a;
  for (std::size_t i = 0; i < cells; ++i) {
    a.values = radix.decode(i);
    table.probabilities[i] = joint_probability(net, a);
  }
  return table;
}

}  // namespace kutato
