#include "kutato/learner.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "kutato/entropy.hpp"
#include "kutato/errors.hpp"

namespace kutato {

std::string_view to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::no_significant_candidate:
      return "no-significant-candidate";
    case HaltReason::min_delta:
      return "min-delta";
    case HaltReason::max_parents_exhausted:
      return "max-parents-exhausted";
    case HaltReason::no_candidates:
      return "no-candidates";
  }
  return "unknown";
}

int degrees_of_freedom(std::size_t child_arity, std::size_t new_parent_arity,
                       std::span<const std::size_t> existing_parent_arities) {
  std::size_t q = 1;
  for (auto a : existing_parent_arities) q *= a;
  const std::size_t df = (child_arity - 1) * (new_parent_arity - 1) * q;
  // Constant variables give df 0; the test is then vacuous, keep df >= 1.
  return static_cast<int>(std::max<std::size_t>(df, 1));
}

CandidateEvaluation evaluate_candidate(const CaseDatabase& db, const Structure& structure, std::size_t from,
                                       std::size_t to, Estimator mode) {
  if (from == to || from >= structure.size() || to >= structure.size()) {
    throw ValidationError("evaluate_candidate: bad arc endpoints");
  }
  if (structure.has_arc(from, to)) throw ValidationError("evaluate_candidate: arc already present");

  const auto& parents = structure.parents[to];
  ParentList enlarged = parents;
  enlarged.push_back(from);  // least significant digit
  const auto wide = count_family(db, to, enlarged);

  // Marginalize the new parent out of the same rows.
  const std::size_t from_arity = db.variable(from).arity();
  FamilyCounts narrow;
  narrow.child = to;
  narrow.parents = parents;
  narrow.arity = wide.arity;
  narrow.config_totals.assign(wide.configurations() / from_arity, 0.0);
  narrow.counts.assign(narrow.config_totals.size() * narrow.arity, 0.0);
  for (std::size_t c = 0; c < wide.configurations(); ++c) {
    const std::size_t reduced = c / from_arity;
    narrow.config_totals[reduced] += wide.config_totals[c];
    for (std::size_t x = 0; x < wide.arity; ++x) narrow.counts[reduced * wide.arity + x] += wide.count(c, x);
  }

  const auto before = family_entropy(narrow, mode);
  const auto after = family_entropy(wide, mode);

  CandidateEvaluation ev;
  ev.from = from;
  ev.to = to;
  ev.n = after.weight;
  ev.delta_h = before.entropy - after.entropy;
  std::vector<std::size_t> arities;
  for (auto p : parents) arities.push_back(db.variable(p).arity());
  ev.df = degrees_of_freedom(db.variable(to).arity(), from_arity, arities);
  ev.statistic = 2.0 * ev.n * ev.delta_h;
  if (ev.statistic > 0.0) {
    ev.p_value = chi_squared_survival(ev.statistic, ev.df);
    ev.log_p_value = chi_squared_log_survival(ev.statistic, ev.df);
  }
  return ev;
}

namespace {

bool nearly_equal(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// True when `a` should be preferred over the incumbent `b`. Candidates are
// scanned in canonical (from, to) order, so an exact tie keeps the earlier.
bool better(const CandidateEvaluation& a, const CandidateEvaluation& b) {
  if (!nearly_equal(a.log_p_value, b.log_p_value)) return a.log_p_value < b.log_p_value;
  if (!nearly_equal(a.delta_h, b.delta_h)) return a.delta_h > b.delta_h;
  return false;
}

bool reaches(const Structure& s, std::size_t source, std::size_t target) {
  // Walk children via parent lists.
  std::vector<bool> seen(s.size(), false);
  std::vector<std::size_t> stack{source};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (v == target) return true;
    if (seen[v]) continue;
    seen[v] = true;
    for (std::size_t c = 0; c < s.size(); ++c) {
      if (!seen[c] && s.has_arc(v, c)) stack.push_back(c);
    }
  }
  return false;
}

std::vector<std::size_t> resolve_order(const CaseDatabase& db, const std::vector<std::string>& names) {
  std::vector<std::size_t> rank(db.variable_count(), db.variable_count());
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto idx = db.index_of(names[i]);
    if (!idx) throw ConfigError("order names unknown variable '" + names[i] + "'");
    if (rank[*idx] != db.variable_count()) throw ConfigError("order lists '" + names[i] + "' twice");
    rank[*idx] = i;
  }
  for (std::size_t v = 0; v < db.variable_count(); ++v) {
    if (rank[v] == db.variable_count()) throw ConfigError("order omits variable '" + db.variable(v).name + "'");
  }
  return rank;
}

std::vector<CandidateEvaluation> evaluate_all(const CaseDatabase& db, const Structure& s,
                                              const std::vector<std::pair<std::size_t, std::size_t>>& arcs,
                                              Estimator mode, std::size_t threads) {
  std::vector<CandidateEvaluation> out(arcs.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < arcs.size(); i += stride) {
      out[i] = evaluate_candidate(db, s, arcs[i].first, arcs[i].second, mode);
    }
  };
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), std::max<std::size_t>(arcs.size(), 1));
  if (workers <= 1) {
    work(0, 1);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  pool.clear();  // joins
  return out;
}

double node_entropy(const CaseDatabase& db, const Structure& s, std::size_t v, Estimator mode) {
  const auto fe = family_entropy(count_family(db, v, s.parents[v]), mode);
  if (fe.weight > 0.0) return fe.entropy;
  if (mode == Estimator::ml) {
    throw ValidationError("family of '" + s.variables[v].name + "' has no complete rows");
  }
  // No data: the smoothed CPT is uniform.
  return std::log(static_cast<double>(s.variables[v].arity()));
}

}  // namespace

LearnResult kutato_learn(const CaseDatabase& db, const LearnConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const std::size_t n = db.variable_count();
  std::optional<std::vector<std::size_t>> rank;
  if (config.order) rank = resolve_order(db, *config.order);

  Structure structure = Structure::arc_free(db.variables());
  LearnTrace trace;
  std::vector<double> per_node(n);
  for (std::size_t v = 0; v < n; ++v) per_node[v] = node_entropy(db, structure, v, config.mode);
  auto total = [&] {
    double t = 0.0;
    for (double h : per_node) t += h;
    return t;
  };
  trace.initial_entropy = total();

  for (;;) {
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    std::size_t blocked = 0;
    for (std::size_t from = 0; from < n; ++from) {
      for (std::size_t to = 0; to < n; ++to) {
        if (from == to || structure.has_arc(from, to)) continue;
        if (rank) {
          if ((*rank)[from] > (*rank)[to]) continue;
        } else if (structure.has_arc(to, from) || reaches(structure, to, from)) {
          continue;
        }
        if (config.max_parents && structure.parents[to].size() >= *config.max_parents) {
          ++blocked;
          continue;
        }
        arcs.emplace_back(from, to);
      }
    }
    trace.candidates_per_cycle.push_back(arcs.size());
    if (arcs.empty()) {
      trace.halt_reason = blocked > 0 ? HaltReason::max_parents_exhausted : HaltReason::no_candidates;
      break;
    }

    const auto scored = evaluate_all(db, structure, arcs, config.mode, config.threads);
    const CandidateEvaluation* best = &scored.front();
    for (const auto& ev : scored) {
      if (better(ev, *best)) best = &ev;
    }
    if (best->p_value > config.alpha) {
      trace.halt_reason = HaltReason::no_significant_candidate;
      break;
    }
    if (best->delta_h <= config.min_delta) {
      trace.halt_reason = HaltReason::min_delta;
      break;
    }

    auto& ps = structure.parents[best->to];
    ps.insert(std::upper_bound(ps.begin(), ps.end(), best->from), best->from);
    per_node[best->to] = node_entropy(db, structure, best->to, config.mode);
    trace.steps.push_back({trace.steps.size() + 1, *best, total()});
  }

  return {fit_parameters(structure, db, config.mode, config.network_name), std::move(trace)};
}

}  // namespace kutato
