#include "kutato/estimation.hpp"

#include <algorithm>
#include <numeric>

#include "kutato/errors.hpp"

namespace kutato {

std::string_view to_string(Estimator e) { return e == Estimator::dirichlet ? "dirichlet" : "ml"; }

double FamilyCounts::total() const { return std::accumulate(config_totals.begin(), config_totals.end(), 0.0); }

FamilyCounts count_family(const CaseDatabase& db, std::size_t child, const ParentList& parents) {
  if (child >= db.variable_count()) throw ValidationError("count_family: child index out of range");
  if (std::find(parents.begin(), parents.end(), child) != parents.end()) {
    throw ValidationError("count_family: '" + db.variable(child).name + "' cannot be its own parent");
  }
  FamilyCounts fc;
  fc.child = child;
  fc.parents = parents;
  fc.arity = db.variable(child).arity();
  std::size_t configs = 1;
  for (auto p : parents) {
    if (p >= db.variable_count()) throw ValidationError("count_family: parent index out of range");
    configs *= db.variable(p).arity();
  }
  fc.counts.assign(configs * fc.arity, 0.0);
  fc.config_totals.assign(configs, 0.0);

  for (std::size_t r = 0; r < db.row_count(); ++r) {
    const auto row = db.row(r);
    const auto x = row[child];
    if (x == CaseDatabase::kMissing) continue;
    std::size_t config = 0;
    bool complete = true;
    for (auto p : parents) {
      const auto v = row[p];
      if (v == CaseDatabase::kMissing) {
        complete = false;
        break;
      }
      config = config * db.variable(p).arity() + static_cast<std::size_t>(v);
    }
    if (!complete) continue;
    const double w = db.weight(r);
    fc.counts[config * fc.arity + static_cast<std::size_t>(x)] += w;
    fc.config_totals[config] += w;
  }
  return fc;
}

Cpt estimate_cpt(const FamilyCounts& counts, Estimator mode) {
  const std::size_t arity = counts.arity;
  const std::size_t rows = counts.configurations();
  std::vector<double> probs(rows * arity);
  const double uniform = 1.0 / static_cast<double>(arity);
  for (std::size_t c = 0; c < rows; ++c) {
    const double total = counts.config_totals[c];
    for (std::size_t x = 0; x < arity; ++x) {
      double p;
      if (mode == Estimator::dirichlet) {
        p = (counts.count(c, x) + 1.0) / (total + static_cast<double>(arity));
      } else {
        p = total > 0.0 ? counts.count(c, x) / total : uniform;
      }
      probs[c * arity + x] = p;
    }
  }
  Cpt cpt(arity, rows, std::move(probs));
  cpt.normalize_rows();
  return cpt;
}

std::vector<std::size_t> match_columns(const Structure& structure, const CaseDatabase& db) {
  std::vector<std::size_t> column(structure.size());
  for (std::size_t v = 0; v < structure.size(); ++v) {
    const auto& var = structure.variables[v];
    auto col = db.index_of(var.name);
    if (!col) throw ValidationError("variable '" + var.name + "' not in database");
    const auto& dbvar = db.variable(*col);
    if (dbvar.values != var.values) {
      std::string label;
      for (const auto& l : var.values) {
        if (!dbvar.index_of(l)) {
          label = l;
          break;
        }
      }
      for (const auto& l : dbvar.values) {
        if (label.empty() && !var.index_of(l)) label = l;
      }
      throw ValidationError("vocabulary mismatch for variable '" + var.name + "'" +
                            (label.empty() ? std::string(": label order differs") : " at label '" + label + "'"));
    }
    column[v] = *col;
  }
  return column;
}

BeliefNetwork fit_parameters(const Structure& structure, const CaseDatabase& db, Estimator mode,
                             std::string name) {
  if (auto report = validate_structure(structure); !report.ok()) {
    throw ValidationError("fit_parameters: invalid structure:\n" + report.to_string());
  }
  const auto column = match_columns(structure, db);

  NetworkParts parts{std::move(name), structure, {}};
  parts.cpts.reserve(structure.size());
  for (std::size_t v = 0; v < structure.size(); ++v) {
    ParentList parent_columns;
    for (auto p : structure.parents[v]) parent_columns.push_back(column[p]);
    parts.cpts.push_back(estimate_cpt(count_family(db, column[v], parent_columns), mode));
  }
  return BeliefNetwork(std::move(parts));
}

}  // namespace kutato
