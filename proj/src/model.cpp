#include "kutato/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "kutato/errors.hpp"

namespace kutato {

std::optional<std::size_t> Variable::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == label) return i;
  }
  return std::nullopt;
}

MixedRadix::MixedRadix(std::vector<std::size_t> radices)
    : radices_(std::move(radices)), strides_(radices_.size(), 1) {
  size_ = 1;
  for (std::size_t i = radices_.size(); i-- > 0;) {
    strides_[i] = size_;
    size_ *= radices_[i];
  }
}

std::size_t MixedRadix::encode(std::span<const std::size_t> digits) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < radices_.size(); ++i) index += digits[i] * strides_[i];
  return index;
}

std::vector<std::size_t> MixedRadix::decode(std::size_t index) const {
  std::vector<std::size_t> digits(radices_.size());
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    digits[i] = index / strides_[i];
    index %= strides_[i];
  }
  return digits;
}

Cpt::Cpt(std::size_t arity, std::size_t rows, std::vector<double> probabilities)
    : arity_(arity), rows_(rows), probabilities_(std::move(probabilities)) {}

Cpt Cpt::uniform(std::size_t arity, std::size_t rows) {
  return Cpt(arity, rows, std::vector<double>(arity * rows, 1.0 / static_cast<double>(arity)));
}

void Cpt::normalize_rows() {
  for (std::size_t r = 0; r < rows_; ++r) {
    auto first = probabilities_.begin() + static_cast<std::ptrdiff_t>(r * arity_);
    auto last = first + static_cast<std::ptrdiff_t>(arity_);
    const double sum = std::accumulate(first, last, 0.0);
    // Sums off by rounding alone are left untouched so stored rows round-trip.
    const double noise = static_cast<double>(arity_) * std::numeric_limits<double>::epsilon();
    if (sum > 0.0 && std::abs(sum - 1.0) > noise) std::for_each(first, last, [sum](double& p) { p /= sum; });
  }
}

Structure Structure::arc_free(std::vector<Variable> variables) {
  Structure s;
  s.parents.assign(variables.size(), {});
  s.variables = std::move(variables);
  return s;
}

std::optional<std::size_t> Structure::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Structure::arc_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : parents) n += p.size();
  return n;
}

bool Structure::has_arc(std::size_t from, std::size_t to) const {
  const auto& p = parents[to];
  return std::find(p.begin(), p.end(), from) != p.end();
}

std::size_t Structure::parent_configurations(std::size_t node) const {
  std::size_t q = 1;
  for (auto p : parents[node]) q *= variables[p].arity();
  return q;
}

MixedRadix Structure::parent_radix(std::size_t node) const {
  std::vector<std::size_t> radices;
  radices.reserve(parents[node].size());
  for (auto p : parents[node]) radices.push_back(variables[p].arity());
  return MixedRadix(std::move(radices));
}

std::size_t Structure::parent_configuration(std::size_t node,
                                            std::span<const std::size_t> values) const {
  std::size_t index = 0;
  for (auto p : parents[node]) index = index * variables[p].arity() + values[p];
  return index;
}

bool ValidationReport::has(std::string_view kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << v.kind << ": ";
    if (!v.variable.empty()) out << "variable '" << v.variable << "' ";
    if (v.row) out << "row " << *v.row << " ";
    out << v.message << '\n';
  }
  return out.str();
}

namespace {

// Returns the variables of one directed cycle (in arc order), or empty.
std::vector<std::size_t> find_cycle(const Structure& s) {
  const std::size_t n = s.size();
  // Children adjacency from parent lists.
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (auto p : s.parents[v]) {
      if (p < n) children[p].push_back(v);
    }
  }
  enum class Mark { white, grey, black };
  std::vector<Mark> mark(n, Mark::white);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> cycle;

  std::function<bool(std::size_t)> visit = [&](std::size_t v) {
    mark[v] = Mark::grey;
    stack.push_back(v);
    for (auto c : children[v]) {
      if (mark[c] == Mark::grey) {
        auto it = std::find(stack.begin(), stack.end(), c);
        cycle.assign(it, stack.end());
        return true;
      }
      if (mark[c] == Mark::white && visit(c)) return true;
    }
    stack.pop_back();
    mark[v] = Mark::black;
    return false;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (mark[v] == Mark::white && visit(v)) break;
  }
  return cycle;
}

std::string cycle_text(const Structure& s, const std::vector<std::size_t>& cycle) {
  std::string text;
  for (auto v : cycle) text += s.variables[v].name + " -> ";
  text += s.variables[cycle.front()].name;
  return text;
}

}  // namespace

ValidationReport validate_structure(const Structure& s) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string var, std::string msg) {
    report.violations.push_back({std::move(kind), std::move(var), std::nullopt, std::move(msg)});
  };

  std::unordered_set<std::string> names;
  for (const auto& v : s.variables) {
    if (v.name.empty()) add("name", "", "variable with empty name");
    if (!names.insert(v.name).second) add("name", v.name, "duplicate variable name");
    if (v.arity() < 1) add("arity", v.name, "variable has no values");
    std::unordered_set<std::string> labels;
    for (const auto& l : v.values) {
      if (!labels.insert(l).second) add("label", v.name, "duplicate value label '" + l + "'");
    }
  }
  if (s.parents.size() != s.variables.size()) {
    add("shape", "", "parent list count does not match variable count");
    return report;
  }
  bool indices_ok = true;
  for (std::size_t v = 0; v < s.size(); ++v) {
    const auto& name = s.variables[v].name;
    std::unordered_set<std::size_t> seen;
    for (auto p : s.parents[v]) {
      if (p >= s.size()) {
        add("parent", name, "parent index " + std::to_string(p) + " out of range");
        indices_ok = false;
        continue;
      }
      if (p == v) add("self-parent", name, "variable lists itself as a parent");
      if (!seen.insert(p).second) {
        add("duplicate parent", name, "parent '" + s.variables[p].name + "' listed twice");
      }
    }
  }
  if (indices_ok) {
    if (auto cycle = find_cycle(s); !cycle.empty()) {
      add("cycle", s.variables[cycle.front()].name, "directed cycle " + cycle_text(s, cycle));
    }
  }
  return report;
}

ValidationReport validate_network(const NetworkParts& parts) {
  ValidationReport report = validate_structure(parts.structure);
  const auto& s = parts.structure;
  if (parts.cpts.size() != s.size()) {
    report.violations.push_back({"shape", "", std::nullopt, "CPT count does not match variable count"});
    return report;
  }
  const bool shapes_known = s.parents.size() == s.size() &&
                            std::all_of(s.parents.begin(), s.parents.end(), [&](const ParentList& ps) {
                              return std::all_of(ps.begin(), ps.end(), [&](auto p) { return p < s.size(); });
                            });
  for (std::size_t v = 0; v < s.size(); ++v) {
    const auto& cpt = parts.cpts[v];
    const auto& name = s.variables[v].name;
    if (cpt.arity() != s.variables[v].arity() || cpt.data().size() != cpt.arity() * cpt.rows()) {
      report.violations.push_back({"shape", name, std::nullopt, "CPT width does not match arity"});
      continue;
    }
    if (shapes_known && cpt.rows() != s.parent_configurations(v)) {
      report.violations.push_back({"shape", name, std::nullopt,
                                   "CPT has " + std::to_string(cpt.rows()) + " rows, expected " +
                                       std::to_string(s.parent_configurations(v))});
      continue;
    }
    for (std::size_t r = 0; r < cpt.rows(); ++r) {
      double sum = 0.0;
      bool range_ok = true;
      for (double p : cpt.row(r)) {
        if (!(p >= 0.0 && p <= 1.0)) range_ok = false;
        sum += p;
      }
      if (!range_ok) {
        report.violations.push_back({"range", name, r, "entry outside [0, 1]"});
      } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg << "row sums to " << sum;
        report.violations.push_back({"row sum", name, r, msg.str()});
      }
    }
  }
  return report;
}

BeliefNetwork::BeliefNetwork(NetworkParts parts)
    : name_(std::move(parts.name)), structure_(std::move(parts.structure)), cpts_(std::move(parts.cpts)) {
  NetworkParts view{name_, structure_, cpts_};
  if (auto report = validate_network(view); !report.ok()) {
    throw ValidationError("invalid network '" + name_ + "':\n" + report.to_string());
  }
  for (auto& c : cpts_) c.normalize_rows();
}

ValidationReport validate_network(const BeliefNetwork& net) { return validate_network(net.parts()); }

std::vector<std::size_t> topological_order(const Structure& s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> pending(n);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t v = 0; v < n; ++v) {
    pending[v] = s.parents[v].size();
    for (auto p : s.parents[v]) children[p].push_back(v);
  }
  // Min-heap on canonical index gives the deterministic tie-break.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (pending[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    auto v = ready.top();
    ready.pop();
    order.push_back(v);
    for (auto c : children[v]) {
      if (--pending[c] == 0) ready.push(c);
    }
  }
  if (order.size() != n) {
    auto cycle = find_cycle(s);
    throw ValidationError("cycle detected: " + cycle_text(s, cycle));
  }
  return order;
}

std::vector<std::size_t> topological_order(const BeliefNetwork& net) {
  return topological_order(net.structure());
}

double joint_probability(const BeliefNetwork& net, const Assignment& a) {
  const auto& s = net.structure();
  double p = 1.0;
  for (std::size_t v = 0; v < net.size(); ++v) {
    p *= net.cpt(v).at(s.parent_configuration(v, a.values), a.values[v]);
  }
  return p;
}

CaseDatabase::CaseDatabase(std::vector<Variable> variables, std::vector<std::int32_t> cells,
                           std::vector<double> weights)
    : variables_(std::move(variables)), cells_(std::move(cells)), weights_(std::move(weights)) {
  const std::size_t width = variables_.size();
  if (width == 0 ? !cells_.empty() : cells_.size() != weights_.size() * width) {
    throw ValidationError("case database is not rectangular");
  }
  for (std::size_t r = 0; r < weights_.size(); ++r) {
    if (!(weights_[r] >= 0.0) || !std::isfinite(weights_[r])) {
      throw ValidationError("row " + std::to_string(r) + " has a negative or non-finite weight");
    }
    for (std::size_t v = 0; v < width; ++v) {
      auto c = cells_[r * width + v];
      if (c != kMissing && (c < 0 || static_cast<std::size_t>(c) >= variables_[v].arity())) {
        throw ValidationError("row " + std::to_string(r) + ", variable '" + variables_[v].name +
                              "': value index out of range");
      }
    }
  }
  total_weight_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

CaseDatabase::CaseDatabase(std::vector<Variable> variables, std::vector<std::int32_t> cells)
    : CaseDatabase(variables, cells,
                   std::vector<double>(variables.empty() ? 0 : cells.size() / variables.size(), 1.0)) {}

std::optional<std::size_t> CaseDatabase::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return std::nullopt;
}

CaseDatabase CaseDatabase::scaled(double factor) const {
  auto w = weights_;
  for (auto& x : w) x *= factor;
  return CaseDatabase(variables_, cells_, std::move(w));
}

CaseDatabase CaseDatabase::permuted(std::span<const std::size_t> permutation) const {
  std::vector<std::int32_t> cells;
  std::vector<double> weights;
  cells.reserve(cells_.size());
  weights.reserve(weights_.size());
  for (auto src : permutation) {
    auto r = row(src);
    cells.insert(cells.end(), r.begin(), r.end());
    weights.push_back(weights_[src]);
  }
  return CaseDatabase(variables_, std::move(cells), std::move(weights));
}

}  // namespace kutato
