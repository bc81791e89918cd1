#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kutato {

/// A discrete variable with an ordered vocabulary of value labels.
struct Variable {
  std::string name;
  std::vector<std::string> values;

  std::size_t arity() const noexcept { return values.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  friend bool operator==(const Variable&, const Variable&) = default;
};

using ParentList = std::vector<std::size_t>;

/// Mixed-radix codec. The first digit is the most significant, so parent
/// configurations enumerate with the first-listed parent varying slowest.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<std::size_t> radices);

  std::size_t size() const noexcept { return size_; }
  std::span<const std::size_t> radices() const noexcept { return radices_; }
  std::span<const std::size_t> strides() const noexcept { return strides_; }

  std::size_t encode(std::span<const std::size_t> digits) const;
  std::vector<std::size_t> decode(std::size_t index) const;

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Conditional-probability table: one probability vector per parent
/// configuration, stored row-major.
class Cpt {
 public:
  Cpt() = default;
  Cpt(std::size_t arity, std::size_t rows, std::vector<double> probabilities);

  static Cpt uniform(std::size_t arity, std::size_t rows);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t rows() const noexcept { return rows_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(probabilities_).subspan(r * arity_, arity_);
  }
  double at(std::size_t r, std::size_t value) const { return probabilities_[r * arity_ + value]; }
  std::span<const double> data() const noexcept { return probabilities_; }

  // Rescales every row to sum to exactly 1 (rows summing to 0 are left alone).
  void normalize_rows();

 private:
  std::size_t arity_ = 0;
  std::size_t rows_ = 0;
  std::vector<double> probabilities_;
};

/// Variables plus parent sets; a belief network without parameters.
struct Structure {
  std::vector<Variable> variables;
  std::vector<ParentList> parents;

  static Structure arc_free(std::vector<Variable> variables);

  std::size_t size() const noexcept { return variables.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::size_t arc_count() const noexcept;
  bool has_arc(std::size_t from, std::size_t to) const;
  // Product of the parents' arities (1 for a root).
  std::size_t parent_configurations(std::size_t node) const;
  MixedRadix parent_radix(std::size_t node) const;
  // Parent configuration selected by a full assignment of value indices.
  std::size_t parent_configuration(std::size_t node, std::span<const std::size_t> values) const;
};

struct Violation {
  std::string kind;  // "row sum", "cycle", "shape", ...
  std::string variable;
  std::optional<std::size_t> row;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(std::string_view kind) const;
  std::string to_string() const;
};

/// Unchecked ingredients of a BeliefNetwork.
struct NetworkParts {
  std::string name;
  Structure structure;
  std::vector<Cpt> cpts;
};

inline constexpr double kRowSumTolerance = 1e-6;

ValidationReport validate_structure(const Structure& structure);
// Scans everything and reports every violation; never throws.
ValidationReport validate_network(const NetworkParts& parts);

/// A validated, immutable discrete belief network. Variable declaration
/// order is the canonical order.
class BeliefNetwork {
 public:
  // Throws ValidationError carrying the full report. CPT rows are
  // renormalized to sum to exactly 1.
  explicit BeliefNetwork(NetworkParts parts);

  const std::string& name() const noexcept { return name_; }
  const Structure& structure() const noexcept { return structure_; }
  std::size_t size() const noexcept { return structure_.size(); }
  const std::vector<Variable>& variables() const noexcept { return structure_.variables; }
  const Variable& variable(std::size_t i) const { return structure_.variables[i]; }
  const ParentList& parents(std::size_t i) const { return structure_.parents[i]; }
  const Cpt& cpt(std::size_t i) const { return cpts_[i]; }
  const std::vector<Cpt>& cpts() const noexcept { return cpts_; }
  std::optional<std::size_t> index_of(std::string_view name) const { return structure_.index_of(name); }

  NetworkParts parts() const { return {name_, structure_, cpts_}; }

 private:
  std::string name_;
  Structure structure_;
  std::vector<Cpt> cpts_;
};

ValidationReport validate_network(const BeliefNetwork& net);

// Parents before children; ties broken by canonical index. Throws
// ValidationError naming the variables of one cycle.
std::vector<std::size_t> topological_order(const Structure& structure);
std::vector<std::size_t> topological_order(const BeliefNetwork& net);

/// One value index per network variable, in canonical order.
struct Assignment {
  std::vector<std::size_t> values;
};

double joint_probability(const BeliefNetwork& net, const Assignment& assignment);

/// Case data: row-major cells holding a value index or kMissing, with
/// per-row nonnegative weights.
class CaseDatabase {
 public:
  static constexpr std::int32_t kMissing = -1;

  CaseDatabase(std::vector<Variable> variables, std::vector<std::int32_t> cells,
               std::vector<double> weights);
  // Unit weights.
  CaseDatabase(std::vector<Variable> variables, std::vector<std::int32_t> cells);

  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const Variable& variable(std::size_t i) const { return variables_[i]; }
  std::size_t variable_count() const noexcept { return variables_.size(); }
  std::size_t row_count() const noexcept { return weights_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::int32_t cell(std::size_t row, std::size_t var) const {
    return cells_[row * variables_.size() + var];
  }
  std::span<const std::int32_t> row(std::size_t r) const {
    return std::span<const std::int32_t>(cells_).subspan(r * variables_.size(), variables_.size());
  }
  double weight(std::size_t row) const { return weights_[row]; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  // N: the sum of all row weights.
  double total_weight() const noexcept { return total_weight_; }

  // Same data with every weight multiplied by factor (> 0).
  CaseDatabase scaled(double factor) const;
  // Same data with rows reordered: result row i is source row permutation[i].
  CaseDatabase permuted(std::span<const std::size_t> permutation) const;

 private:
  std::vector<Variable> variables_;
  std::vector<std::int32_t> cells_;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
};

}  // namespace kutato
