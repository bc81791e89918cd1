#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kutato/chi_squared.hpp"
#include "kutato/estimation.hpp"
#include "kutato/model.hpp"

namespace kutato {

struct LearnConfig {
  // Total order on variable names; arcs only point from earlier to later.
  // Empty optional: choose directions by entropy, subject to acyclicity.
  std::optional<std::vector<std::string>> order;
  double alpha = 0.05;
  Estimator mode = Estimator::dirichlet;
  std::optional<std::size_t> max_parents;
  // An arc is accepted only if its entropy decrease exceeds this.
  double min_delta = 0.0;
  // Worker threads for candidate scoring; results do not depend on it.
  std::size_t threads = 1;
  std::string network_name = "learned";
};

/// Score of adding one arc `from -> to` to the current structure.
struct CandidateEvaluation {
  std::size_t from = 0;
  std::size_t to = 0;
  double delta_h = 0.0;     // nats; H(to | parents) - H(to | parents + from)
  int df = 1;
  double statistic = 0.0;   // 2 N delta_h
  double p_value = 1.0;
  double log_p_value = 0.0; // ranks candidates whose p-values underflow
  double n = 0.0;           // complete-row weight of the enlarged family
};

enum class HaltReason { no_significant_candidate, min_delta, max_parents_exhausted, no_candidates };

std::string_view to_string(HaltReason reason);

struct LearnStep {
  std::size_t step = 0;  // 1-based
  CandidateEvaluation accepted;
  double entropy_after = 0.0;
};

struct LearnTrace {
  double initial_entropy = 0.0;
  std::vector<LearnStep> steps;
  HaltReason halt_reason = HaltReason::no_candidates;
  std::vector<std::size_t> candidates_per_cycle;
};

struct LearnResult {
  BeliefNetwork network;
  LearnTrace trace;
};

// (arity_child - 1)(arity_new_parent - 1) * prod(arity of existing parents).
int degrees_of_freedom(std::size_t child_arity, std::size_t new_parent_arity,
                       std::span<const std::size_t> existing_parent_arities);

// Scores arc from -> to against `structure`, whose variables are the db's
// columns in db order. Both family entropies are taken over the rows
// complete for the enlarged family.
CandidateEvaluation evaluate_candidate(const CaseDatabase& db, const Structure& structure, std::size_t from,
                                       std::size_t to, Estimator mode);

// Greedy entropy-driven arc addition from the arc-free structure. Throws
// ConfigError when the order is not a permutation of the db variables.
LearnResult kutato_learn(const CaseDatabase& db, const LearnConfig& config);

}  // namespace kutato
