#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kutato/model.hpp"

namespace kutato::testing {

Variable binary(const std::string& name);

// A -> B with P(A=t)=0.3, P(B=t|A=t)=0.9, P(B=t|A=f)=0.2. Labels t, f.
BeliefNetwork two_node_chain();

// Five binary nodes, arcs A->B, A->C, B->D, C->D, C->E; every CPT entry
// in [0.1, 0.9].
BeliefNetwork five_node_network();

// Fixed four-node network (mixed arities) used for sampling checks.
BeliefNetwork four_node_network();

// Independent fair coins named X0..X{n-1}.
BeliefNetwork fair_coins(std::size_t n);

struct RandomNetSpec {
  std::size_t nodes = 5;
  std::size_t min_arity = 2;
  std::size_t max_arity = 4;
  std::size_t max_parents = 3;
  double arc_probability = 0.3;
  // Probability that a CPT row is deterministic (one entry 1).
  double deterministic_row = 0.0;
};

// Random DAG (arcs from lower to higher index) with Dirichlet(1) CPT rows.
BeliefNetwork random_network(std::mt19937_64& rng, const RandomNetSpec& spec);

struct SyntheticSpec {
  std::size_t nodes = 12;
  std::size_t arcs = 14;
  std::size_t min_arity = 2;
  std::size_t max_arity = 2;
  std::size_t max_parents = 3;
  // Every CPT entry is at least this.
  double min_probability = 0.1;
  // Per-parent logit effect: one child value's logit moves by up to
  // +/- this magnitude across the parent's values.
  double min_effect = 0.75;
  double max_effect = 1.25;
};

// Random DAG with exactly spec.arcs arcs and softmax CPTs whose parent
// effects are bounded away from zero, so every arc is a real dependence.
BeliefNetwork synthetic_network(std::uint64_t seed, const SyntheticSpec& spec);

// Database from label rows (unit weights unless given). "?" is missing.
CaseDatabase make_db(const std::vector<Variable>& variables, const std::vector<std::vector<std::string>>& rows,
                     const std::vector<double>& weights = {});

// G^2 = 2 sum O ln(O E^-1) for child _||_ candidate | given, tallied directly
// from rows complete for all involved variables. Independent of the
// library's family counting.
double g_squared_oracle(const CaseDatabase& db, std::size_t child, std::size_t candidate,
                        const std::vector<std::size_t>& given);

// Random database over `variables` with some missing cells and weights.
CaseDatabase random_db(std::mt19937_64& rng, const std::vector<Variable>& variables, std::size_t rows,
                       double missing_rate, bool random_weights);

}  // namespace kutato::testing
