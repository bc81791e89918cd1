#pragma once

#include <cstddef>
#include <cstdint>

#include "kutato/model.hpp"

namespace kutato {

struct SampleSpec {
  std::size_t n_cases = 0;
  std::uint64_t seed = 0;
};

// Logic (ancestral) sampling. Each case visits variables in topological
// order and draws one uniform deviate per variable from a mt19937_64 stream
// seeded with spec.seed; the deviate is (word >> 11) * 2^-53 and selects a
// value by inverse-CDF lookup. Complete cases, unit weights.
CaseDatabase logic_sample(const BeliefNetwork& net, const SampleSpec& spec);

// Every joint configuration with positive probability as one row weighted
// by probability * total_weight: a stand-in for an infinite database.
CaseDatabase exact_joint_database(const BeliefNetwork& net, double total_weight,
                                  std::size_t cell_budget = std::size_t{1} << 24);

}  // namespace kutato
