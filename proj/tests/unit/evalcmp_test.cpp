#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kutato/errors.hpp"
#include "kutato/estimation.hpp"
#include "kutato/evalcmp.hpp"
#include "kutato/sampling.hpp"
#include "support/networks.hpp"

using namespace kutato;

TEST_CASE("identical structures give an empty diff") {
  const auto net = testing::five_node_network();
  CHECK(structural_diff(net, net).empty());
  CHECK(same_structure(net, net));
  CHECK(cpt_max_abs_error(net, net) == 0.0);
  CHECK(distribution_kl(net, net) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("reversed arcs are neither missing nor extra") {
  const auto ref = testing::two_node_chain();
  Structure learned = ref.structure();
  learned.parents = {{1}, {}};
  const auto diff = structural_diff(learned, ref.structure());
  CHECK(diff.missing.empty());
  CHECK(diff.extra.empty());
  REQUIRE(diff.reversed.size() == 1);
  CHECK(diff.reversed[0] == Arc{"A", "B"});
}

TEST_CASE("two removed and two added arcs on a 46-arc structure") {
  const auto ref = testing::synthetic_network(11, {.nodes = 37, .arcs = 46, .min_arity = 2, .max_arity = 4});
  Structure learned = ref.structure();
  // Remove two arcs.
  std::vector<Arc> removed;
  for (std::size_t v = 0; v < learned.size() && removed.size() < 2; ++v) {
    if (!learned.parents[v].empty()) {
      removed.push_back({learned.variables[learned.parents[v].front()].name, learned.variables[v].name});
      learned.parents[v].erase(learned.parents[v].begin());
    }
  }
  // Add two arcs between non-adjacent pairs.
  std::vector<Arc> added;
  for (std::size_t to = 1; to < learned.size() && added.size() < 2; ++to) {
    for (std::size_t from = 0; from < to && added.size() < 2; ++from) {
      if (ref.structure().has_arc(from, to) || ref.structure().has_arc(to, from)) continue;
      learned.parents[to].push_back(from);
      added.push_back({learned.variables[from].name, learned.variables[to].name});
      break;
    }
  }
  const auto diff = structural_diff(learned, ref.structure());
  CHECK(diff.missing.size() == 2);
  CHECK(diff.extra.size() == 2);
  CHECK(diff.reversed.empty());
  for (const auto& a : removed) CHECK(std::find(diff.missing.begin(), diff.missing.end(), a) != diff.missing.end());
  for (const auto& a : added) CHECK(std::find(diff.extra.begin(), diff.extra.end(), a) != diff.extra.end());
}

TEST_CASE("cpt error detects a perturbed row") {
  const auto ref = testing::five_node_network();
  auto parts = ref.parts();
  parts.cpts[3] = Cpt(2, 4, {0.87, 0.13, 0.7, 0.3, 0.3, 0.7, 0.1, 0.9});
  const BeliefNetwork perturbed(std::move(parts));
  CHECK(cpt_max_abs_error(perturbed, ref) >= 0.03);
  CHECK(cpt_max_abs_error(perturbed, ref) == doctest::Approx(0.03));
}

TEST_CASE("cpt error rejects different structures") {
  const auto chain = testing::two_node_chain();
  auto coins = testing::fair_coins(2);
  CHECK_FALSE(same_structure(chain, coins));
  CHECK_THROWS(cpt_max_abs_error(chain, coins));
}

TEST_CASE("KL of the chain from independent fair coins") {
  const auto chain = testing::two_node_chain();
  NetworkParts parts;
  parts.name = "coins";
  parts.structure.variables = chain.variables();
  parts.structure.parents = {{}, {}};
  parts.cpts = {Cpt::uniform(2, 1), Cpt::uniform(2, 1)};
  const BeliefNetwork coins(std::move(parts));
  // D(chain || uniform) = ln 4 - H(chain).
  CHECK(distribution_kl(coins, chain) == doctest::Approx(std::log(4.0) - 1.0586708905490594).epsilon(1e-12));
}

TEST_CASE("KL is infinite where the learned joint has a hole") {
  const auto chain = testing::two_node_chain();
  auto parts = chain.parts();
  parts.cpts[0] = Cpt(2, 1, {1.0, 0.0});
  const BeliefNetwork holed(std::move(parts));
  CHECK(distribution_kl(holed, chain) == std::numeric_limits<double>::infinity());
}

TEST_CASE("fitted KL shrinks as the sample grows") {
  const auto truth = testing::five_node_network();
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t n : {100u, 1000u, 10000u}) {
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto db = logic_sample(truth, {n, seed});
      total += distribution_kl(fit_parameters(truth.structure(), db, Estimator::dirichlet), truth);
    }
    CHECK(total < previous);
    previous = total;
  }
}

TEST_CASE("labels are matched by text, not position") {
  const auto ref = testing::two_node_chain();
  NetworkParts parts;
  parts.name = "flipped";
  parts.structure.variables = {{"A", {"f", "t"}}, {"B", {"f", "t"}}};
  parts.structure.parents = {{}, {0}};
  parts.cpts = {Cpt(2, 1, {0.7, 0.3}), Cpt(2, 2, {0.8, 0.2, 0.1, 0.9})};
  const BeliefNetwork flipped(std::move(parts));
  CHECK(same_structure(flipped, ref));
  CHECK(cpt_max_abs_error(flipped, ref) <= 1e-15);
  CHECK(distribution_kl(flipped, ref) == doctest::Approx(0.0).epsilon(1e-15));

  auto other = ref.parts();
  other.structure.variables[1].values = {"t", "x"};
  CHECK_FALSE(same_structure(BeliefNetwork(other), ref));
  CHECK_THROWS_AS(distribution_kl(BeliefNetwork(other), ref), ValidationError);
}
