#include <doctest.h>

#include <cmath>
#include <random>

#include "kutato/errors.hpp"
#include "kutato/inference.hpp"
#include "support/networks.hpp"

using namespace kutato;

namespace {

// Sum-rule marginalization of the enumerated joint; the oracle for VE.
std::vector<double> marginalize(const MarginalTable& joint, const std::vector<std::size_t>& scope) {
  std::vector<std::size_t> arities;
  for (auto v : scope) arities.push_back(joint.arities[v]);
  MixedRadix out(arities);
  std::vector<double> result(out.size(), 0.0);
  const auto radix = joint.radix();
  std::vector<std::size_t> digits(scope.size());
  for (std::size_t i = 0; i < joint.size(); ++i) {
    const auto full = radix.decode(i);
    for (std::size_t k = 0; k < scope.size(); ++k) digits[k] = full[scope[k]];
    result[out.encode(digits)] += joint.probabilities[i];
  }
  return result;
}

std::vector<std::size_t> random_scope(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(all[i - 1], all[rng() % i]);
  all.resize(1 + rng() % std::min<std::size_t>(n, 4));
  return all;
}

}  // namespace

TEST_CASE("marginal_over on the two-node chain") {
  const auto net = kutato::testing::two_node_chain();
  auto a = marginal_over(net, {0});
  CHECK(a.probabilities[0] == doctest::Approx(0.3));
  CHECK(a.probabilities[1] == doctest::Approx(0.7));
  auto b = marginal_over(net, {1});
  CHECK(b.probabilities[0] == doctest::Approx(0.41).epsilon(1e-14));
  CHECK(b.probabilities[1] == doctest::Approx(0.59).epsilon(1e-14));
}

TEST_CASE("marginal scope order controls layout") {
  const auto net = kutato::testing::two_node_chain();
  auto ba = marginal_over(net, {1, 0});
  // (B=t, A=f) = 0.7 * 0.2
  CHECK(ba.probabilities[1] == doctest::Approx(0.14));
  CHECK(ba.arities == std::vector<std::size_t>{2, 2});
}

TEST_CASE("marginal_over agrees with brute-force marginalization") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const auto n = 2 + static_cast<std::size_t>(rng() % 9);
    auto net = kutato::testing::random_network(
        rng, {.nodes = n, .max_arity = 3, .arc_probability = 0.4, .deterministic_row = trial % 3 == 0 ? 0.2 : 0.0});
    const auto joint = brute_force_joint(net);
    const auto scope = random_scope(rng, n);
    const auto expected = marginalize(joint, scope);
    const auto got = marginal_over(net, scope);
    REQUIRE(got.size() == expected.size());
    double total = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(std::abs(got.probabilities[i] - expected[i]) <= 1e-9);
      total += got.probabilities[i];
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}

TEST_CASE("marginal over all variables equals the brute-force joint") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto net = kutato::testing::random_network(rng, {.nodes = 6, .max_arity = 3, .arc_probability = 0.5});
    std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
    const auto ve = marginal_over(net, all);
    const auto bf = brute_force_joint(net);
    for (std::size_t i = 0; i < bf.size(); ++i) CHECK(std::abs(ve.probabilities[i] - bf.probabilities[i]) <= 1e-9);
  }
}

TEST_CASE("marginals are invariant to elimination order") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    auto net = kutato::testing::random_network(rng, {.nodes = 8, .max_arity = 3, .arc_probability = 0.45});
    const auto scope = random_scope(rng, net.size());
    const auto reference = marginal_over(net, scope);
    InferenceOptions options;
    std::vector<std::size_t> order(net.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    options.elimination_order = order;
    const auto forced = marginal_over(net, scope, options);
    for (std::size_t i = 0; i < reference.size(); ++i) {
      CHECK(std::abs(forced.probabilities[i] - reference.probabilities[i]) <= 1e-9);
    }
  }
}

TEST_CASE("brute_force_joint") {
  CHECK(brute_force_joint(kutato::testing::five_node_network()).size() == 32);
  const auto coin = brute_force_joint(kutato::testing::fair_coins(1));
  CHECK(coin.probabilities == std::vector<double>{0.5, 0.5});
  double total = 0.0;
  for (double p : brute_force_joint(kutato::testing::four_node_network()).probabilities) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resource budgets are enforced") {
  const auto coins = kutato::testing::fair_coins(10);
  CHECK_THROWS_AS(brute_force_joint(coins, 512), ResourceError);
  CHECK_NOTHROW(brute_force_joint(coins, 1024));

  // A node with many parents forces a large intermediate factor.
  NetworkParts parts = kutato::testing::fair_coins(9).parts();
  parts.structure.variables.push_back(kutato::testing::binary("Sink"));
  parts.structure.parents.push_back({0, 1, 2, 3, 4, 5, 6, 7, 8});
  parts.cpts.push_back(Cpt::uniform(2, 512));
  BeliefNetwork wide(parts);
  InferenceOptions tight;
  tight.cell_budget = 256;
  try {
    marginal_over(wide, {9}, tight);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(e.cells() == 1024);
    CHECK(std::string(e.what()).find("1024") != std::string::npos);
  }
}

TEST_CASE("marginal_over rejects bad scopes") {
  const auto net = kutato::testing::two_node_chain();
  CHECK_THROWS_AS(marginal_over(net, {}), ValidationError);
  CHECK_THROWS_AS(marginal_over(net, {0, 0}), ValidationError);
  CHECK_THROWS_AS(marginal_over(net, {2}), ValidationError);
}
