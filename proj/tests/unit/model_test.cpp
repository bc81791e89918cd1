#include <doctest.h>

#include <cmath>
#include <random>

#include "kutato/errors.hpp"
#include "kutato/inference.hpp"
#include "kutato/model.hpp"
#include "support/networks.hpp"

using namespace kutato;
using kutato::testing::binary;

namespace {

NetworkParts chain_parts() { return kutato::testing::two_node_chain().parts(); }

double sum_over_assignments(const BeliefNetwork& net) {
  std::vector<std::size_t> arities;
  for (const auto& v : net.variables()) arities.push_back(v.arity());
  MixedRadix radix(arities);
  double total = 0.0;
  for (std::size_t i = 0; i < radix.size(); ++i) total += joint_probability(net, {radix.decode(i)});
  return total;
}

}  // namespace

TEST_CASE("validate_network accepts a well-formed chain") {
  CHECK(validate_network(chain_parts()).ok());
}

TEST_CASE("validate_network names a bad row sum") {
  auto parts = chain_parts();
  parts.cpts[1] = Cpt(2, 2, {0.9, 0.1, 0.2, 0.7});
  const auto report = validate_network(parts);
  REQUIRE(report.has("row sum"));
  CHECK(report.violations.front().variable == "B");
  CHECK(report.violations.front().row == 1);
}

TEST_CASE("validate_network reports a cycle and keeps scanning") {
  auto parts = chain_parts();
  parts.structure.parents[0] = {1};
  parts.cpts[0] = Cpt(2, 2, {0.5, 0.5, 0.5, 0.4});
  const auto report = validate_network(parts);
  CHECK(report.has("cycle"));
  CHECK(report.has("row sum"));
  CHECK_THROWS_AS(BeliefNetwork{parts}, ValidationError);
}

TEST_CASE("validate_network catches shape, duplicate and self parents") {
  auto parts = chain_parts();
  parts.structure.parents[1] = {0, 0};
  CHECK(validate_network(parts).has("duplicate parent"));

  parts = chain_parts();
  parts.structure.parents[1] = {1};
  CHECK(validate_network(parts).has("self-parent"));

  parts = chain_parts();
  parts.cpts[1] = Cpt(2, 1, {0.5, 0.5});
  CHECK(validate_network(parts).has("shape"));

  parts = chain_parts();
  parts.cpts[0] = Cpt(2, 1, {1.2, -0.2});
  CHECK(validate_network(parts).has("range"));
}

TEST_CASE("constant variables are allowed") {
  NetworkParts parts;
  parts.structure.variables = {{"K", {"only"}}, binary("B")};
  parts.structure.parents = {{}, {0}};
  parts.cpts = {Cpt(1, 1, {1.0}), Cpt(2, 1, {0.5, 0.5})};
  BeliefNetwork net(parts);
  CHECK(joint_probability(net, {{0, 1}}) == doctest::Approx(0.5));
}

TEST_CASE("rows within tolerance are renormalized") {
  auto parts = chain_parts();
  parts.cpts[0] = Cpt(2, 1, {0.3000004, 0.7});
  BeliefNetwork net(parts);
  CHECK(std::abs(net.cpt(0).at(0, 0) + net.cpt(0).at(0, 1) - 1.0) <= 1e-15);
  CHECK(net.cpt(0).at(0, 0) < 0.3000004);
}

TEST_CASE("rows already normalized are stored bit for bit") {
  auto parts = chain_parts();
  parts.cpts[0] = Cpt(2, 1, {0.1, 0.9000000000000001});
  BeliefNetwork net(parts);
  CHECK(net.cpt(0).at(0, 0) == 0.1);
  CHECK(net.cpt(0).at(0, 1) == 0.9000000000000001);
}

TEST_CASE("topological_order") {
  SUBCASE("no arcs keeps canonical order") {
    auto coins = kutato::testing::fair_coins(3);
    CHECK(topological_order(coins) == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("chain declared backwards") {
    Structure s;
    s.variables = {binary("A"), binary("B"), binary("C")};
    s.parents = {{1}, {2}, {}};
    CHECK(topological_order(s) == std::vector<std::size_t>{2, 1, 0});
  }
  SUBCASE("cycle names its variables") {
    Structure s;
    s.variables = {binary("A"), binary("B"), binary("C")};
    s.parents = {{}, {2}, {1}};
    try {
      topological_order(s);
      FAIL("expected a cycle error");
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      CHECK(what.find('B') != std::string::npos);
      CHECK(what.find('C') != std::string::npos);
    }
  }
}

TEST_CASE("topological order is a permutation respecting arcs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto net = kutato::testing::random_network(rng, {.nodes = 9, .arc_probability = 0.4});
    auto order = topological_order(net);
    std::vector<std::size_t> position(net.size());
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) REQUIRE(sorted[i] == i);
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    for (std::size_t v = 0; v < net.size(); ++v) {
      for (auto p : net.parents(v)) CHECK(position[p] < position[v]);
    }
  }
}

TEST_CASE("joint_probability") {
  const auto net = kutato::testing::two_node_chain();
  CHECK(joint_probability(net, {{0, 0}}) == doctest::Approx(0.27).epsilon(1e-15));
  CHECK(sum_over_assignments(net) == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("deterministic network") {
    NetworkParts parts = chain_parts();
    parts.cpts = {Cpt(2, 1, {0.0, 1.0}), Cpt(2, 2, {0.0, 1.0, 1.0, 0.0})};
    BeliefNetwork det(parts);
    CHECK(joint_probability(det, {{1, 0}}) == 1.0);
    CHECK(joint_probability(det, {{0, 0}}) == 0.0);
    CHECK(joint_probability(det, {{1, 1}}) == 0.0);
  }
}

TEST_CASE("joint probabilities sum to one on random networks") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto net = kutato::testing::random_network(
        rng, {.nodes = 2 + static_cast<std::size_t>(trial % 11), .max_arity = 4, .arc_probability = 0.35});
    CHECK(std::abs(sum_over_assignments(net) - 1.0) <= 1e-9);
  }
}

TEST_CASE("mixed-radix encode/decode round-trips") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> radices(rng() % 5);
    for (auto& r : radices) r = 1 + rng() % 4;
    MixedRadix radix(radices);
    for (std::size_t i = 0; i < radix.size(); ++i) REQUIRE(radix.encode(radix.decode(i)) == i);
    if (!radices.empty()) {
      // First digit is most significant.
      CHECK(radix.strides()[0] * radices[0] == radix.size());
    }
  }
}

TEST_CASE("parent configuration uses first parent as most significant") {
  Structure s;
  s.variables = {{"P", {"a", "b", "c"}}, binary("Q"), binary("X")};
  s.parents = {{}, {}, {0, 1}};
  CHECK(s.parent_configuration(2, std::vector<std::size_t>{2, 1, 0}) == 5);
  CHECK(s.parent_configuration(2, std::vector<std::size_t>{1, 0, 0}) == 2);
}

TEST_CASE("CaseDatabase invariants") {
  std::vector<Variable> vars = {binary("A"), binary("B")};
  CHECK_THROWS_AS(CaseDatabase(vars, {0, 2}), ValidationError);
  CHECK_THROWS_AS(CaseDatabase(vars, {0, 1, 1}), ValidationError);
  CHECK_THROWS_AS(CaseDatabase(vars, {0, 1}, {-1.0}), ValidationError);
  CaseDatabase db(vars, {0, 1, CaseDatabase::kMissing, 0}, {2.0, 0.5});
  CHECK(db.total_weight() == 2.5);
  CHECK(db.row_count() == 2);
  CHECK(db.scaled(4.0).total_weight() == 10.0);
  const std::vector<std::size_t> perm{1, 0};
  CHECK(db.permuted(perm).cell(0, 0) == CaseDatabase::kMissing);
}
