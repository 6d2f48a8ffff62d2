#include <numeric>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "otter/enumerate.hpp"
#include "otter/tree.hpp"

using namespace otter;

namespace {

AdjacencyList relabel(const AdjacencyList& adj, std::mt19937_64& rng, std::vector<int>& perm) {
  perm.resize(adj.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  AdjacencyList out(adj.size());
  for (std::size_t v = 0; v < adj.size(); ++v) {
    for (int u : adj[v]) out[perm[v]].push_back(perm[u]);
  }
  for (auto& row : out) std::shuffle(row.begin(), row.end(), rng);
  return out;
}

}  // namespace

TEST_CASE("canonical forms do not depend on vertex labels") {
  std::mt19937_64 rng(42);
  for (std::size_t n = 1; n <= 9; ++n) {
    for (const auto& g : oracle::free_trees(n)) {
      const FreeTree t = canonicalize_free(g);
      std::vector<int> perm;
      const auto h = relabel(g, rng, perm);
      CHECK(canonicalize_free(h) == t);
      CHECK(canonicalize_rooted(h, perm[0]) == canonicalize_rooted(g, 0));
    }
  }
}

TEST_CASE("canonical forms separate non-isomorphic trees") {
  for (std::size_t n = 1; n <= 10; ++n) {
    std::set<FreeTree> seen;
    for (const auto& g : oracle::free_trees(n)) seen.insert(canonicalize_free(g));
    CHECK(seen.size() == oracle::free_trees(n).size());
  }
}

TEST_CASE("orbit counts equal the brute-force number of distinct rootings") {
  for (std::size_t n = 1; n <= 11; ++n) {
    for (const auto& g : oracle::free_trees(n)) {
      const std::size_t expected = oracle::orbits(g);
      const FreeTree t = canonicalize_free(g);
      CHECK(orbit_count(t) == expected);
      CHECK(orbit_count(g) == expected);
      CHECK(serial::orbit_count_by_rerooting(t) == expected);
    }
  }
}

TEST_CASE("orbit count from parent indices matches the adjacency version") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<int> parent(n, -1);
    for (std::size_t v = 1; v < n; ++v) parent[v] = static_cast<int>(rng() % v);
    AdjacencyList adj(n);
    for (std::size_t v = 1; v < n; ++v) {
      adj[v].push_back(parent[v]);
      adj[parent[v]].push_back(static_cast<int>(v));
    }
    CHECK(orbit_count_from_parents(parent) == orbit_count(adj));
    if (n <= 12) CHECK(orbit_count(adj) == oracle::orbits(adj));
  }
  CHECK_THROWS_AS(orbit_count_from_parents({-1, -1}), TreeError);
}

TEST_CASE("fixed-point polynomial equals the permutation search") {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (const auto& g : oracle::free_trees(n)) {
      const FreeTree t = canonicalize_free(g);
      const auto fixed = oracle::fixed_point_counts(g);
      const FixPolynomial p = fix_polynomial(t);
      for (std::size_t k = 0; k <= n; ++k) CHECK(p[k] == fixed[k]);
      CHECK(p == serial::fix_polynomial_brute_force(t));
      CHECK(p.total() == aut_size(t));
    }
  }
}

TEST_CASE("Burnside: automorphisms fix on average one vertex per orbit") {
  for (std::size_t n = 2; n <= 12; ++n) {
    for (const FreeTree& t : gen_free(n)) {
      const FixPolynomial p = fix_polynomial(t);
      CHECK(p.total_fixed_points() == p.total() * static_cast<unsigned long>(orbit_count(t)));
    }
  }
}

TEST_CASE("named small trees") {
  const FreeTree star = parse_free("1 2 2 2 2");
  CHECK(orbit_count(star) == 2);
  CHECK(aut_size(star) == 24);
  const FreeTree path = canonicalize_free(adjacency_from_levels({1, 2, 3, 4, 5}));
  CHECK(orbit_count(path) == 3);
  CHECK(aut_size(path) == 2);
  CHECK_FALSE(path.is_bicentral());
  const FreeTree p4 = canonicalize_free(adjacency_from_levels({1, 2, 3, 4}));
  CHECK(p4.is_bicentral());
  CHECK(orbit_count(p4) == 2);
  CHECK(aut_size(parse_rooted("1 2 2 3 3")) == 2);
  CHECK(aut_size(parse_rooted("1 2 3 3 2 3 3")) == 8);
}

TEST_CASE("centre of a path") {
  CHECK(center(adjacency_from_levels({1, 2, 3, 4, 5})).first == 2);
  const Center c = center(adjacency_from_levels({1, 2, 3, 4}));
  CHECK(c.is_edge());
  CHECK(c.first == 1);
  CHECK(c.second == 2);
}

TEST_CASE("text round trips") {
  for (const FreeTree& t : gen_free(9)) CHECK(parse_free(t.to_string()) == t);
  for (const RootedTree& t : gen_rooted(7)) CHECK(parse_rooted(t.to_string()) == t);
}

TEST_CASE("invalid input is rejected") {
  CHECK_THROWS_AS(parse_rooted("1 3"), TreeError);
  CHECK_THROWS_AS(parse_rooted("2 3"), TreeError);
  CHECK_THROWS_AS(parse_rooted(""), TreeError);
  CHECK_THROWS_AS(validate_tree({{1}, {0}, {}}), TreeError);
  CHECK_THROWS_AS(validate_tree({{1, 2}, {0, 2}, {0, 1}}), TreeError);
}

TEST_CASE("rooted canonical form is idempotent") {
  const RootedTree t = RootedTree({1, 2, 3, 2, 3, 4});
  CHECK(t.canonical().is_canonical());
  CHECK(t.canonical().canonical() == t.canonical());
  CHECK(t.root_degree() == 2);
}
