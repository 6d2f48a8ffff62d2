#pragma once

// Rooted and free unlabelled trees as canonical level sequences, and the
// symmetry statistics of their automorphism groups.
//
// A level sequence lists vertex depths in depth-first order with the root at
// level 1. It is canonical when, at every vertex, the child blocks appear in
// non-increasing lexicographic order; that makes it the lexicographically
// largest sequence of the tree.

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "otter/series.hpp"

namespace otter {

using LevelSequence = std::vector<int>;
using AdjacencyList = std::vector<std::vector<int>>;

class TreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws TreeError unless `adj` is a simple, connected, acyclic graph.
void validate_tree(const AdjacencyList& adj);

class RootedTree {
 public:
  /// Any valid level sequence; use canonical() for the canonical form.
  explicit RootedTree(LevelSequence levels);

  std::size_t size() const { return levels_.size(); }
  const LevelSequence& levels() const { return levels_; }
  bool is_canonical() const;
  RootedTree canonical() const;
  /// Vertex i is the i-th entry of the level sequence; the root is 0.
  AdjacencyList adjacency() const;
  std::vector<int> parents() const;
  /// Number of children of the root.
  std::size_t root_degree() const;
  std::string to_string() const;

  auto operator<=>(const RootedTree&) const = default;

 private:
  LevelSequence levels_;
};

struct Center {
  int first = 0;
  int second = -1;
  bool is_edge() const { return second >= 0; }
};

/// Vertex or edge left after repeatedly stripping all leaves.
Center center(const AdjacencyList& adj);

RootedTree canonicalize_rooted(const AdjacencyList& adj, int root);

/// A tree up to isomorphism, stored as the canonical level sequence rooted at
/// its centre. For a bicentral tree the root is the end of the central edge
/// whose half is lexicographically larger.
class FreeTree {
 public:
  std::size_t size() const { return levels_.size(); }
  const LevelSequence& levels() const { return levels_; }
  bool is_bicentral() const { return bicentral_; }
  AdjacencyList adjacency() const;
  /// Canonical half codes, larger first. Bicentral trees only.
  std::pair<LevelSequence, LevelSequence> halves() const;
  /// Level sequence, prefixed with `bicentral: ` when applicable.
  std::string to_string() const;
  /// Vertex degrees, in level-sequence order.
  std::vector<int> degrees() const;

  auto operator<=>(const FreeTree&) const = default;

 private:
  friend FreeTree canonicalize_free(const AdjacencyList& adj);
  FreeTree(LevelSequence levels, bool bicentral) : levels_(std::move(levels)), bicentral_(bicentral) {}

  LevelSequence levels_;
  bool bicentral_ = false;
};

FreeTree canonicalize_free(const AdjacencyList& adj);
/// Forgets the root (the F(.) operator on rooted trees).
FreeTree forget_root(const RootedTree& tree);

/// Whitespace-separated level sequence.
RootedTree parse_rooted(std::string_view text);
/// Level sequence with optional `bicentral:` prefix; the prefix, if present,
/// must agree with the tree.
FreeTree parse_free(std::string_view text);
AdjacencyList adjacency_from_levels(const LevelSequence& levels);

BigInt aut_size(const RootedTree& tree);
BigInt aut_size(const FreeTree& tree);

/// Vertex orbits of Aut(F), i.e. distinct rooted trees obtained by choosing a
/// root. Vertices share an orbit iff the chains of subtree classes from the
/// centre down to them agree.
std::size_t orbit_count(const FreeTree& tree);
/// Same, for any tree given by adjacency (connectivity not validated).
std::size_t orbit_count(const AdjacencyList& adj);
/// Same, for a tree given by parent indices; the root has parent -1.
std::size_t orbit_count_from_parents(const std::vector<int>& parent);

/// coeffs[k] = #{automorphisms with exactly k fixed vertices}.
class FixPolynomial {
 public:
  FixPolynomial() = default;
  explicit FixPolynomial(std::vector<BigInt> coeffs);

  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  /// Zero beyond the degree.
  BigInt operator[](std::size_t k) const;
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  /// Value at w = 1, i.e. |Aut|.
  BigInt total() const;
  /// Sum over automorphisms of their fixed-point count (derivative at 1).
  BigInt total_fixed_points() const;

  bool operator==(const FixPolynomial&) const = default;

 private:
  std::vector<BigInt> coeffs_;
};

/// Rooted case: P_T(w) = w prod over child classes (c, m) of
/// sum_{pi in S_m} P_c(w)^{fix(pi)} |Aut c|^{m - fix(pi)}, with the sum
/// collected through rencontres numbers.
FixPolynomial fix_polynomial(const RootedTree& tree);
/// Free case: vertex centre -> rooted polynomial at the centre; edge centre
/// with halves H_a, H_b -> P_a P_b, plus |Aut H|^2 when the halves coincide.
FixPolynomial fix_polynomial(const FreeTree& tree);

namespace serial {
/// Reference: distinct canonical rootings over all n roots.
std::size_t orbit_count_by_rerooting(const FreeTree& tree);
/// Reference: filter all n! vertex permutations. n <= 10.
FixPolynomial fix_polynomial_brute_force(const FreeTree& tree);
}  // namespace serial

}  // namespace otter
