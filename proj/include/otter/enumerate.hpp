#pragma once

// Exhaustive generation of rooted and free unlabelled trees. This is the
// brute-force oracle behind every counting claim, plus the fixed-point census
// obtained by summing automorphism statistics over all free trees.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "otter/counting.hpp"
#include "otter/tree.hpp"

namespace otter {

class DegreeSet;

class EnumerationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class StreamKind {
  rooted,
  free,
  /// Rooted trees filtered on degrees of the underlying free tree (the root
  /// uses its outdegree, every other vertex its outdegree + 1).
  tilde,
};

/// Canonical level sequences in lexicographically decreasing order
/// (successor rule of Beyer and Hedetniemi). Free trees are the rooted trees
/// whose root is their centre (for bicentral trees: the end with the larger
/// half), so each free tree appears exactly once.
///
/// With a degree filter, rooted trees keep those with every outdegree in
/// Omega*; free and tilde trees keep those with every vertex degree in Omega.
class TreeStream {
 public:
  TreeStream(std::size_t n, StreamKind kind, const DegreeSet* degree_filter = nullptr);

  /// Advances to the next tree; false once exhausted.
  bool next();
  const LevelSequence& current() const { return levels_; }
  RootedTree current_rooted() const { return RootedTree(levels_); }
  FreeTree current_free() const;

  std::size_t n() const { return n_; }
  StreamKind kind() const { return kind_; }

 private:
  bool advance_raw();
  bool accept() const;

  std::size_t n_;
  StreamKind kind_;
  const DegreeSet* filter_;
  LevelSequence levels_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<RootedTree> gen_rooted(std::size_t n, const DegreeSet* degree_filter = nullptr);
std::vector<FreeTree> gen_free(std::size_t n, const DegreeSet* degree_filter = nullptr);
std::size_t count_stream(std::size_t n, StreamKind kind, const DegreeSet* degree_filter = nullptr);

struct CensusOptions {
  std::size_t cap = 12;
  /// Trees per parallel work item.
  std::size_t chunk = 64;
};

/// [z^n] Sym_k = sum_F #{sigma in Aut F : fix(sigma) = k} / |Aut F|, over all
/// free trees F with n vertices. Chunks of trees are reduced in parallel;
/// exact rational sums make the result independent of the schedule.
SymTable symmetry_census(std::size_t n, const CensusOptions& options = {});

namespace serial {
SymTable symmetry_census(std::size_t n, std::size_t cap = 12);
}  // namespace serial

}  // namespace otter
