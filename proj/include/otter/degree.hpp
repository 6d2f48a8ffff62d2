#pragma once

// Degree-restricted trees. Omega is the set of allowed vertex degrees of a
// free tree; Omega* = {i - 1 : i in Omega} is the matching set of outdegrees
// for rooted trees. "Tilde" trees have root outdegree in Omega and every
// other outdegree in Omega*, i.e. they are exactly the rootings of free trees
// with degrees in Omega.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "otter/counting.hpp"
#include "otter/series.hpp"
#include "otter/tree.hpp"

namespace otter {

class DegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A finite or cofinite set of positive integers with 1 in it, some element
/// >= 3, and not all of N.
class DegreeSet {
 public:
  /// Finite set.
  explicit DegreeSet(std::set<int> degrees);

  /// Comma-separated items: an integer; `<=D` for 1..D; `...` for every
  /// integer above the largest listed one; `except:k` to remove k.
  /// Examples: `1,3`, `1,2,4`, `<=5,except:2`, `1,3,...,except:7`.
  static DegreeSet parse(std::string_view text);

  bool contains(int degree) const;
  bool contains_outdegree(int k) const { return k >= 0 && contains(k + 1); }
  /// Omega intersected with [1, bound].
  std::vector<int> omega_upto(int bound) const;
  /// Omega* intersected with [0, bound].
  std::vector<int> omega_star_upto(int bound) const;
  /// gcd of the nonzero elements of Omega*.
  int gcd_star() const;
  bool is_cofinite() const { return tail_start_.has_value(); }
  /// Smallest t with every integer >= t in Omega (cofinite sets only).
  int threshold() const;
  /// Largest element (finite sets only).
  int max_element() const;
  /// Canonical text form; equal sets give equal keys.
  std::string key() const;

  bool operator==(const DegreeSet& other) const { return key() == other.key(); }

 private:
  DegreeSet(std::set<int> below_tail, std::optional<int> tail_start, std::set<int> tail_exclusions);
  void validate() const;

  std::set<int> below_tail_;
  std::optional<int> tail_start_;
  std::set<int> tail_exclusions_;
};

enum class RestrictedKind { rooted, tilde, free };

/// Congruence test (rooted: n = 1 mod gcd*; tilde and free: n = 2 mod gcd*,
/// n = 1 always allowed for rooted) followed by positivity of the exact count.
bool admissible(std::size_t n, RestrictedKind kind, const DegreeSet& d);

/// A^{Omega*}(z) = z sum_{k in Omega*} MSET_k(A^{Omega*}).
ExactSeries restricted_rooted_series(const DegreeSet& d, std::size_t n_max);
/// z sum_{k in Omega} MSET_k(A^{Omega*}).
ExactSeries tilde_series(const DegreeSet& d, std::size_t n_max);
/// F^Omega = tilde - ((A^{Omega*})^2 - A^{Omega*}(z^2)) / 2.
ExactSeries restricted_free_series(const DegreeSet& d, std::size_t n_max);

struct RestrictedFreeOptions {
  /// Counts for n <= this bound are compared with filtered enumeration.
  std::size_t verify_up_to = 12;
};

/// Throws CountingError on disagreement with the enumeration oracle.
CountTable restricted_free_counts(const DegreeSet& d, std::size_t n_max, const RestrictedFreeOptions& options = {});

/// Free trees with every degree in a finite Omega, built directly from the
/// rooted trees with outdegrees in Omega*: a centre vertex with an Omega-sized
/// multiset of branches whose two tallest have equal height, or a central
/// edge joining two branches of equal height. Much cheaper than filtering the
/// unrestricted stream when Omega is sparse. Cofinite Omega falls back to the
/// filtered stream.
std::vector<FreeTree> gen_free_restricted(const DegreeSet& d, std::size_t n);

inline constexpr std::size_t kRestrictedTvCap = 40;

/// d_TV between the forgotten-root tilde tree and the uniform free tree with
/// degrees in Omega, exactly. Throws DegreeError if n is not admissible or
/// above `cap`.
Rational tv_exact_restricted(const DegreeSet& d, std::size_t n, std::size_t cap = kRestrictedTvCap);

struct NegativeControlReport {
  std::size_t n = 0;
  /// Omega* \ Omega.
  std::vector<int> forbidden_degrees;
  /// P(root outdegree = k) of the uniform A_n^{Omega*}, k = 0..n-1.
  std::vector<Rational> root_degree_law;
  /// Total mass on forbidden_degrees; a lower bound for the TV distance
  /// between A_n^{Omega*} (unrooted) and the free tree with degrees in Omega.
  Rational forbidden_mass;
};

NegativeControlReport negative_control(const DegreeSet& d, std::size_t n);

}  // namespace otter
