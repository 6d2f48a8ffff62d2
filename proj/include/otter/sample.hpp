#pragma once

// Uniform random Pólya trees by the recursive method, uniform free trees by
// rejection on the number of rootings, and the rejection-free approximation
// that simply forgets the root.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include "otter/tree.hpp"

namespace otter {

class SamplerError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct SamplerTables;

/// Count tables shared read-only across streams, plus one RNG stream.
/// Streams are std::mt19937_64 seeded through std::seed_seq{seed, stream}.
class SamplerContext {
 public:
  SamplerContext(std::uint64_t seed, std::size_t n_max);

  /// A context sharing the tables with an independent RNG stream.
  SamplerContext split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::size_t n_max() const;
  static std::string generator_name() { return "mt19937_64/seed_seq{seed,stream}"; }

  std::mt19937_64& engine() { return engine_; }
  const SamplerTables& tables() const { return *tables_; }

 private:
  SamplerContext(std::shared_ptr<const SamplerTables> tables, std::uint64_t seed, std::uint64_t stream);

  std::shared_ptr<const SamplerTables> tables_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Draws with exact big-integer arithmetic up to this size. Larger sizes use
/// double alias tables, relative bias per choice <= 2^-53.
inline constexpr std::size_t kExactDrawLimit = 512;

/// Uniform over the a_n canonical rooted trees. The recursion picks (j, d)
/// with probability d a_d a_{n-jd} / ((n-1) a_n) and grafts j copies of a
/// uniform d-vertex tree onto the root of a uniform (n-jd)-vertex tree.
RootedTree sample_rooted(SamplerContext& ctx, std::size_t n);

struct FreeSample {
  FreeTree tree;
  /// Rooted draws consumed, including the accepted one.
  std::size_t rounds = 1;
};

/// Uniform over the f_n free trees: accept F(A) with probability
/// 1/orbit_count(F). Expected rounds a_n / f_n.
FreeSample sample_free_exact(SamplerContext& ctx, std::size_t n);

/// F(A_n) without rejection; P(F) = orbit_count(F) / a_n.
FreeTree sample_free_approx(SamplerContext& ctx, std::size_t n);

/// Uniform integer in [0, bound), exact. bound > 0.
BigInt uniform_below(std::mt19937_64& engine, const BigInt& bound);

}  // namespace otter
