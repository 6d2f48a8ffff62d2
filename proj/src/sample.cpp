#include "otter/sample.hpp"

#include <algorithm>
#include <mutex>
#include <vector>

#include "otter/counting.hpp"

namespace otter {

namespace {

struct Choice {
  std::size_t j;
  std::size_t d;
};

// Cumulative exact weights over the (j, d) choices for one size.
struct ExactTable {
  std::vector<Choice> choices;
  std::vector<BigInt> cumulative;
};

// Walker alias table over the (j, d) choices for one size.
struct AliasTable {
  std::vector<Choice> choices;
  std::vector<double> prob;
  std::vector<std::size_t> alias;
};

}  // namespace

struct SamplerTables {
  explicit SamplerTables(std::size_t n_max)
      : counts(rooted_counts_recurrence(n_max)),
        exact_once(std::min(n_max, kExactDrawLimit) + 1),
        exact(std::min(n_max, kExactDrawLimit) + 1),
        alias_once(n_max + 1),
        alias(n_max + 1) {}

  std::size_t n_max() const { return counts.n_max(); }

  const ExactTable& exact_for(std::size_t n) const {
    std::call_once(exact_once[n], [&] { exact[n] = build_exact(n); });
    return exact[n];
  }

  ExactTable build_exact(std::size_t n) const {
    ExactTable t;
    BigInt acc = 0;
    for (std::size_t d = 1; d <= n - 1; ++d) {
      const BigInt da = counts[d] * static_cast<unsigned long>(d);
      for (std::size_t j = 1; j * d <= n - 1; ++j) {
        acc += da * counts[n - j * d];
        t.choices.push_back({j, d});
        t.cumulative.push_back(acc);
      }
    }
    if (acc != counts[n] * static_cast<unsigned long>(n - 1)) {
      throw SamplerError("sampler: weights do not sum to (n-1) a_n at n=" + std::to_string(n));
    }
    return t;
  }

  const AliasTable& alias_for(std::size_t n) const {
    std::call_once(alias_once[n], [&] { alias[n] = build_alias(n); });
    return alias[n];
  }

  AliasTable build_alias(std::size_t n) const {
    AliasTable t;
    const BigInt total = counts[n] * static_cast<unsigned long>(n - 1);
    std::vector<double> w;
    for (std::size_t d = 1; d <= n - 1; ++d) {
      for (std::size_t j = 1; j * d <= n - 1; ++j) {
        const BigInt weight = counts[d] * counts[n - j * d] * static_cast<unsigned long>(d);
        t.choices.push_back({j, d});
        w.push_back(make_rational(weight, total).get_d());
      }
    }
    const std::size_t m = w.size();
    t.prob.assign(m, 1.0);
    t.alias.resize(m);
    std::vector<std::size_t> small, large;
    std::vector<double> scaled(m);
    for (std::size_t i = 0; i < m; ++i) {
      scaled[i] = w[i] * static_cast<double>(m);
      (scaled[i] < 1.0 ? small : large).push_back(i);
      t.alias[i] = i;
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back();
      small.pop_back();
      const std::size_t l = large.back();
      t.prob[s] = scaled[s];
      t.alias[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    return t;
  }

  CountTable counts;
  mutable std::vector<std::once_flag> exact_once;
  mutable std::vector<ExactTable> exact;
  mutable std::vector<std::once_flag> alias_once;
  mutable std::vector<AliasTable> alias;
};

BigInt uniform_below(std::mt19937_64& engine, const BigInt& bound) {
  if (sgn(bound) <= 0) throw SamplerError("uniform_below: bound must be positive");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(bits - 64 * (words - 1));
  const std::uint64_t top_mask = top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
  thread_local std::vector<std::uint64_t> buffer;
  buffer.assign(words, 0);
  BigInt r;
  for (;;) {
    for (auto& w : buffer) w = engine();
    buffer.back() &= top_mask;  // most significant word last (order = -1)
    mpz_import(r.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buffer.data());
    if (r < bound) return r;
  }
}

SamplerContext::SamplerContext(std::uint64_t seed, std::size_t n_max)
    : SamplerContext(std::make_shared<const SamplerTables>(std::max<std::size_t>(n_max, 1)), seed, 0) {}

SamplerContext::SamplerContext(std::shared_ptr<const SamplerTables> tables, std::uint64_t seed, std::uint64_t stream)
    : tables_(std::move(tables)), seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

SamplerContext SamplerContext::split(std::uint64_t stream) const { return SamplerContext(tables_, seed_, stream); }

std::size_t SamplerContext::n_max() const { return tables_->n_max(); }

namespace {

Choice choose_exact(SamplerContext& ctx, std::size_t n) {
  const ExactTable& t = ctx.tables().exact_for(n);
  const BigInt r = uniform_below(ctx.engine(), t.cumulative.back());
  const auto it = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), r);
  return t.choices[static_cast<std::size_t>(it - t.cumulative.begin())];
}

Choice choose_alias(SamplerContext& ctx, std::size_t n) {
  const AliasTable& t = ctx.tables().alias_for(n);
  std::uniform_int_distribution<std::size_t> pick(0, t.choices.size() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t i = pick(ctx.engine());
  return coin(ctx.engine()) < t.prob[i] ? t.choices[i] : t.choices[t.alias[i]];
}

// Appends a random rooted tree of size n to `parent`; its vertices occupy the
// contiguous block starting at the returned root.
int grow(SamplerContext& ctx, std::vector<int>& parent, std::size_t n) {
  if (n == 1) {
    parent.push_back(-1);
    return static_cast<int>(parent.size() - 1);
  }
  const Choice c = n <= kExactDrawLimit ? choose_exact(ctx, n) : choose_alias(ctx, n);
  const int root = grow(ctx, parent, n - c.j * c.d);
  const int branch = grow(ctx, parent, c.d);
  parent[branch] = root;
  for (std::size_t copy = 1; copy < c.j; ++copy) {
    const int start = static_cast<int>(parent.size());
    parent.push_back(root);
    for (std::size_t t = 1; t < c.d; ++t) parent.push_back(parent[branch + t] + (start - branch));
  }
  return root;
}

void check_range(const SamplerContext& ctx, std::size_t n) {
  if (n < 1 || n > ctx.n_max()) {
    throw SamplerError("sampler: n=" + std::to_string(n) + " outside [1, " + std::to_string(ctx.n_max()) + "]");
  }
}

// Root is vertex 0.
void grow_tree(SamplerContext& ctx, std::size_t n, std::vector<int>& parent) {
  parent.clear();
  parent.reserve(n);
  grow(ctx, parent, n);
  if (parent.size() != n) throw SamplerError("sampler: grew a tree of the wrong size");
}

AdjacencyList adjacency_from_parents(const std::vector<int>& parent) {
  AdjacencyList adj(parent.size());
  for (std::size_t v = 1; v < parent.size(); ++v) {
    adj[v].push_back(parent[v]);
    adj[parent[v]].push_back(static_cast<int>(v));
  }
  return adj;
}

}  // namespace

RootedTree sample_rooted(SamplerContext& ctx, std::size_t n) {
  check_range(ctx, n);
  std::vector<int> parent;
  grow_tree(ctx, n, parent);
  return canonicalize_rooted(adjacency_from_parents(parent), 0);
}

FreeSample sample_free_exact(SamplerContext& ctx, std::size_t n) {
  check_range(ctx, n);
  std::vector<int> parent;
  for (std::size_t rounds = 1;; ++rounds) {
    grow_tree(ctx, n, parent);
    const std::size_t orbits = orbit_count_from_parents(parent);
    std::uniform_int_distribution<std::size_t> accept(0, orbits - 1);
    if (accept(ctx.engine()) == 0) return FreeSample{canonicalize_free(adjacency_from_parents(parent)), rounds};
  }
}

FreeTree sample_free_approx(SamplerContext& ctx, std::size_t n) {
  check_range(ctx, n);
  return forget_root(sample_rooted(ctx, n));
}

}  // namespace otter
