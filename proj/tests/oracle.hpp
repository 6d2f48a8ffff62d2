#pragma once

// Independent brute-force oracles. Nothing here calls into the library.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Graph = std::vector<std::vector<int>>;

// Parenthesis string of the subtree at v, children sorted.
inline std::string ahu(const Graph& g, int v, int parent) {
  std::vector<std::string> kids;
  for (int u : g[v]) {
    if (u != parent) kids.push_back(ahu(g, u, v));
  }
  std::sort(kids.begin(), kids.end());
  std::string s = "(";
  for (const auto& k : kids) s += k;
  return s + ")";
}

inline std::string free_key(const Graph& g) {
  std::string best;
  for (int r = 0; r < static_cast<int>(g.size()); ++r) {
    std::string s = ahu(g, r, -1);
    if (r == 0 || s < best) best = std::move(s);
  }
  return best;
}

inline std::size_t orbits(const Graph& g) {
  std::set<std::string> roots;
  for (int r = 0; r < static_cast<int>(g.size()); ++r) roots.insert(ahu(g, r, -1));
  return roots.size();
}

inline Graph add_leaf(Graph g, int at) {
  const int v = static_cast<int>(g.size());
  g.emplace_back();
  g[at].push_back(v);
  g[v].push_back(at);
  return g;
}

// Rooted trees of size n (root = vertex 0) by leaf attachment, deduplicated by
// the rooted string.
inline std::vector<Graph> rooted_trees(std::size_t n) {
  std::map<std::string, Graph> level{{"()", Graph(1)}};
  for (std::size_t m = 2; m <= n; ++m) {
    std::map<std::string, Graph> grown;
    for (const auto& [key, g] : level) {
      for (int v = 0; v < static_cast<int>(g.size()); ++v) {
        Graph h = add_leaf(g, v);
        grown.emplace(ahu(h, 0, -1), std::move(h));
      }
    }
    level = std::move(grown);
  }
  std::vector<Graph> out;
  for (auto& [key, g] : level) out.push_back(std::move(g));
  return out;
}

inline std::vector<Graph> free_trees(std::size_t n) {
  std::map<std::string, Graph> level{{"()", Graph(1)}};
  for (std::size_t m = 2; m <= n; ++m) {
    std::map<std::string, Graph> grown;
    for (const auto& [key, g] : level) {
      for (int v = 0; v < static_cast<int>(g.size()); ++v) {
        Graph h = add_leaf(g, v);
        grown.emplace(free_key(h), std::move(h));
      }
    }
    level = std::move(grown);
  }
  std::vector<Graph> out;
  for (auto& [key, g] : level) out.push_back(std::move(g));
  return out;
}

// a_1..a_n from a_{n+1} = (1/n) sum_k (sum_{d|k} d a_d) a_{n-k+1}.
inline std::vector<mpz_class> rooted_counts(std::size_t n_max) {
  std::vector<mpz_class> a(n_max + 1, 0);
  if (n_max >= 1) a[1] = 1;
  for (std::size_t n = 1; n < n_max; ++n) {
    mpz_class s = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      mpz_class div = 0;
      for (std::size_t d = 1; d <= k; ++d) {
        if (k % d == 0) div += a[d] * static_cast<unsigned long>(d);
      }
      s += div * a[n - k + 1];
    }
    a[n + 1] = s / static_cast<unsigned long>(n);
  }
  return a;
}

// f_n = a_n - (1/2)(sum_{i+j=n} a_i a_j - a_{n/2}).
inline std::vector<mpz_class> free_counts(std::size_t n_max) {
  const auto a = rooted_counts(n_max);
  std::vector<mpz_class> f(n_max + 1, 0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    mpz_class pairs = 0;
    for (std::size_t i = 1; i < n; ++i) pairs += a[i] * a[n - i];
    if (n % 2 == 0) pairs -= a[n / 2];
    f[n] = a[n] - pairs / 2;
  }
  return f;
}

// Labelled trees on n vertices by testing every (n-1)-edge subset of K_n.
inline std::size_t labelled_trees_brute(int n) {
  if (n == 1) return 1;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  const int m = static_cast<int>(edges.size());
  std::size_t count = 0;
  std::vector<int> pick(m, 0);
  std::fill(pick.end() - (n - 1), pick.end(), 1);
  do {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    bool acyclic = true;
    for (int e = 0; e < m && acyclic; ++e) {
      if (!pick[e]) continue;
      const int a = find(edges[e].first), b = find(edges[e].second);
      if (a == b) acyclic = false;
      parent[a] = b;
    }
    count += acyclic;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return count;
}

// Automorphisms by permutation search; fixed[k] counts those fixing k vertices.
inline std::vector<std::size_t> fixed_point_counts(const Graph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (int v = 0; v < n; ++v) {
    for (int u : g[v]) adj[v][u] = 1;
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> fixed(n + 1, 0);
  do {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      if (g[v].size() != g[perm[v]].size()) ok = false;
      for (int u : g[v]) {
        if (!ok || !adj[perm[v]][perm[u]]) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    int k = 0;
    for (int v = 0; v < n; ++v) k += perm[v] == v;
    ++fixed[k];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return fixed;
}

// row[k] = sum over free trees of #{sigma : fix = k} / |Aut|.
inline std::vector<mpq_class> sym_census(std::size_t n) {
  std::vector<mpq_class> row(n + 1, 0);
  for (const auto& g : free_trees(n)) {
    const auto fixed = fixed_point_counts(g);
    const std::size_t aut = std::accumulate(fixed.begin(), fixed.end(), std::size_t{0});
    for (std::size_t k = 0; k <= n; ++k) {
      mpq_class q(static_cast<unsigned long>(fixed[k]), static_cast<unsigned long>(aut));
      q.canonicalize();
      row[k] += q;
    }
  }
  return row;
}

// Exact d_TV between F(A_n) and the uniform free tree.
inline mpq_class tv(std::size_t n) {
  const auto trees = free_trees(n);
  const auto a = rooted_counts(n)[n];
  const mpq_class uniform(1, static_cast<unsigned long>(trees.size()));
  mpq_class sum = 0;
  for (const auto& g : trees) {
    mpq_class p(static_cast<unsigned long>(orbits(g)));
    p /= a;
    sum += abs(p - uniform);
  }
  return sum / 2;
}

inline bool degrees_in(const Graph& g, const std::set<int>& allowed) {
  for (const auto& row : g) {
    if (!allowed.count(static_cast<int>(row.size()))) return false;
  }
  return true;
}

}  // namespace oracle
