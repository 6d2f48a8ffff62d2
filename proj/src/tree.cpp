#include "otter/tree.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace otter {

namespace {

// BFS order from root with parents; `excluded` is a neighbour of root whose
// side of the tree is ignored.
void bfs(const AdjacencyList& adj, int root, int excluded, std::vector<int>& order, std::vector<int>& parent) {
  order.clear();
  parent.assign(adj.size(), -1);
  order.push_back(root);
  parent[root] = root;
  if (excluded >= 0) parent[excluded] = excluded;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int v = order[head];
    for (int u : adj[v]) {
      if (parent[u] != -1) continue;
      parent[u] = v;
      order.push_back(u);
    }
  }
}

LevelSequence canonical_levels(const AdjacencyList& adj, int root, int excluded = -1) {
  std::vector<int> order, parent;
  bfs(adj, root, excluded, order, parent);
  std::vector<LevelSequence> seq(adj.size());
  std::vector<std::vector<int>> children(adj.size());
  for (std::size_t i = 1; i < order.size(); ++i) children[parent[order[i]]].push_back(order[i]);
  for (std::size_t i = order.size(); i-- > 0;) {
    const int v = order[i];
    auto& kids = children[v];
    std::sort(kids.begin(), kids.end(), [&](int x, int y) { return seq[x] > seq[y]; });
    LevelSequence own{1};
    for (int c : kids) {
      for (int level : seq[c]) own.push_back(level + 1);
      LevelSequence().swap(seq[c]);
    }
    seq[v] = std::move(own);
  }
  return std::move(seq[root]);
}

BigInt factorial(std::size_t n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

using Poly = std::vector<BigInt>;

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return c;
}

void poly_add_to(Poly& acc, const Poly& b) {
  if (acc.size() < b.size()) acc.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) acc[i] += b[i];
}

// Rencontres number D(m, j): permutations of m points with exactly j fixed.
BigInt rencontres(std::size_t m, std::size_t j) {
  // !d = (d-1)(!(d-1) + !(d-2))
  BigInt prev2 = 1, prev1 = 0;
  const std::size_t d = m - j;
  BigInt der = d == 0 ? prev2 : prev1;
  for (std::size_t k = 2; k <= d; ++k) {
    der = (prev1 + prev2) * static_cast<unsigned long>(k - 1);
    prev2 = std::move(prev1);
    prev1 = der;
  }
  BigInt binom;
  mpz_bin_uiui(binom.get_mpz_t(), m, j);
  return binom * der;
}

// Isomorphism classes of rooted subtrees, interned by their sorted child
// class lists (AHU). Not thread-safe; use one per computation.
class Classifier {
 public:
  // Class id of every vertex in the subtree rooted at `root` (ignoring the
  // side of `excluded`); returns the root's class.
  int classify(const AdjacencyList& adj, int root, int excluded, std::vector<int>* vertex_class = nullptr) {
    std::vector<int> order, parent;
    bfs(adj, root, excluded, order, parent);
    std::vector<int> cls(adj.size(), -1);
    std::vector<std::vector<int>> kid_classes(adj.size());
    for (std::size_t i = order.size(); i-- > 0;) {
      const int v = order[i];
      auto& kc = kid_classes[v];
      std::sort(kc.begin(), kc.end());
      auto [it, inserted] = ids_.try_emplace(kc, static_cast<int>(children_.size()));
      if (inserted) children_.push_back(kc);
      cls[v] = it->second;
      if (i > 0) kid_classes[parent[v]].push_back(cls[v]);
      std::vector<int>().swap(kc);
    }
    const int root_class = cls[root];
    if (vertex_class) *vertex_class = std::move(cls);
    return root_class;
  }

  const BigInt& aut(int c) {
    if (auto it = aut_.find(c); it != aut_.end()) return it->second;
    BigInt result = 1;
    for_each_group(c, [&](int child, std::size_t m) {
      BigInt child_aut;
      mpz_pow_ui(child_aut.get_mpz_t(), aut(child).get_mpz_t(), m);
      result *= child_aut * factorial(m);
    });
    return aut_.emplace(c, std::move(result)).first->second;
  }

  const Poly& fix(int c) {
    if (auto it = fix_.find(c); it != fix_.end()) return it->second;
    Poly result{0, 1};  // w for the root
    for_each_group(c, [&](int child, std::size_t m) {
      const Poly& pc = fix(child);
      const BigInt& ac = aut(child);
      // sum_j D(m, j) P_c^j A_c^{m-j}
      Poly group;
      Poly pc_pow{1};
      for (std::size_t j = 0; j <= m; ++j) {
        if (j > 0) pc_pow = poly_mul(pc_pow, pc);
        BigInt weight;
        mpz_pow_ui(weight.get_mpz_t(), ac.get_mpz_t(), m - j);
        weight *= rencontres(m, j);
        Poly term = pc_pow;
        for (auto& t : term) t *= weight;
        poly_add_to(group, term);
      }
      result = poly_mul(result, group);
    });
    return fix_.emplace(c, std::move(result)).first->second;
  }

 private:
  template <class F>
  void for_each_group(int c, F&& f) {
    const auto& kids = children_[c];
    for (std::size_t i = 0; i < kids.size();) {
      std::size_t j = i;
      while (j < kids.size() && kids[j] == kids[i]) ++j;
      f(kids[i], j - i);
      i = j;
    }
  }

  std::map<std::vector<int>, int> ids_;
  std::vector<std::vector<int>> children_;
  std::map<int, BigInt> aut_;
  std::map<int, Poly> fix_;
};

Poly trim(Poly p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
  return p;
}

}  // namespace

void validate_tree(const AdjacencyList& adj) {
  const std::size_t n = adj.size();
  if (n == 0) throw TreeError("tree must have at least one vertex");
  std::size_t degree_sum = 0;
  for (std::size_t v = 0; v < n; ++v) {
    std::set<int> seen;
    for (int u : adj[v]) {
      if (u < 0 || static_cast<std::size_t>(u) >= n) throw TreeError("neighbour index out of range");
      if (static_cast<std::size_t>(u) == v) throw TreeError("self-loop at vertex " + std::to_string(v));
      if (!seen.insert(u).second) throw TreeError("repeated edge at vertex " + std::to_string(v));
      if (std::find(adj[u].begin(), adj[u].end(), static_cast<int>(v)) == adj[u].end()) {
        throw TreeError("adjacency is not symmetric");
      }
    }
    degree_sum += adj[v].size();
  }
  if (degree_sum != 2 * (n - 1)) throw TreeError("edge count is not n-1 (graph has a cycle or is disconnected)");
  std::vector<int> order, parent;
  bfs(adj, 0, -1, order, parent);
  if (order.size() != n) throw TreeError("graph is disconnected");
}

RootedTree::RootedTree(LevelSequence levels) : levels_(std::move(levels)) {
  if (levels_.empty() || levels_[0] != 1) throw TreeError("level sequence must start with the root at level 1");
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    if (levels_[i] < 2 || levels_[i] > levels_[i - 1] + 1) {
      throw TreeError("invalid level sequence at position " + std::to_string(i));
    }
  }
}

bool RootedTree::is_canonical() const { return canonical_levels(adjacency(), 0) == levels_; }

RootedTree RootedTree::canonical() const { return RootedTree(canonical_levels(adjacency(), 0)); }

AdjacencyList RootedTree::adjacency() const { return adjacency_from_levels(levels_); }

std::vector<int> RootedTree::parents() const {
  std::vector<int> parent(levels_.size(), -1);
  std::vector<int> last_at_level(levels_.size() + 2, -1);
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (i > 0) parent[i] = last_at_level[levels_[i] - 1];
    last_at_level[levels_[i]] = static_cast<int>(i);
  }
  return parent;
}

std::size_t RootedTree::root_degree() const {
  return static_cast<std::size_t>(std::count(levels_.begin(), levels_.end(), 2));
}

std::string RootedTree::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < levels_.size(); ++i) out << (i ? " " : "") << levels_[i];
  return out.str();
}

AdjacencyList adjacency_from_levels(const LevelSequence& levels) {
  const RootedTree checked{LevelSequence(levels)};
  const auto parent = checked.parents();
  AdjacencyList adj(levels.size());
  for (std::size_t i = 1; i < levels.size(); ++i) {
    adj[i].push_back(parent[i]);
    adj[parent[i]].push_back(static_cast<int>(i));
  }
  return adj;
}

Center center(const AdjacencyList& adj) {
  validate_tree(adj);
  const std::size_t n = adj.size();
  if (n == 1) return {0, -1};
  std::vector<std::size_t> degree(n);
  std::vector<int> layer;
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = adj[v].size();
    if (degree[v] <= 1) layer.push_back(static_cast<int>(v));
  }
  std::size_t remaining = n;
  while (remaining > 2) {
    std::vector<int> next;
    remaining -= layer.size();
    for (int v : layer) {
      for (int u : adj[v]) {
        if (--degree[u] == 1) next.push_back(u);
      }
    }
    layer = std::move(next);
  }
  if (remaining == 1) return {layer[0], -1};
  std::sort(layer.begin(), layer.end());
  return {layer[0], layer[1]};
}

RootedTree canonicalize_rooted(const AdjacencyList& adj, int root) {
  validate_tree(adj);
  if (root < 0 || static_cast<std::size_t>(root) >= adj.size()) throw TreeError("root index out of range");
  return RootedTree(canonical_levels(adj, root));
}

FreeTree canonicalize_free(const AdjacencyList& adj) {
  const Center c = center(adj);
  if (!c.is_edge()) return FreeTree(canonical_levels(adj, c.first), false);
  const LevelSequence half_a = canonical_levels(adj, c.first, c.second);
  const LevelSequence half_b = canonical_levels(adj, c.second, c.first);
  const int root = half_a >= half_b ? c.first : c.second;
  return FreeTree(canonical_levels(adj, root), true);
}

FreeTree forget_root(const RootedTree& tree) { return canonicalize_free(tree.adjacency()); }

AdjacencyList FreeTree::adjacency() const { return adjacency_from_levels(levels_); }

std::pair<LevelSequence, LevelSequence> FreeTree::halves() const {
  if (!bicentral_) throw TreeError("halves: tree is not bicentral");
  const AdjacencyList adj = adjacency();
  const Center c = center(adj);
  LevelSequence a = canonical_levels(adj, c.first, c.second);
  LevelSequence b = canonical_levels(adj, c.second, c.first);
  if (a < b) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

std::string FreeTree::to_string() const {
  std::ostringstream out;
  if (bicentral_) out << "bicentral: ";
  for (std::size_t i = 0; i < levels_.size(); ++i) out << (i ? " " : "") << levels_[i];
  return out.str();
}

std::vector<int> FreeTree::degrees() const {
  const AdjacencyList adj = adjacency();
  std::vector<int> d(adj.size());
  for (std::size_t v = 0; v < adj.size(); ++v) d[v] = static_cast<int>(adj[v].size());
  return d;
}

namespace {

LevelSequence parse_levels(std::string_view text) {
  std::istringstream in{std::string(text)};
  LevelSequence levels;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw TreeError("bad level '" + token + "'");
    }
    if (used != token.size()) throw TreeError("bad level '" + token + "'");
    levels.push_back(v);
  }
  return levels;
}

}  // namespace

RootedTree parse_rooted(std::string_view text) { return RootedTree(parse_levels(text)); }

FreeTree parse_free(std::string_view text) {
  constexpr std::string_view prefix = "bicentral:";
  const auto start = text.find_first_not_of(" \t");
  bool claims_bicentral = false;
  if (start != std::string_view::npos && text.substr(start, prefix.size()) == prefix) {
    claims_bicentral = true;
    text.remove_prefix(start + prefix.size());
  }
  FreeTree tree = canonicalize_free(adjacency_from_levels(parse_levels(text)));
  if (claims_bicentral && !tree.is_bicentral()) throw TreeError("tree marked bicentral has a central vertex");
  return tree;
}

BigInt aut_size(const RootedTree& tree) {
  Classifier cl;
  return cl.aut(cl.classify(tree.adjacency(), 0, -1));
}

BigInt aut_size(const FreeTree& tree) {
  const AdjacencyList adj = tree.adjacency();
  const Center c = center(adj);
  Classifier cl;
  if (!c.is_edge()) return cl.aut(cl.classify(adj, c.first, -1));
  const int a = cl.classify(adj, c.first, c.second);
  const int b = cl.classify(adj, c.second, c.first);
  BigInt result = cl.aut(a) * cl.aut(b);
  return a == b ? BigInt(2 * result) : result;
}

std::size_t orbit_count(const FreeTree& tree) { return orbit_count(tree.adjacency()); }

namespace {

// Adjacency in compressed rows: neighbours of v are nbr[offset[v]..offset[v+1]).
struct Csr {
  std::vector<int> offset;
  std::vector<int> nbr;
  std::size_t size() const { return offset.size() - 1; }
};

// Centre by leaf peeling, then AHU classes level by level from the deepest
// level up, then vertex labels (parent label, class) from the centre down.
// Two vertices share an orbit exactly when their labels agree.
std::size_t orbit_count_csr(const Csr& g) {
  const std::size_t n = g.size();
  if (n <= 2) return 1;
  thread_local std::vector<int> degree, layer, next, order, parent_pos, child_begin, child_count, cls, label,
      keys, key_begin, idx;
  thread_local std::vector<char> removed;
  thread_local std::vector<std::size_t> level_start;
  degree.assign(n, 0);
  removed.assign(n, 0);
  layer.clear();
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = g.offset[v + 1] - g.offset[v];
    if (degree[v] <= 1) layer.push_back(static_cast<int>(v));
  }
  std::size_t remaining = n;
  while (remaining > 2) {
    next.clear();
    for (int v : layer) {
      removed[v] = 1;
      --remaining;
      for (int k = g.offset[v]; k < g.offset[v + 1]; ++k) {
        const int u = g.nbr[k];
        if (!removed[u] && --degree[u] == 1) next.push_back(u);
      }
    }
    layer.swap(next);
  }
  // BFS from the centre (one or two vertices); children of each vertex are
  // contiguous in `order`.
  order.clear();
  for (int v : layer) {
    if (!removed[v]) order.push_back(v);
  }
  for (int v : order) removed[v] = 2;
  level_start.assign({0});
  parent_pos.assign(n, -1);
  child_begin.assign(n, 0);
  child_count.assign(n, 0);
  std::size_t level_end = order.size();
  for (std::size_t head = 0; head < order.size(); ++head) {
    if (head == level_end) {
      level_start.push_back(head);
      level_end = order.size();
    }
    const int v = order[head];
    child_begin[head] = static_cast<int>(order.size());
    for (int k = g.offset[v]; k < g.offset[v + 1]; ++k) {
      const int u = g.nbr[k];
      if (removed[u] == 2) continue;
      removed[u] = 2;
      parent_pos[order.size()] = static_cast<int>(head);
      order.push_back(u);
    }
    child_count[head] = static_cast<int>(order.size()) - child_begin[head];
  }
  level_start.push_back(order.size());
  const std::size_t levels = level_start.size() - 1;

  cls.assign(n, 0);
  for (std::size_t L = levels; L-- > 0;) {
    const std::size_t lo = level_start[L], hi = level_start[L + 1];
    keys.clear();
    key_begin.clear();
    idx.clear();
    for (std::size_t p = lo; p < hi; ++p) {
      key_begin.push_back(static_cast<int>(keys.size()));
      for (int c = child_begin[p]; c < child_begin[p] + child_count[p]; ++c) keys.push_back(cls[c]);
      std::sort(keys.begin() + key_begin.back(), keys.end());
      idx.push_back(static_cast<int>(p - lo));
    }
    key_begin.push_back(static_cast<int>(keys.size()));
    auto less = [&](int a, int b) {
      const auto a0 = keys.begin() + key_begin[a], a1 = keys.begin() + key_begin[a + 1];
      const auto b0 = keys.begin() + key_begin[b], b1 = keys.begin() + key_begin[b + 1];
      if (a1 - a0 != b1 - b0) return a1 - a0 < b1 - b0;
      return std::lexicographical_compare(a0, a1, b0, b1);
    };
    std::sort(idx.begin(), idx.end(), less);
    int id = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i > 0 && less(idx[i - 1], idx[i])) ++id;
      cls[lo + idx[i]] = id;
    }
  }

  label.assign(n, 0);
  std::size_t orbits = 0;
  for (std::size_t L = 0; L < levels; ++L) {
    const std::size_t lo = level_start[L], hi = level_start[L + 1];
    idx.clear();
    for (std::size_t p = lo; p < hi; ++p) idx.push_back(static_cast<int>(p));
    auto key = [&](int p) { return std::pair<int, int>(parent_pos[p] < 0 ? -1 : label[parent_pos[p]], cls[p]); };
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return key(a) < key(b); });
    int id = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i > 0 && key(idx[i - 1]) != key(idx[i])) ++id;
      label[idx[i]] = id;
    }
    orbits += static_cast<std::size_t>(id) + 1;
  }
  return orbits;
}

}  // namespace

std::size_t orbit_count(const AdjacencyList& adj) {
  thread_local Csr g;
  g.offset.assign(1, 0);
  g.nbr.clear();
  for (const auto& row : adj) {
    for (int u : row) {
      if (u < 0 || static_cast<std::size_t>(u) >= adj.size()) throw TreeError("orbit_count: neighbour out of range");
      g.nbr.push_back(u);
    }
    g.offset.push_back(static_cast<int>(g.nbr.size()));
  }
  if (adj.empty()) throw TreeError("orbit_count: empty tree");
  if (g.nbr.size() != 2 * (adj.size() - 1)) throw TreeError("orbit_count: edge count is not n-1");
  return orbit_count_csr(g);
}

std::size_t orbit_count_from_parents(const std::vector<int>& parent) {
  const std::size_t n = parent.size();
  if (n == 0) throw TreeError("orbit_count: empty tree");
  thread_local Csr g;
  g.offset.assign(n + 1, 0);
  std::size_t roots = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const int p = parent[v];
    if (p < 0) {
      ++roots;
      continue;
    }
    if (static_cast<std::size_t>(p) >= n) throw TreeError("orbit_count: parent out of range");
    ++g.offset[v + 1];
    ++g.offset[p + 1];
  }
  if (roots != 1) throw TreeError("orbit_count: parent array must have exactly one root");
  for (std::size_t v = 0; v < n; ++v) g.offset[v + 1] += g.offset[v];
  g.nbr.resize(2 * (n - 1));
  thread_local std::vector<int> fill;
  fill.assign(g.offset.begin(), g.offset.end() - 1);
  for (std::size_t v = 0; v < n; ++v) {
    const int p = parent[v];
    if (p < 0) continue;
    g.nbr[fill[v]++] = p;
    g.nbr[fill[p]++] = static_cast<int>(v);
  }
  return orbit_count_csr(g);
}

FixPolynomial::FixPolynomial(std::vector<BigInt> coeffs) : coeffs_(trim(std::move(coeffs))) {}

BigInt FixPolynomial::operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : BigInt(0); }

BigInt FixPolynomial::total() const { return std::accumulate(coeffs_.begin(), coeffs_.end(), BigInt(0)); }

BigInt FixPolynomial::total_fixed_points() const {
  BigInt t = 0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) t += coeffs_[k] * static_cast<unsigned long>(k);
  return t;
}

FixPolynomial fix_polynomial(const RootedTree& tree) {
  Classifier cl;
  return FixPolynomial(cl.fix(cl.classify(tree.adjacency(), 0, -1)));
}

FixPolynomial fix_polynomial(const FreeTree& tree) {
  const AdjacencyList adj = tree.adjacency();
  const Center c = center(adj);
  Classifier cl;
  if (!c.is_edge()) return FixPolynomial(cl.fix(cl.classify(adj, c.first, -1)));
  const int a = cl.classify(adj, c.first, c.second);
  const int b = cl.classify(adj, c.second, c.first);
  Poly p = poly_mul(cl.fix(a), cl.fix(b));
  if (a == b) {
    // Flips of the central edge move every vertex.
    p[0] += cl.aut(a) * cl.aut(a);
  }
  return FixPolynomial(std::move(p));
}

namespace serial {

std::size_t orbit_count_by_rerooting(const FreeTree& tree) {
  const AdjacencyList adj = tree.adjacency();
  std::set<LevelSequence> rootings;
  for (std::size_t r = 0; r < adj.size(); ++r) rootings.insert(canonical_levels(adj, static_cast<int>(r)));
  return rootings.size();
}

FixPolynomial fix_polynomial_brute_force(const FreeTree& tree) {
  const AdjacencyList adj = tree.adjacency();
  const std::size_t n = adj.size();
  if (n > 10) throw TreeError("fix_polynomial_brute_force: n must be <= 10");
  std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) {
    for (int u : adj[v]) edge[v][u] = true;
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<BigInt> counts(n + 1);
  do {
    bool automorphism = true;
    for (std::size_t v = 0; v < n && automorphism; ++v) {
      for (int u : adj[v]) {
        if (!edge[perm[v]][perm[u]]) {
          automorphism = false;
          break;
        }
      }
    }
    if (!automorphism) continue;
    std::size_t fixed = 0;
    for (std::size_t v = 0; v < n; ++v) fixed += perm[v] == static_cast<int>(v);
    counts[fixed] += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return FixPolynomial(std::move(counts));
}

}  // namespace serial

}  // namespace otter
