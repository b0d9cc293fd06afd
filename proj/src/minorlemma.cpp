#include "chernforge/minorlemma.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "chernforge/errors.hpp"
#include "chernforge/form_basis.hpp"

namespace chernforge {

PluckerMatrix plucker_matrix(int n, int q) {
  if (n < 2 || q < 1) throw ValidationError("plucker_matrix needs n >= 2 and q >= 1");
  const long long rows = binomial(n, 2);
  if (rows > 6 || q > 8) throw BudgetExceeded("symbolic path is capped at C(n,2) <= 6 and q <= 8");
  PluckerMatrix pm;
  pm.n = n;
  pm.q = q;
  pm.rows = static_cast<int>(rows);
  pm.names.resize(static_cast<std::size_t>(2 * n * q));
  for (int j = 0; j < q; ++j) {
    for (int k = 0; k < n; ++k) {
      pm.names[pm.var_x(j, k)] = "x" + std::to_string(j + 1) + "_" + std::to_string(k + 1);
      pm.names[pm.var_xbar(j, k)] = "xbar" + std::to_string(j + 1) + "_" + std::to_string(k + 1);
    }
  }
  pm.entries.assign(pm.rows, std::vector<FpPoly>(q));
  for (int j = 0; j < q; ++j) {
    int i = 0;
    for (int k1 = 0; k1 < n; ++k1) {
      for (int k2 = k1 + 1; k2 < n; ++k2, ++i) {
        pm.entries[i][j] = FpPoly::variable(pm.var_x(j, k1)) * FpPoly::variable(pm.var_xbar(j, k2)) -
                           FpPoly::variable(pm.var_x(j, k2)) * FpPoly::variable(pm.var_xbar(j, k1));
      }
    }
  }
  return pm;
}

FpPoly symbolic_det(const PluckerMatrix &m, const std::vector<int> &columns) {
  const int size = m.rows;
  if (static_cast<int>(columns.size()) != size) throw ValidationError("symbolic_det: subset size must equal the row count");
  for (int c : columns)
    if (c < 0 || c >= m.q) throw ValidationError("symbolic_det: column index out of range");
  // Sum over permutations, one column at a time; state = set of used rows.
  // Choosing row r after the rows in S adds one inversion per larger row in S.
  std::map<unsigned, FpPoly> layer{{0u, FpPoly::constant(1)}};
  for (int col : columns) {
    std::map<unsigned, FpPoly> next;
    for (const auto &[used, poly] : layer) {
      for (int r = 0; r < size; ++r) {
        if (used & (1u << r)) continue;
        const int larger = std::popcount(used >> (r + 1));
        FpPoly term = poly * m.entries[r][col];
        if (larger % 2 == 1) term = FpPoly() - term;
        next[used | (1u << r)] += term;
      }
    }
    layer = std::move(next);
  }
  return layer.begin()->second;
}

bool multilinearity_check(const FpPoly &p) {
  for (const auto &[mono, c] : p.terms())
    for (int v : mono.support())
      if (mono.exponent(v) > 1) return false;
  return true;
}

namespace {
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};
} // namespace

FactorReport factor_components(const FpPoly &p, int trials, std::uint64_t seed) {
  if (p.is_zero()) throw InvalidInput("factor_components: zero polynomial");
  if (!multilinearity_check(p)) throw InvalidInput("factor_components: polynomial is not multilinear");
  if (trials < 1) throw ValidationError("factor_components: trials must be >= 1");

  // Variables present in every monomial are monomial factors.
  Monomial common;
  bool first = true;
  for (const auto &[mono, c] : p.terms()) {
    if (first) {
      common = mono;
      first = false;
    } else {
      for (int w = 0; w < 4; ++w) common.words[w] &= mono.words[w];
    }
  }
  FactorReport rep;
  rep.monomial_factors = common.support();
  FpPoly rest;
  for (const auto &[mono, c] : p.terms()) {
    Monomial reduced = mono;
    for (int w = 0; w < 4; ++w) reduced.words[w] &= ~common.words[w];
    rest.add_term(reduced, c);
  }

  const std::vector<int> vars = rest.variables();
  const int nv = static_cast<int>(vars.size());
  std::vector<int> local(kMaxVariables, -1);
  for (int i = 0; i < nv; ++i) local[vars[i]] = i;

  // For multilinear P and a point r with nonzero coordinates, a monomial of
  // value v contributes v / r_x to dP/dx and v / (r_x r_y) to d2P/dxdy.
  std::vector<char> edge(static_cast<std::size_t>(nv) * nv, 0);
  std::mt19937_64 rng(seed);
  const auto terms = rest.sorted_terms();
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<std::uint64_t> r(nv), rinv(nv);
    for (int i = 0; i < nv; ++i) {
      r[i] = fp_random_nonzero(rng);
      rinv[i] = fp_inv(r[i]);
    }
    std::uint64_t value = 0;
    std::vector<std::uint64_t> dx(nv, 0);
    std::vector<std::uint64_t> dxy(static_cast<std::size_t>(nv) * nv, 0);
    std::vector<int> sup;
    for (const auto &[mono, c] : terms) {
      sup.clear();
      for (int v : mono.support()) sup.push_back(local[v]);
      std::uint64_t v = c;
      for (int x : sup) v = fp_mul(v, r[x]);
      value = fp_add(value, v);
      for (std::size_t a = 0; a < sup.size(); ++a) {
        const std::uint64_t va = fp_mul(v, rinv[sup[a]]);
        dx[sup[a]] = fp_add(dx[sup[a]], va);
        for (std::size_t b = a + 1; b < sup.size(); ++b) {
          const std::size_t idx = static_cast<std::size_t>(std::min(sup[a], sup[b])) * nv + std::max(sup[a], sup[b]);
          dxy[idx] = fp_add(dxy[idx], fp_mul(va, rinv[sup[b]]));
        }
      }
    }
    for (int x = 0; x < nv; ++x) {
      for (int y = x + 1; y < nv; ++y) {
        const std::size_t idx = static_cast<std::size_t>(x) * nv + y;
        if (fp_mul(value, dxy[idx]) != fp_mul(dx[x], dx[y])) edge[idx] = 1;
      }
    }
  }

  UnionFind uf(std::max(nv, 1));
  rep.pairs_tested = static_cast<std::size_t>(nv) * (nv > 0 ? nv - 1 : 0) / 2;
  for (int x = 0; x < nv; ++x) {
    for (int y = x + 1; y < nv; ++y) {
      if (edge[static_cast<std::size_t>(x) * nv + y]) {
        ++rep.edges;
        uf.unite(x, y);
      }
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < nv; ++i) groups[uf.find(i)].push_back(vars[i]);
  for (auto &[root, g] : groups) rep.components.push_back(std::move(g));
  for (int v : rep.monomial_factors) rep.components.push_back({v});
  std::sort(rep.components.begin(), rep.components.end());

  const std::size_t non_edges = rep.pairs_tested - rep.edges;
  const double per_trial = 2.0 * p.total_degree() / static_cast<double>(kFieldPrime);
  rep.error_bound = static_cast<double>(non_edges) * std::pow(per_trial, trials);

  const std::size_t nontrivial_parts = groups.size() + rep.monomial_factors.size();
  rep.irreducible = nontrivial_parts == 1;
  rep.verdict = rep.irreducible ? "irreducible" : "splits";
  return rep;
}

namespace {
void next_subsets(int q, int size, std::vector<int> &cur, int start, std::vector<std::vector<int>> &out) {
  if (static_cast<int>(cur.size()) == size) {
    out.push_back(cur);
    return;
  }
  for (int c = start; c < q; ++c) {
    cur.push_back(c);
    next_subsets(q, size, cur, c + 1, out);
    cur.pop_back();
  }
}
} // namespace

LemmaReport lemma_suite(int n, int q, int trials, std::uint64_t seed, const std::vector<int> &only_subset) {
  if (n > 4) throw BudgetExceeded("symbolic lemma checks are capped at n <= 4; use the Monte Carlo mode");
  const PluckerMatrix pm = plucker_matrix(n, q);
  LemmaReport rep;
  rep.n = n;
  rep.q = q;
  rep.rows = pm.rows;
  if (q < pm.rows) throw ValidationError("lemma_suite needs q >= C(n, 2)");

  std::vector<std::vector<int>> subsets;
  if (!only_subset.empty()) {
    subsets.push_back(only_subset);
  } else {
    std::vector<int> cur;
    next_subsets(q, pm.rows, cur, 0, subsets);
  }
  std::uint64_t sub_seed = seed;
  for (const auto &cols : subsets) {
    SubsetVerdict v;
    v.columns = cols;
    const FpPoly det = symbolic_det(pm, cols);
    v.terms = det.size();
    v.multilinear = multilinearity_check(det);
    v.nonzero = !det.is_zero();
    if (v.multilinear && v.nonzero) {
      v.factors = factor_components(det, trials, sub_seed++);
      rep.error_bound += v.factors.error_bound;
    }
    rep.all_multilinear = rep.all_multilinear && v.multilinear;
    rep.all_nonzero = rep.all_nonzero && v.nonzero;
    rep.all_irreducible = rep.all_irreducible && v.factors.irreducible;
    rep.subsets.push_back(std::move(v));
  }

  // Family over columns {0..N-2, k}.
  std::set<int> shared;
  for (int c = 0; c + 1 < pm.rows; ++c)
    for (int k = 0; k < n; ++k) {
      shared.insert(pm.var_x(c, k));
      shared.insert(pm.var_xbar(c, k));
    }
  std::vector<std::set<int>> extras;
  for (int k = pm.rows - 1; k < q; ++k) {
    std::vector<int> cols;
    for (int c = 0; c + 1 < pm.rows; ++c) cols.push_back(c);
    cols.push_back(k);
    std::set<int> extra;
    for (int v : symbolic_det(pm, cols).variables())
      if (!shared.count(v)) extra.insert(v);
    std::set<int> expected;
    for (int kk = 0; kk < n; ++kk) {
      expected.insert(pm.var_x(k, kk));
      expected.insert(pm.var_xbar(k, kk));
    }
    if (extra != expected) rep.family_support_disjoint = false;
    for (const auto &prev : extras)
      for (int v : extra)
        if (prev.count(v)) rep.family_support_disjoint = false;
    extras.push_back(std::move(extra));
  }
  return rep;
}

int fp_rank(std::vector<std::vector<std::uint64_t>> a) {
  const int rows = static_cast<int>(a.size());
  if (rows == 0) return 0;
  const int cols = static_cast<int>(a[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][c] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[rank], a[pivot]);
    const std::uint64_t inv = fp_inv(a[rank][c]);
    for (int r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) continue;
      const std::uint64_t f = fp_mul(a[r][c], inv);
      for (int cc = c; cc < cols; ++cc) a[r][cc] = fp_sub(a[r][cc], fp_mul(f, a[rank][cc]));
    }
    ++rank;
  }
  return rank;
}

CodimReport codim_monte_carlo(int m, int q, int trials, std::uint64_t seed, long long entry_range) {
  if (m < 2 || q < 1 || trials < 1 || entry_range < 1) throw ValidationError("codim_monte_carlo: invalid parameters");
  CodimReport rep;
  rep.m = m;
  rep.q = q;
  rep.trials = trials;
  rep.entry_range = entry_range;
  rep.target_rank = static_cast<int>(binomial(m, 2));
  rep.min_rank = rep.target_rank;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> dist(-entry_range, entry_range);
  for (int t = 0; t < trials; ++t) {
    std::vector<std::vector<std::uint64_t>> a(rep.target_rank, std::vector<std::uint64_t>(q));
    for (int j = 0; j < q; ++j) {
      std::vector<long long> l0(m), l1(m);
      for (int k = 0; k < m; ++k) {
        l0[k] = dist(rng);
        l1[k] = dist(rng);
      }
      int i = 0;
      for (int k1 = 0; k1 < m; ++k1)
        for (int k2 = k1 + 1; k2 < m; ++k2, ++i) a[i][j] = fp_from_int(l0[k1] * l1[k2] - l0[k2] * l1[k1]);
    }
    const int rank = fp_rank(std::move(a));
    rep.min_rank = std::min(rep.min_rank, rank);
    if (rank == rep.target_rank) ++rep.full_rank;
  }
  rep.fraction = static_cast<double>(rep.full_rank) / trials;
  return rep;
}

} // namespace chernforge
