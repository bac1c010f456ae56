#include "fpcore/finite_group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace fpcore {

void FiniteGroup::finish(std::string name) {
  name_ = std::move(name);
  const int n = order_;
  if (n <= 0) throw error(name_ + ": empty group table");
  if ((int)mult_.size() != n * n) throw error(name_ + ": table is not square");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int p = mul(a, b);
      if (p < 0 || p >= n)
        throw error(name_ + ": table entry out of range at (" +
                    std::to_string(a) + "," + std::to_string(b) + ")");
    }
  for (int a = 0; a < n; ++a) {
    if (mul(0, a) != a || mul(a, 0) != a)
      throw error(name_ + ": element 0 is not a two-sided identity at " +
                  std::to_string(a));
  }
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (mul(a, b) == 0 && mul(b, a) == 0) {
        inv_[a] = b;
        break;
      }
    }
    if (inv_[a] < 0)
      throw error(name_ + ": element " + std::to_string(a) +
                  " has no two-sided inverse");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw error(name_ + ": associativity fails at triple (" +
                      std::to_string(a) + "," + std::to_string(b) + "," +
                      std::to_string(c) + ")");
}

int FiniteGroup::elem_order(int a) const {
  int x = a, k = 1;
  while (x != 0) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

bool FiniteGroup::is_central(int a) const {
  for (int b = 0; b < order_; ++b)
    if (mul(a, b) != mul(b, a)) return false;
  return true;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw error("cyclic: order must be >= 1");
  FiniteGroup g;
  g.order_ = n;
  g.mult_.resize(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.mult_[a * n + b] = (a + b) % n;
  g.finish("Z/" + std::to_string(n));
  return g;
}

FiniteGroup FiniteGroup::symmetric(int n) {
  if (n < 1 || n > 5) throw error("symmetric: n must be in 1..5");
  std::vector<int> base(n);
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> perms;
  std::vector<int> p = base;
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, int> id;
  for (size_t i = 0; i < perms.size(); ++i) id[perms[i]] = (int)i;
  const int m = (int)perms.size();
  FiniteGroup g;
  g.order_ = m;
  g.mult_.resize(m * m);
  std::vector<int> r(n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (int x = 0; x < n; ++x) r[x] = perms[a][perms[b][x]];
      g.mult_[a * m + b] = id[r];
    }
  g.finish("S" + std::to_string(n));
  return g;
}

FiniteGroup FiniteGroup::dihedral(int n) {
  if (n < 1) throw error("dihedral: n must be >= 1");
  const int m = 2 * n;
  auto enc = [n](int refl, int rot) { return refl * n + ((rot % n) + n) % n; };
  FiniteGroup g;
  g.order_ = m;
  g.mult_.resize(m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int ra = a % n, sa = a / n, rb = b % n, sb = b / n;
      // s r^a s = r^-a
      int rot = sb ? rb - ra : ra + rb;
      g.mult_[a * m + b] = enc(sa ^ sb, rot);
    }
  g.finish("D" + std::to_string(n));
  return g;
}

FiniteGroup FiniteGroup::from_table(std::string name,
                                    std::vector<std::vector<int>> table) {
  FiniteGroup g;
  g.order_ = (int)table.size();
  for (auto& row : table) {
    if ((int)row.size() != g.order_)
      throw error(name + ": table is not square");
    g.mult_.insert(g.mult_.end(), row.begin(), row.end());
  }
  g.finish(std::move(name));
  return g;
}

FiniteGroup make_group(const std::string& descriptor) {
  auto colon = descriptor.find(':');
  if (colon == std::string::npos)
    throw error("bad group descriptor '" + descriptor + "'");
  std::string kind = descriptor.substr(0, colon);
  int n = 0;
  try {
    n = std::stoi(descriptor.substr(colon + 1));
  } catch (...) {
    throw error("bad group descriptor '" + descriptor + "'");
  }
  if (kind == "cyclic") return FiniteGroup::cyclic(n);
  if (kind == "sym") return FiniteGroup::symmetric(n);
  if (kind == "dihedral") return FiniteGroup::dihedral(n);
  throw error("unknown group kind '" + kind + "'");
}

Subgroup trivial_subgroup() { return {0}; }

Subgroup full_subgroup(const FiniteGroup& g) {
  Subgroup s(g.order());
  std::iota(s.begin(), s.end(), 0);
  return s;
}

Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens) {
  std::vector<char> in(g.order(), 0);
  in[0] = 1;
  std::vector<int> work{0};
  for (int x : gens) {
    if (x < 0 || x >= g.order()) throw error("subgroup_closure: bad element");
    if (!in[x]) {
      in[x] = 1;
      work.push_back(x);
    }
  }
  // products of known elements until stable
  for (size_t i = 0; i < work.size(); ++i)
    for (size_t j = 0; j < work.size(); ++j) {
      int p = g.mul(work[i], work[j]);
      if (!in[p]) {
        in[p] = 1;
        work.push_back(p);
      }
    }
  Subgroup s;
  for (int x = 0; x < g.order(); ++x)
    if (in[x]) s.push_back(x);
  return s;
}

bool subgroup_contains(const Subgroup& s, int x) {
  return std::binary_search(s.begin(), s.end(), x);
}

bool is_subgroup(const FiniteGroup& g, const Subgroup& s) {
  if (s.empty() || s[0] != 0) return false;
  for (int a : s)
    for (int b : s)
      if (!subgroup_contains(s, g.mul(a, b))) return false;
  return true;
}

Subgroup subgroup_intersection(const Subgroup& a, const Subgroup& b) {
  Subgroup out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& s, int by) {
  Subgroup out;
  out.reserve(s.size());
  for (int x : s) out.push_back(g.conj(by, x));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_normal(const FiniteGroup& g, const Subgroup& s,
               std::pair<int, int>* witness) {
  for (int a = 0; a < g.order(); ++a)
    for (int x : s)
      if (!subgroup_contains(s, g.conj(a, x))) {
        if (witness) *witness = {a, x};
        return false;
      }
  return true;
}

std::vector<int> subgroup_generators(const FiniteGroup& g, const Subgroup& s) {
  std::vector<int> gens;
  Subgroup have = trivial_subgroup();
  for (int x : s) {
    if (!subgroup_contains(have, x)) {
      gens.push_back(x);
      std::vector<int> gg = gens;
      have = subgroup_closure(g, gg);
    }
  }
  return gens;
}

std::vector<std::vector<int>> double_cosets(const FiniteGroup& g,
                                            const Subgroup& s,
                                            const Subgroup& t) {
  std::vector<char> seen(g.order(), 0);
  std::vector<std::vector<int>> blocks;
  for (int x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    std::set<int> block;
    for (int a : s)
      for (int b : t) block.insert(g.mul(g.mul(a, x), b));
    std::vector<int> v(block.begin(), block.end());
    for (int e : v) seen[e] = 1;
    blocks.push_back(std::move(v));
  }
  return blocks;
}

int coset_min(const FiniteGroup& g, const Subgroup& s, int c,
              const Subgroup& t) {
  int best = g.order();
  for (int a : s)
    for (int b : t) best = std::min(best, g.mul(g.mul(a, c), b));
  return best;
}

QuotientMap quotient_group(const FiniteGroup& g, const Subgroup& a) {
  std::pair<int, int> w;
  if (!is_subgroup(g, a)) throw error("quotient_group: not a subgroup");
  if (!is_normal(g, a, &w))
    throw error("quotient_group: subgroup of " + g.name() +
                " is not normal: " + std::to_string(w.first) + "*" +
                std::to_string(w.second) + "*" + std::to_string(w.first) +
                "^-1 lies outside");
  // cosets keyed by their minimal element; identity coset comes first
  std::vector<int> coset_of(g.order(), -1);
  std::vector<int> reps;
  for (int x = 0; x < g.order(); ++x) {
    if (coset_of[x] >= 0) continue;
    int id = (int)reps.size();
    reps.push_back(x);
    for (int h : a) coset_of[g.mul(x, h)] = id;
  }
  const int m = (int)reps.size();
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      table[i][j] = coset_of[g.mul(reps[i], reps[j])];
  QuotientMap q;
  q.quotient = FiniteGroup::from_table(
      g.name() + "/|" + std::to_string((int)a.size()) + "|", std::move(table));
  q.proj = std::move(coset_of);
  return q;
}

A3Theta a3_theta(const FiniteGroup& g) {
  // A minimal subgroup of order >= 3 is cyclic of odd prime order, Z/4 or
  // the Klein group, so closures of <= 2 generators find the minimum.
  std::optional<int> best;
  auto consider = [&](const Subgroup& s) {
    if ((int)s.size() >= 3 && (!best || (int)s.size() < *best))
      best = (int)s.size();
  };
  for (int i = 1; i < g.order(); ++i) consider(subgroup_closure(g, {i}));
  for (int i = 1; i < g.order(); ++i)
    for (int j = i + 1; j < g.order(); ++j)
      consider(subgroup_closure(g, {i, j}));
  A3Theta r;
  r.a3 = best;
  if (best) {
    r.theta_num = *best;
    r.theta_den = *best - 2;
  }
  return r;
}

}  // namespace fpcore
