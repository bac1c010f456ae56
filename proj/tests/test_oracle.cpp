#include "doctest.h"
#include "fpcore/oracle.hpp"

#include <set>

using namespace fpcore;

namespace {

AmbientSpec z2_z2() {
  return plain_spec({FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)}, 0);
}
AmbientSpec z2_z3() {
  return plain_spec({FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)}, 0);
}
AmbientSpec f2() { return plain_spec({}, 2); }

NormalForm w(const AmbientSpec& s, const std::string& t) {
  return parse_word(s, t);
}

}  // namespace

TEST_CASE("bfs_subgroup balls") {
  auto spec = f2();
  auto ball = bfs_subgroup(spec, {w(spec, "x1")}, 3);
  CHECK(ball.elements.size() == 7);  // 1, x^±1, x^±2, x^±3
  CHECK(!ball.truncated);

  auto z23 = z2_z3();
  auto b2 = bfs_subgroup(z23, {w(z23, "f1:1")}, 2);
  CHECK(b2.elements.size() == 2);  // {1, a}

  auto z22 = z2_z2();
  auto b3 = bfs_subgroup(z22, {w(z22, "f1:1 f2:1")}, 4);
  CHECK(b3.elements.size() == 5);  // 1, (ac)^±1, (ac)^±2

  // monotone in the budget
  for (int l = 1; l < 6; ++l) {
    auto small = bfs_subgroup(z22, {w(z22, "f1:1 f2:1")}, l);
    auto big = bfs_subgroup(z22, {w(z22, "f1:1 f2:1")}, l + 1);
    CHECK(small.elements.size() <= big.elements.size());
    for (auto& e : small.elements) {
      bool found = false;
      for (auto& f : big.elements)
        if (e == f) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("oracle_member verdicts") {
  auto spec = f2();
  SubgroupOracle h(spec, {w(spec, "x1")}, 4);
  CHECK(h.member(w(spec, "x1 x1")) == OracleVerdict::Yes);
  CHECK(h.member(w(spec, "x2")) == OracleVerdict::NoAtBudget);

  auto z22 = z2_z2();
  SubgroupOracle hc(z22, {w(z22, "f1:1 f2:1")}, 8);
  CHECK(hc.member(w(z22, "f1:1")) == OracleVerdict::NoAtBudget);
}

TEST_CASE("oracle agrees with accepts on instance balls") {
  struct Case {
    AmbientSpec spec;
    std::vector<std::string> gens;
  };
  std::vector<Case> cases;
  cases.push_back({z2_z3(), {"f1:1", "f2:1"}});
  cases.push_back({z2_z2(), {"f1:1 f2:1"}});
  cases.push_back({f2(), {"x1 x2", "x2 x1"}});
  cases.push_back({plain_spec({FiniteGroup::symmetric(3)}, 1),
                   {"f1:1 x1", "x1 f1:3"}});
  for (auto& c : cases) {
    std::vector<NormalForm> gens;
    for (auto& t : c.gens) gens.push_back(parse_word(c.spec, t));
    auto g = build_from_generators(c.spec, gens);
    SubgroupOracle oracle(c.spec, gens, 6);
    REQUIRE(!oracle.truncated());
    std::vector<NormalForm> ball;
    REQUIRE(enumerate_ball(c.spec, alphabet_of(c.spec, gens), 6, 400000, &ball));
    int checked = 0;
    for (auto& word : ball) {
      bool acc = accepts(g, word);
      bool yes = oracle.member(word) == OracleVerdict::Yes;
      CHECK(acc == yes);
      ++checked;
    }
    CHECK(checked > 10);
  }
}

TEST_CASE("enumerate_ball yields canonical forms") {
  auto spec = plain_spec({FiniteGroup::cyclic(3)}, 1);
  std::vector<NormalForm> ball;
  REQUIRE(enumerate_ball(spec, full_alphabet(spec), 4, 100000, &ball));
  for (auto& u : ball) {
    std::vector<Letter> raw = u.letters;
    CHECK(normalize(spec, raw) == u);
  }
  // count distinct
  std::set<std::vector<int64_t>> uniq;
  for (auto& u : ball) uniq.insert(encode(u));
  CHECK(uniq.size() == ball.size());
}

TEST_CASE("hk membership") {
  auto spec = f2();
  SubgroupOracle h(spec, {w(spec, "x1")}, 6);
  SubgroupOracle k(spec, {w(spec, "x2")}, 6);
  CHECK(hk_member(h, k, w(spec, "x1 x2")) == OracleVerdict::Yes);
  CHECK(hk_member(h, k, w(spec, "x2 x1")) == OracleVerdict::NoAtBudget);
  CHECK(hk_member(h, k, normalize(spec, {})) == OracleVerdict::Yes);
}

TEST_CASE("oracle intersection elements") {
  auto spec = f2();
  SubgroupOracle h(spec, {w(spec, "x1"), w(spec, "x2 x2")}, 6);
  SubgroupOracle k(spec, {w(spec, "x2")}, 6);
  auto common = oracle_intersection_elements(h, k);
  // intersection is <x2^2>
  CHECK(!common.empty());
  for (auto& c : common) {
    CHECK(c.letters[0].kind == Letter::Kind::Free);
    CHECK(c.letters[0].idx == 1);
    CHECK(syllable_length(c) % 2 == 0);
  }
}

TEST_CASE("tree ball quotient: whole group is psi") {
  auto spec = z2_z3();
  auto q = tree_ball_quotient(spec, {w(spec, "f1:1"), w(spec, "f2:1")}, 2, 6);
  REQUIRE(!q.truncated);
  // one base class, two factor classes, two factor edges
  int bases = 0, factors = 0;
  for (auto& v : q.vertices) (v.factor ? factors : bases)++;
  CHECK(bases == 1);
  CHECK(factors == 2);
  CHECK(q.edges.size() == 2);
}

TEST_CASE("tree ball quotient matches trimmed core for <ac>") {
  auto spec = z2_z2();
  auto gens = std::vector<NormalForm>{w(spec, "f1:1 f2:1")};
  auto q = tree_ball_quotient(spec, gens, 3, 6);
  REQUIRE(!q.truncated);
  auto stripped = q.stripped();
  auto core = trim_core(build_from_generators(spec, gens));
  CHECK(graphs_isomorphic(stripped.comparison_graph(),
                          core_comparison_graph(core)));
}

TEST_CASE("tree ball quotient of trivial subgroup is the ball") {
  auto spec = z2_z3();
  auto q = tree_ball_quotient(spec, {}, 2, 2);
  // radius-2 ball of the tree: base, two factor vertices, their other bases
  int bases = 0, factors = 0;
  for (auto& v : q.vertices) (v.factor ? factors : bases)++;
  CHECK(factors == 2);
  CHECK(bases == 1 + 1 + 2);  // identity coset, a-coset, b and b^2 cosets
}

TEST_CASE("oracle fiber count on plain edges") {
  auto spec = f2();
  SubgroupOracle h(spec, {w(spec, "x1")}, 6);
  SubgroupOracle k(spec, {w(spec, "x1 x1")}, 6);
  FiberCellQuery q;
  q.witness = normalize(spec, {});
  q.factor_cell = false;
  auto fc = oracle_fiber_count(h, k, q);
  CHECK(fc.verified);
  CHECK(fc.count == 1);  // trivial edge group: identity only
}

TEST_CASE("oracle fiber count sees the amalgam") {
  EmbeddingMap e{{0, 2}};
  auto spec =
      amalgamated_spec({FiniteGroup::cyclic(4), FiniteGroup::cyclic(4)},
                       FiniteGroup::cyclic(2), {e, e}, 0);
  // H = K = G: HK contains A, fibers over the base pair count
  // |H_x \ A / K_x| = 1 with H_x = K_x = A
  std::vector<NormalForm> gens{parse_word(spec, "f1:1"),
                               parse_word(spec, "f2:1")};
  SubgroupOracle h(spec, gens, 5), k(spec, gens, 5);
  FiberCellQuery q;
  q.witness = normalize(spec, {});
  q.factor_cell = false;
  q.hx = {0, 1};
  q.kx = {0, 1};
  auto fc = oracle_fiber_count(h, k, q);
  CHECK(fc.verified);
  CHECK(fc.count == 1);

  // edge-free sides H = <t1 t2>, K = <t1 t2^3>: A cap HK detected
  SubgroupOracle h2(spec, {parse_word(spec, "f1:1 f2:1")}, 6);
  SubgroupOracle k2(spec, {parse_word(spec, "f1:1 f2:3")}, 6);
  FiberCellQuery q2;
  q2.witness = normalize(spec, {});
  q2.factor_cell = false;
  auto fc2 = oracle_fiber_count(h2, k2, q2);
  // t1 t2 (t1 t2^3)^-1 = t1 t2 t2^-3 t1^-1 = t1 t2^2 t1^-1 hmm contains a?
  // regardless of the value, the call must verify at this budget
  CHECK(fc2.verified);
  CHECK(fc2.count >= 1);
  CHECK(fc2.count <= 2);
}
