#include "doctest.h"
#include "fpcore/checks.hpp"

using namespace fpcore;

namespace {

AmbientSpec z2_z3() {
  return plain_spec({FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)}, 0);
}
AmbientSpec z4_amalg(int fr = 0) {
  EmbeddingMap e{{0, 2}};
  return amalgamated_spec({FiniteGroup::cyclic(4), FiniteGroup::cyclic(4)},
                          FiniteGroup::cyclic(2), {e, e}, fr);
}

NormalForm w(const AmbientSpec& s, const std::string& t) {
  return parse_word(s, t);
}

VerificationRecord analyze(const AmbientSpec& spec,
                           const std::vector<std::string>& gh,
                           const std::vector<std::string>& gk) {
  std::vector<NormalForm> a, b;
  for (auto& t : gh) a.push_back(parse_word(spec, t));
  for (auto& t : gk) b.push_back(parse_word(spec, t));
  return analyze_instance(spec, a, b, Budgets{}, "t");
}

}  // namespace

TEST_CASE("theta values") {
  auto tp = theta_plain_product(z2_z3());
  CHECK(tp.num == 3);
  CHECK(tp.den == 1);
  // Z/2 * Z/2: no subgroup of order >= 3 in the factors: theta = 1
  auto t2 = theta_plain_product(
      plain_spec({FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)}, 0));
  CHECK(t2.num == 1);
  CHECK(t2.den == 1);
  // Z/4 over Z/2: quotient Z/2, theta = 1
  auto tq = theta_of_quotients(z4_amalg());
  CHECK(tq.num == 1);
  CHECK(tq.den == 1);
  // free groups only: theta = 1
  auto tf = theta_plain_product(plain_spec({}, 2));
  CHECK(tf.num == 1);
}

TEST_CASE("whole-group instance: H = K = Z/2 * Z/3") {
  auto spec = z2_z3();
  auto rec = analyze(spec, {"f1:1", "f2:1"}, {"f1:1", "f2:1"});
  CHECK(rec.violations == 0);
  CHECK(rec.ch.c == 2);
  CHECK(rec.chk.c == 2);
  CHECK(!rec.hk_elliptic);
  CHECK(rec.n_eff == 1);
  // part 2: 1 <= 6 * 1 * 1 * 1
  for (auto& c : rec.checks) {
    if (c.name == "thm1_part2") {
      CHECK(c.applicable);
      CHECK(c.lhs == 1);
      CHECK(c.rhs.num == 6);
      CHECK(c.ok);
    }
    if (c.name == "ivanov") {
      CHECK(c.applicable);
      CHECK(c.rhs.num == 2 * 3);  // 2 theta(G) with theta = 3
    }
    if (c.name == "zakharov") CHECK(!c.applicable);  // vertex groups full
    if (c.name == "finite_index") CHECK(!c.applicable);
  }
}

TEST_CASE("free subgroups of F2: Zakharov applies") {
  auto spec = plain_spec({}, 2);
  auto rec = analyze(spec, {"x1", "x2 x2"}, {"x2"});
  CHECK(rec.violations == 0);
  // intersection <x2^2>: Cbar = 0
  CHECK(rec.chk.c == 1);
  CHECK(rec.chk.c_bar == 0);
  bool saw = false;
  for (auto& c : rec.checks)
    if (c.name == "zakharov") {
      saw = true;
      CHECK(c.applicable);
      CHECK(c.lhs == 0);
      CHECK(c.ok);
    }
  CHECK(saw);
}

TEST_CASE("elliptic intersection gets the trivial bound") {
  auto spec = z2_z3();
  auto rec = analyze(spec, {"f1:1"}, {"f2:1"});
  CHECK(rec.hk_elliptic);
  for (auto& c : rec.checks) {
    if (c.name == "elliptic_trivial_bound") {
      CHECK(c.applicable);
      CHECK(c.ok);
    }
    if (c.name == "thm1_part2") {
      CHECK(!c.applicable);
    }
  }
  CHECK(rec.violations == 0);
}

TEST_CASE("thm2 on an edge-free amalgamated pair") {
  auto spec = z4_amalg(0);
  std::vector<NormalForm> gh{w(spec, "f1:1 f2:1")};
  std::vector<NormalForm> gk{normalize(
      spec, {Letter::amalgam(1), Letter::factor(0, 1), Letter::factor(1, 1)})};
  auto rec = analyze_instance(spec, gh, gk, Budgets{}, "amalg");
  CHECK(rec.violations == 0);
  CHECK(rec.h_edge_free);
  CHECK(rec.k_edge_free);
  CHECK(!rec.hk_elliptic);
  CHECK(rec.n_eff == 2);
  CHECK(rec.a_cap_hk == 2);
  bool saw2 = false, saw3 = false;
  for (auto& c : rec.checks) {
    if (c.name == "thm2") {
      saw2 = true;
      CHECK(c.applicable);
      // Kbar(H cap K) = 0 <= 2 * 1 * 2 * 0 * 0
      CHECK(c.lhs == 0);
      CHECK(c.ok);
    }
    if (c.name == "thm3") {
      saw3 = true;
      CHECK(c.applicable);  // free_rank 0
      CHECK(!c.budget_flagged);
      CHECK(c.ok);
    }
  }
  CHECK(saw2);
  CHECK(saw3);
}

TEST_CASE("thm3 whole-group example") {
  auto spec = z4_amalg(0);
  // H = K = G: Cbar = 1 each, |A cap HK| = 2, lhs = 1 <= 2*1*2*1
  auto rec = analyze(spec, {"f1:1", "f2:1"}, {"f1:1", "f2:1"});
  CHECK(rec.violations == 0);
  CHECK(rec.ch.c_bar == 1);
  CHECK(rec.chk.c_bar == 1);
  CHECK(rec.a_cap_hk == 2);
  for (auto& c : rec.checks)
    if (c.name == "thm3") {
      CHECK(c.applicable);
      CHECK(c.lhs == 1);
      CHECK(c.rhs.num == 2 * 1 * 2 * 1 * 1);
      CHECK(c.ok);
    }
}

TEST_CASE("unsupported amalgamated combination is rejected") {
  auto spec = z4_amalg(1);
  std::vector<NormalForm> bad{w(spec, "a:1")};
  std::vector<NormalForm> good{w(spec, "f1:1 f2:1")};
  CHECK_THROWS_AS(analyze_instance(spec, bad, good, Budgets{}, "u"), error);
}

TEST_CASE("local and lemma2 checks run and hold on random plain instances") {
  auto spec = plain_spec(
      {FiniteGroup::cyclic(2), FiniteGroup::symmetric(3)}, 1);
  int pairs = 0;
  for (uint64_t s = 0; s < 25; ++s) {
    std::vector<NormalForm> gh{random_word(spec, 5, 11 * s + 1),
                               random_word(spec, 5, 11 * s + 2)};
    // overlap K with H so the intersection is often nontrivial
    std::vector<NormalForm> gk{gh[0], random_word(spec, 5, 11 * s + 3)};
    auto rec = analyze_instance(spec, gh, gk, Budgets{}, "r");
    CHECK(rec.violations == 0);
    pairs += rec.local.pairs;
    CHECK(rec.lemma1_ok);
  }
  CHECK(pairs > 0);
}
