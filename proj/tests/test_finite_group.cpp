#include "doctest.h"
#include "fpcore/finite_group.hpp"

#include <set>

using namespace fpcore;

namespace {

// independent brute checks used as oracles below
bool table_is_group(const FiniteGroup& g) {
  int n = g.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) return false;
  for (int a = 0; a < n; ++a)
    if (g.mul(a, 0) != a || g.mul(0, a) != a || g.mul(a, g.inv(a)) != 0)
      return false;
  return true;
}

}  // namespace

TEST_CASE("constructors produce valid groups") {
  for (auto g : {FiniteGroup::cyclic(1), FiniteGroup::cyclic(3),
                 FiniteGroup::cyclic(12), FiniteGroup::symmetric(3),
                 FiniteGroup::symmetric(4), FiniteGroup::dihedral(1),
                 FiniteGroup::dihedral(4), FiniteGroup::dihedral(6)}) {
    CAPTURE(g.name());
    CHECK(table_is_group(g));
  }
  CHECK(FiniteGroup::cyclic(3).order() == 3);
  CHECK(FiniteGroup::symmetric(3).order() == 6);
  CHECK(FiniteGroup::dihedral(5).order() == 10);
  CHECK(make_group("cyclic:4").order() == 4);
  CHECK(make_group("sym:3").order() == 6);
  CHECK(make_group("dihedral:3").order() == 6);
  CHECK_THROWS_AS(make_group("foo:3"), error);
}

TEST_CASE("broken explicit table is rejected naming a triple") {
  // associativity broken: start from Z/3, corrupt one entry
  std::vector<std::vector<int>> t = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  t[1][1] = 1;
  CHECK_THROWS_WITH_AS(FiniteGroup::from_table("bad", t),
                       doctest::Contains("associativity"), error);
  // non-identity first element
  std::vector<std::vector<int>> t2 = {{1, 0}, {0, 1}};
  CHECK_THROWS_AS(FiniteGroup::from_table("bad2", t2), error);
}

TEST_CASE("subgroup closure") {
  auto s3 = FiniteGroup::symmetric(3);
  // order-2 subgroup from a transposition: oracle = scan for an involution
  int transposition = -1;
  for (int x = 1; x < 6; ++x)
    if (s3.elem_order(x) == 2) {
      transposition = x;
      break;
    }
  auto h = subgroup_closure(s3, {transposition});
  CHECK(h.size() == 2);
  CHECK(is_subgroup(s3, h));

  CHECK(subgroup_closure(s3, {}) == Subgroup{0});

  auto z4 = FiniteGroup::cyclic(4);
  CHECK(subgroup_closure(z4, {2}) == Subgroup{0, 2});
}

TEST_CASE("double cosets partition the group") {
  auto s3 = FiniteGroup::symmetric(3);
  int invo = -1, rot = -1;
  for (int x = 1; x < 6; ++x) {
    if (invo < 0 && s3.elem_order(x) == 2) invo = x;
    if (rot < 0 && s3.elem_order(x) == 3) rot = x;
  }
  auto s = subgroup_closure(s3, {invo});
  auto t = subgroup_closure(s3, {rot});
  auto blocks = double_cosets(s3, s, t);
  CHECK(blocks.size() == 1);  // |SgT| = 2*3 = 6 covers S3

  auto z4 = FiniteGroup::cyclic(4);
  auto a = subgroup_closure(z4, {2});
  CHECK(double_cosets(z4, a, a).size() == 2);

  auto triv = trivial_subgroup();
  CHECK(double_cosets(s3, triv, triv).size() == 6);

  // partition + size formula |SgT| = |S||T|/|S camp gTg^-1|
  for (auto& g : {s3, FiniteGroup::dihedral(4)}) {
    for (auto& sub1 : {subgroup_closure(g, {1}), subgroup_closure(g, {2, 3})}) {
      for (auto& sub2 : {subgroup_closure(g, {g.order() - 1}), trivial_subgroup()}) {
        auto bl = double_cosets(g, sub1, sub2);
        std::set<int> all;
        size_t total = 0;
        for (auto& b : bl) {
          total += b.size();
          all.insert(b.begin(), b.end());
          int rep = b[0];
          auto conj = conjugate_subgroup(g, sub2, rep);
          auto meet = subgroup_intersection(sub1, conj);
          CHECK(b.size() == sub1.size() * sub2.size() / meet.size());
        }
        CHECK(total == (size_t)g.order());
        CHECK(all.size() == (size_t)g.order());
      }
    }
  }
}

TEST_CASE("quotient group") {
  auto s3 = FiniteGroup::symmetric(3);
  int rot = -1, invo = -1;
  for (int x = 1; x < 6; ++x) {
    if (rot < 0 && s3.elem_order(x) == 3) rot = x;
    if (invo < 0 && s3.elem_order(x) == 2) invo = x;
  }
  auto a3 = subgroup_closure(s3, {rot});
  auto q = quotient_group(s3, a3);
  CHECK(q.quotient.order() == 2);
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y)
      CHECK(q.quotient.mul(q.proj[x], q.proj[y]) == q.proj[s3.mul(x, y)]);

  auto qq = quotient_group(s3, trivial_subgroup());
  CHECK(qq.quotient.order() == 6);

  auto bad = subgroup_closure(s3, {invo});
  CHECK_THROWS_WITH_AS(quotient_group(s3, bad), doctest::Contains("normal"),
                       error);
}

TEST_CASE("a3 and theta") {
  auto r = a3_theta(FiniteGroup::cyclic(2));
  CHECK(!r.a3.has_value());
  CHECK(r.theta_num == 1);
  CHECK(r.theta_den == 1);

  r = a3_theta(FiniteGroup::symmetric(3));
  CHECK(r.a3 == 3);
  CHECK(r.theta_num == 3);
  CHECK(r.theta_den == 1);

  r = a3_theta(FiniteGroup::cyclic(4));
  CHECK(r.a3 == 4);
  CHECK(r.theta_num == 4);
  CHECK(r.theta_den == 2);

  // theta in [1,3] across a small zoo
  for (auto g : {FiniteGroup::cyclic(1), FiniteGroup::cyclic(7),
                 FiniteGroup::dihedral(4), FiniteGroup::symmetric(4),
                 FiniteGroup::dihedral(2)}) {
    auto t = a3_theta(g);
    CHECK(t.theta_num >= t.theta_den);       // theta >= 1
    CHECK(t.theta_num <= 3 * t.theta_den);   // theta <= 3
  }
  // Klein group: minimal subgroup of order >= 3 is the whole group
  CHECK(a3_theta(FiniteGroup::dihedral(2)).a3 == 4);
}

TEST_CASE("normality witness and helpers") {
  auto d4 = FiniteGroup::dihedral(4);
  auto center = subgroup_closure(d4, {2});  // r^2
  CHECK(is_normal(d4, center));
  CHECK(d4.is_central(2));
  auto refl = subgroup_closure(d4, {4});
  std::pair<int, int> w;
  if (!is_normal(d4, refl, &w)) {
    CHECK(!subgroup_contains(refl, d4.conj(w.first, w.second)));
  }
  auto gens = subgroup_generators(d4, full_subgroup(d4));
  CHECK(subgroup_closure(d4, gens) == full_subgroup(d4));
}
