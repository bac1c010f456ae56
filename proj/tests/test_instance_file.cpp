#include "doctest.h"
#include "fpcore/instance_file.hpp"

using namespace fpcore;

namespace {

const char* kPlain = R"(# a plain instance
[group]
setting = plain
factor = cyclic:2
factor = cyclic:3
free_rank = 1

[subgroup.H]
gen = f1:1 f2:1
gen = x1

[subgroup.K]
gen = f2:2 x1

[budgets]
L = 6
R = 2

[seed]
seed = 7
)";

const char* kAmalg = R"([group]
setting = amalgamated
factor = cyclic:4
factor = cyclic:4
free_rank = 0
amalgam = cyclic:2
embed = 0,2
embed = 0,2

[subgroup.H]
gen = f1:1 f2:1
)";

}  // namespace

TEST_CASE("parse and round trip") {
  auto d = parse_instance_file(kPlain);
  CHECK(d.setting == "plain");
  CHECK(d.factor_desc.size() == 2);
  CHECK(d.free_rank == 1);
  CHECK(d.gens_h.size() == 2);
  CHECK(d.gens_k.size() == 1);
  CHECK(d.budget_l == 6);
  CHECK(d.seed == 7);
  auto spec = d.to_spec();
  CHECK(spec.num_factors() == 2);
  CHECK(d.words_h(spec).size() == 2);

  auto text = format_instance_file(d);
  auto d2 = parse_instance_file(text);
  CHECK(format_instance_file(d2) == text);
  CHECK(d2.to_spec().summary() == spec.summary());
}

TEST_CASE("amalgamated instance") {
  auto d = parse_instance_file(kAmalg);
  auto spec = d.to_spec();
  CHECK(spec.amalgamated());
  CHECK(spec.a_order() == 2);
  auto text = format_instance_file(d);
  CHECK(parse_instance_file(text).to_spec().summary() == spec.summary());
}

TEST_CASE("explicit table group") {
  const char* text = R"([group]
setting = plain
factor = table:k4
table.k4 = 0,1,2,3 / 1,0,3,2 / 2,3,0,1 / 3,2,1,0
free_rank = 0
factor = cyclic:2

[subgroup.H]
gen = f1:1
)";
  auto d = parse_instance_file(text);
  auto spec = d.to_spec();
  CHECK(spec.factors[0].order() == 4);
  CHECK(spec.factors[0].name() == "k4");
}

TEST_CASE("errors carry line numbers and unknown keys are rejected") {
  CHECK_THROWS_WITH_AS(parse_instance_file("[group]\nzork = 1\n"),
                       doctest::Contains("line 2"), error);
  CHECK_THROWS_AS(parse_instance_file("[group]\nsetting = plain\n[weird]\n"),
                  error);
  CHECK_THROWS_AS(parse_instance_file("x = 1\n"), error);
  CHECK_THROWS_AS(parse_instance_file("[group]\nfactor = cyclic:2\n"),
                  error);  // missing setting
  // broken explicit table is rejected at to_spec time
  const char* bad = R"([group]
setting = plain
factor = table:bad
table.bad = 0,1 / 1,1
free_rank = 0
)";
  auto d = parse_instance_file(bad);
  CHECK_THROWS_AS(d.to_spec(), error);
}
