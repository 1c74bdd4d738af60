#include <algorithm>
#include <random>
#include <set>

#include "cantor/tower.hpp"
#include "doctest.h"

using namespace cantor;

namespace {

IntMat mat2(Int a, Int b, Int c, Int d) { return IntMat(2, 2, {a, b, c, d}); }

Tower fib(int levels) { return Tower::build(sturmian_spec({Int(1)}), levels); }

}  // namespace

TEST_CASE("level-one normalization") {
  Tower t = fib(1);
  CHECK(t.levels() == 1);
  CHECK(t.C(1) == 2);
  CHECK((t.matrix(1) == IntMat(2, 1, {Int(1), Int(1)})));
  CHECK((t.heights(1) == std::vector<Int>{1, 1}));
  CHECK_THROWS_AS(t.matrix(2), Error);
  CHECK_THROWS_AS(t.order(1, 1), Error);
}

TEST_CASE("golden tower composes to positivity") {
  Tower t = fib(4);
  CHECK(t.levels() == 4);
  for (int n = 2; n <= 4; ++n) CHECK((t.matrix(n) == mat2(2, 1, 1, 1)));
  CHECK((t.heights(2) == std::vector<Int>{3, 2}));
  CHECK((t.heights(3) == std::vector<Int>{8, 5}));
  CHECK((t.heights(4) == std::vector<Int>{21, 13}));
  CHECK((t.composition().window == std::vector<int>{2, 2, 2}));
  CHECK((t.product(3, 1) == mat2(5, 3, 3, 2)));

  CHECK(t.continuation() == Tower::Continuation::RepeatMatrix);
  CHECK(t.uniform_orders());
  REQUIRE(t.stationary_matrix().has_value());
  CHECK((*t.stationary_matrix() == mat2(2, 1, 1, 1)));
  CHECK(!t.is_scalar());

  REQUIRE(t.declared_angle().has_value());
  CHECK((*t.declared_angle() == parse_real("(-1+sqrt(5))/2")));
}

TEST_CASE("golden visit orders") {
  Tower t = fib(3);
  CHECK((t.order(2, 1) == std::vector<int>{1, 2, 1}));
  CHECK((t.order(2, 2) == std::vector<int>{1, 2}));
  CHECK((t.order(3, 1) == std::vector<int>{1, 2, 1}));

  SuffixSet s = t.suffix_set(1);
  CHECK(s.level == 1);
  REQUIRE(s.per_vertex.size() == 2);
  CHECK((s.per_vertex[0] ==
         std::vector<std::vector<Int>>{{2, 1}, {1, 1}, {1, 0}, {0, 0}}));
  CHECK((s.per_vertex[1] == std::vector<std::vector<Int>>{{1, 1}, {0, 1}, {0, 0}}));
}

TEST_CASE("height and product identities") {
  Tower t = fib(9);
  std::mt19937 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + int(rng() % 8);
    int m = 1 + int(rng() % (n - 1));
    IntMat p = t.product(n, m);
    CHECK((p.mul_vec(t.heights(m)) == t.heights(n)));
    if (n - m >= 2) {
      int k = m + 1 + int(rng() % (n - m - 1));
      CHECK((t.product(n, k) * t.product(k, m) == p));
    }
  }
}

TEST_CASE("odometer towers cycle their bases") {
  Tower t = Tower::build(odometer_spec({Int(2), Int(3)}), 5);
  CHECK(t.levels() == 5);
  CHECK(t.is_scalar());
  CHECK((t.matrix(2) == IntMat(1, 1, {Int(2)})));
  CHECK((t.matrix(3) == IntMat(1, 1, {Int(3)})));
  CHECK((t.matrix(4) == IntMat(1, 1, {Int(2)})));
  CHECK((t.heights(5) == std::vector<Int>{36}));
  CHECK((t.composition().window == std::vector<int>{1, 1, 1, 1}));

  CHECK(t.continuation() == Tower::Continuation::CycleMatrices);
  CHECK(!t.uniform_orders());
  CHECK(!t.stationary_matrix().has_value());
  CHECK(t.continuation_state(1) == 0);
  CHECK(t.continuation_state(2) == 1);
  CHECK(t.continuation_state(3) == 0);
  auto [m0, s0] = t.continuation_next(0);
  CHECK((m0 == IntMat(1, 1, {Int(2)})));
  CHECK(s0 == 1);
  auto [m1, s1] = t.continuation_next(1);
  CHECK((m1 == IntMat(1, 1, {Int(3)})));
  CHECK(s1 == 0);
}

TEST_CASE("continuation matches the built sequence") {
  for (const DiagramSpec& spec :
       {sturmian_spec({Int(1)}), sturmian_spec({Int(1), Int(2)}),
        odometer_spec({Int(2), Int(5), Int(3)})}) {
    Tower t = Tower::build(spec, 7);
    int state = t.continuation_state(1);
    for (int n = 2; n <= t.levels(); ++n) {
      auto [m, next] = t.continuation_next(state);
      CHECK((m == t.matrix(n)));
      CHECK(next == t.continuation_state(n));
      state = next;
    }
  }
}

TEST_CASE("alternating sturmian block") {
  Tower t = Tower::build(sturmian_spec({Int(1), Int(2)}), 4);
  CHECK(t.continuation() == Tower::Continuation::CycleMatrices);
  for (int n = 2; n <= 4; ++n) CHECK((t.matrix(n) == mat2(3, 2, 1, 1)));
  CHECK((t.heights(2) == std::vector<Int>{5, 2}));
  CHECK((t.heights(3) == std::vector<Int>{19, 7}));
  CHECK((t.composition().window == std::vector<int>{2, 2, 2}));
  REQUIRE(t.declared_angle().has_value());
  CHECK((*t.declared_angle() == parse_real("-1+sqrt(3)")));
  // The declared angle solves x^2 + 2x - 2 = 0.
  FieldElement a = *t.declared_angle();
  CHECK((a * a + FieldElement(Rat(2)) * a - FieldElement(Rat(2))).is_zero());
}

TEST_CASE("explicit supply clamps at exhaustion") {
  DiagramSpec s;
  s.kind = DiagramSpec::Kind::Explicit;
  s.matrices = {mat2(2, 1, 1, 1), mat2(1, 1, 1, 2)};
  Tower t = Tower::build(s, 6);
  CHECK(t.levels() == 3);
  CHECK(t.continuation() == Tower::Continuation::None);
  CHECK_THROWS_AS(t.continuation_state(1), Error);
  CHECK_THROWS_AS(t.continuation_next(0), Error);

  // A final matrix that cannot reach positivity is discarded.
  DiagramSpec s2;
  s2.kind = DiagramSpec::Kind::Explicit;
  s2.matrices = {mat2(2, 1, 1, 1), mat2(1, 1, 1, 0)};
  Tower t2 = Tower::build(s2, 6);
  CHECK(t2.levels() == 2);
}

TEST_CASE("order overrides replace the default visit order") {
  DiagramSpec s;
  s.kind = DiagramSpec::Kind::Explicit;
  s.matrices = {mat2(1, 2, 2, 1)};
  VershikOrder o;
  o.level = 2;
  o.vertex = 1;
  o.sources = {2, 2, 1};
  s.orders = {o};
  Tower t = Tower::build(s, 2);
  CHECK((t.order(2, 1) == std::vector<int>{2, 2, 1}));
  CHECK((t.order(2, 2) == std::vector<int>{1, 1, 2}));

  s.orders[0].sources = {1, 1, 2};  // wrong multiplicities for row one
  CHECK_THROWS_AS(Tower::build(s, 2), Error);
}

TEST_CASE("telescoping composes matrices and orders") {
  Tower t = fib(6);
  Tower c = t.telescope({1, 3, 6});
  CHECK(c.levels() == 3);
  CHECK((c.matrix(2) == t.product(3, 1)));
  CHECK((c.matrix(3) == t.product(6, 3)));
  CHECK((c.heights(2) == t.heights(3)));
  CHECK((c.heights(3) == t.heights(6)));
  CHECK(c.continuation() == Tower::Continuation::None);
  CHECK(!c.uniform_orders());
  // Composed order of the new level 2 keeps the per-vertex multiset.
  for (int l = 1; l <= 2; ++l) {
    const auto& ord = c.order(2, l);
    std::vector<Int> count(2, Int(0));
    for (int e : ord) count[size_t(e - 1)] += 1;
    CHECK((count[0] == c.matrix(2)(l - 1, 0)));
    CHECK((count[1] == c.matrix(2)(l - 1, 1)));
  }
  // Entrance times are preserved across telescoping at matching levels.
  for (const TowerPath& p : enumerate_paths(c, 2)) {
    CHECK((c.entrance_time(p) >= 0));
  }
  CHECK_THROWS_AS(t.telescope({2, 4}), Error);
  CHECK_THROWS_AS(t.telescope({1, 4, 4}), Error);
  CHECK_THROWS_AS(t.telescope({1, 9}), Error);
}

TEST_CASE("entrance times of scalar towers read off digits") {
  Tower t = Tower::build(odometer_spec({Int(2)}), 3);
  TowerPath p;
  p.level = 3;
  p.top_vertex = 1;
  p.positions = {2, 2};
  CHECK((t.entrance_time(p) == 1));
  p.positions = {1, 1};
  CHECK((t.entrance_time(p) == 0));
  p.positions = {2, 1};
  CHECK((t.entrance_time(p) == 3));
  p.positions = {1, 2};
  CHECK((t.entrance_time(p) == 2));
}

TEST_CASE("entrance time oracles on the golden tower") {
  Tower t = fib(3);
  TowerPath p;
  p.level = 2;
  p.top_vertex = 1;
  p.positions = {3};
  CHECK((t.entrance_time(p) == 1));
  p.positions = {1};
  CHECK((t.entrance_time(p) == 0));

  p.level = 3;
  p.positions = {1, 2};
  CHECK((t.entrance_time(p) == 5));
}

TEST_CASE("entrance times sweep each tower exactly once") {
  for (int level : {2, 3}) {
    Tower t = fib(4);
    std::vector<std::set<Int>> seen(2);
    for (const TowerPath& p : enumerate_paths(t, level)) {
      bool fresh = seen[size_t(p.top_vertex - 1)].insert(t.entrance_time(p)).second;
      CHECK(fresh);
    }
    for (int l = 1; l <= 2; ++l) {
      const Int& h = t.heights(level)[size_t(l - 1)];
      CHECK((Int(seen[size_t(l - 1)].size()) == h));
      CHECK((*seen[size_t(l - 1)].rbegin() == h - 1));
      CHECK((*seen[size_t(l - 1)].begin() == 0));
    }
  }
}

TEST_CASE("path enumeration covers every cylinder") {
  Tower t = fib(3);
  auto paths = enumerate_paths(t, 3);
  CHECK(paths.size() == 13);  // total level-3 height mass
  int top1 = 0;
  for (const auto& p : paths) top1 += p.top_vertex == 1 ? 1 : 0;
  CHECK(top1 == 8);
  // Path validation errors.
  TowerPath bad;
  bad.level = 3;
  bad.top_vertex = 3;
  bad.positions = {1, 1};
  CHECK_THROWS_AS(t.entrance_time(bad), Error);
  bad.top_vertex = 1;
  bad.positions = {1};
  CHECK_THROWS_AS(t.entrance_time(bad), Error);
  bad.positions = {9, 1};
  CHECK_THROWS_AS(t.entrance_time(bad), Error);
}

TEST_CASE("spec serialization round trips") {
  DiagramSpec s = sturmian_spec({Int(1), Int(2)});
  DiagramSpec r = DiagramSpec::from_json_text(s.to_json_text());
  CHECK(r.kind == DiagramSpec::Kind::Sturmian);
  CHECK((r.cf == s.cf));
  CHECK(r.name == s.name);
  REQUIRE(r.declared_angle.has_value());
  CHECK((*r.declared_angle == *s.declared_angle));

  DiagramSpec e;
  e.kind = DiagramSpec::Kind::Explicit;
  e.matrices = {mat2(1, 2, 2, 1), mat2(3, 1, 1, 1)};
  VershikOrder o;
  o.level = 2;
  o.vertex = 2;
  o.sources = {2, 1, 1};
  e.orders = {o};
  e.name = "demo";
  DiagramSpec e2 = DiagramSpec::from_json_text(e.to_json_text());
  CHECK(e2.kind == DiagramSpec::Kind::Explicit);
  REQUIRE(e2.matrices.size() == 2);
  CHECK((e2.matrices[0] == e.matrices[0]));
  CHECK((e2.matrices[1] == e.matrices[1]));
  REQUIRE(e2.orders.size() == 1);
  CHECK(e2.orders[0].level == 2);
  CHECK(e2.orders[0].vertex == 2);
  CHECK((e2.orders[0].sources == o.sources));
  CHECK(e2.name == "demo");

  CHECK_THROWS_AS(DiagramSpec::from_json_text("{"), Error);
  CHECK_THROWS_AS(DiagramSpec::from_json_text("{\"kind\":\"nope\"}"), Error);
  CHECK_THROWS_AS(DiagramSpec::from_json_text("{\"kind\":\"stationary\"}"), Error);
}

TEST_CASE("build validation") {
  DiagramSpec s;
  s.kind = DiagramSpec::Kind::Stationary;
  s.matrix = IntMat(2, 1, {Int(1), Int(1)});
  CHECK_THROWS_AS(Tower::build(s, 3), Error);  // not square

  s.matrix = mat2(1, 1, 0, 0);
  CHECK_THROWS_AS(Tower::build(s, 3), Error);  // zero row

  CHECK_THROWS_AS(odometer_spec({Int(1)}), Error);
  CHECK_THROWS_AS(sturmian_spec({Int(0)}), Error);
  CHECK_THROWS_AS(sturmian_spec({}), Error);

  BuildOptions tight;
  tight.composition_bound = 1;
  CHECK_THROWS_AS(Tower::build(sturmian_spec({Int(1)}), 3, tight), Error);
  CHECK_THROWS_AS(Tower::build(sturmian_spec({Int(1)}), 0), Error);
}
