#include "cantor/dimgroup.hpp"
#include "doctest.h"

using namespace cantor;

namespace {

Tower fib(int levels) { return Tower::build(sturmian_spec({Int(1)}), levels); }

FieldElement golden() { return parse_real("(-1+sqrt(5))/2"); }

}  // namespace

TEST_CASE("subgroups of the reals canonicalize") {
  FieldElement a = golden();
  SubgroupOfR g = SubgroupOfR::from_elements(
      a.field(), {FieldElement(Rat(1)), a});
  CHECK((g.lattice().denominator() == 2));
  CHECK((g.lattice().int_basis() == IntMat(2, 2, {Int(1), Int(1), Int(0), Int(2)})));

  CHECK(g.contains(a));
  CHECK(g.contains(FieldElement(Rat(-7))));
  CHECK(g.contains(a * FieldElement(Rat(3)) + FieldElement(Rat(2))));
  CHECK(!g.contains(a / FieldElement(Rat(2))));
  CHECK(!g.contains(FieldElement(Rat(1, 2))));
  CHECK(!g.contains(parse_real("sqrt(2)")));

  auto combo = g.combination(a * FieldElement(Rat(2)) - FieldElement(Rat(5)));
  REQUIRE(combo.has_value());
  FieldElement rebuilt(Rat(0));
  const auto& gens = g.generators();
  for (size_t i = 0; i < gens.size(); ++i)
    rebuilt = rebuilt + FieldElement(Rat((*combo)[i])) * gens[i];
  CHECK((rebuilt == a * FieldElement(Rat(2)) - FieldElement(Rat(5))));

  CHECK_THROWS_AS(SubgroupOfR::from_elements(a.field(), {a * FieldElement(Rat(2))}),
                  Error);
  CHECK_THROWS_AS(SubgroupOfR::from_elements(
                      a.field(), {FieldElement(Rat(2)), a}),
                  Error);
}

TEST_CASE("rational eigenvalue membership by height divisibility") {
  Tower t2 = Tower::build(odometer_spec({Int(2)}), 5);
  for (int j = 1; j <= 8; ++j) {
    RationalMembership r = rational_member(t2, Int(1), Int(1) << j, 30);
    CHECK(r.status == RationalMembership::Status::MemberAtLevel);
    CHECK(r.level == j + 1);
  }
  RationalMembership nm = rational_member(t2, Int(1), Int(3), 30);
  CHECK(nm.status == RationalMembership::Status::CertifiedNonMember);
  CHECK(nm.preperiod == 1);
  CHECK(nm.period == 2);

  RationalMembership one = rational_member(t2, Int(7), Int(1), 30);
  CHECK(one.status == RationalMembership::Status::MemberAtLevel);
  CHECK(one.level == 1);

  // Reduction happens first: 2/6 is 1/3.
  RationalMembership red = rational_member(t2, Int(2), Int(6), 30);
  CHECK(red.status == RationalMembership::Status::CertifiedNonMember);
  CHECK_THROWS_AS(rational_member(t2, Int(1), Int(0), 10), Error);
}

TEST_CASE("membership scan continues past the built levels") {
  Tower t = fib(3);
  RationalMembership r = rational_member(t, Int(1), Int(2), 40);
  CHECK(r.status == RationalMembership::Status::CertifiedNonMember);
  CHECK(r.preperiod == 1);
  CHECK(r.period == 3);

  Tower deep = Tower::build(odometer_spec({Int(2)}), 3);
  RationalMembership far = rational_member(deep, Int(1), Int(1) << 9, 40);
  CHECK(far.status == RationalMembership::Status::MemberAtLevel);
  CHECK(far.level == 10);

  DiagramSpec s;
  s.kind = DiagramSpec::Kind::Explicit;
  s.matrices = {IntMat(1, 1, {Int(2)}), IntMat(1, 1, {Int(2)})};
  Tower ex = Tower::build(s, 3);
  RationalMembership unk = rational_member(ex, Int(1), Int(3), 40);
  CHECK(unk.status == RationalMembership::Status::UnknownUpTo);
  CHECK(unk.level == 3);
  RationalMembership hit = rational_member(ex, Int(1), Int(4), 40);
  CHECK(hit.status == RationalMembership::Status::MemberAtLevel);
  CHECK(hit.level == 3);
}

TEST_CASE("image subgroup of the golden tower") {
  Tower t = fib(8);
  ExactMeasure mu = ExactMeasure::compute(t);
  SubgroupOfR g = image_group(t, mu, 1);
  FieldElement a = golden();
  SubgroupOfR za = SubgroupOfR::from_elements(a.field(), {FieldElement(Rat(1)), a});
  CHECK((g.lattice() == za.lattice()));
  CHECK(g.contains(a));

  // The golden approximants stabilize immediately: level 2 gives the
  // same group again.
  SubgroupOfR g2 = image_group(t, mu, 2);
  CHECK((g2.lattice() == g.lattice()));

  // Odometer approximants grow strictly with the level.
  Tower od = Tower::build(odometer_spec({Int(2)}), 6);
  ExactMeasure omu = ExactMeasure::compute(od);
  SubgroupOfR o2 = image_group(od, omu, 2);
  SubgroupOfR o3 = image_group(od, omu, 3);
  CHECK(o3.lattice().contains(o2.lattice()));
  CHECK(!o2.lattice().contains(o3.lattice()));
  CHECK(o3.contains(FieldElement(Rat(1, 4))));
  CHECK(!o2.contains(FieldElement(Rat(1, 4))));
}

TEST_CASE("infinitesimal triviality verdicts") {
  Tower t = fib(6);
  ExactMeasure mu = ExactMeasure::compute(t);
  InfinitesimalReport rep = infinitesimal_report(t, mu);
  CHECK(rep.verdict == InfinitesimalReport::Verdict::Trivial);
  CHECK(rep.kernel_basis.rows() == 0);
  CHECK(!rep.witness.has_value());

  DiagramSpec s;
  s.kind = DiagramSpec::Kind::Stationary;
  s.matrix = IntMat(2, 2, {Int(3), Int(1), Int(1), Int(3)});
  Tower t2 = Tower::build(s, 6);
  ExactMeasure mu2 = ExactMeasure::compute(t2);
  InfinitesimalReport rep2 = infinitesimal_report(t2, mu2);
  CHECK(rep2.verdict == InfinitesimalReport::Verdict::NonTrivial);
  CHECK(rep2.kernel_basis.rows() == 1);
  REQUIRE(rep2.witness.has_value());
  const auto& w = *rep2.witness;
  REQUIRE(w.size() == 2);
  // The witness pairs to zero against the measure but survives the matrix.
  MeasureVector m1 = mu2.at_level(1);
  FieldElement pair(Rat(0));
  for (size_t k = 0; k < w.size(); ++k)
    pair = pair + m1.values[k] * FieldElement(Rat(w[k]));
  CHECK(pair.is_zero());
  CHECK((abs(w[0]) == 1));
  CHECK((w[0] + w[1] == 0));
  std::vector<Int> img = t2.product(6, 1).mul_vec(w);
  CHECK((img[0] != 0));

  // Telescoped towers have no repeating matrix to certify against.
  CHECK_THROWS_AS(infinitesimal_report(t.telescope({1, 3, 6}), mu), Error);
}

TEST_CASE("torsion of quotients of line subgroups") {
  FieldElement a = golden();
  SubgroupOfR i = SubgroupOfR::from_elements(a.field(), {FieldElement(Rat(1)), a});
  SubgroupOfR e = SubgroupOfR::from_elements(
      a.field(), {FieldElement(Rat(1)), a * FieldElement(Rat(2))});
  QuotientInvariants q = torsion_quotient(i, e);
  CHECK((q.factors == std::vector<Int>{1, 2}));
  CHECK(q.free_rank == 0);

  FieldPtr qf = NumberField::rationals();
  auto factorial_group = [&](int k) {
    Int f = 1;
    for (int j = 2; j <= k; ++j) f *= j;
    return SubgroupOfR::from_elements(
        qf, {FieldElement(Rat(1)), FieldElement(make_rat(Int(1), f))});
  };
  SubgroupOfR z = SubgroupOfR::from_elements(qf, {FieldElement(Rat(1))});
  QuotientInvariants q6 = torsion_quotient(factorial_group(6), z);
  CHECK((q6.factors == std::vector<Int>{720}));
  QuotientInvariants q3 = torsion_quotient(factorial_group(3), z);
  CHECK((q3.factors == std::vector<Int>{6}));

  // E must sit inside I.
  CHECK_THROWS_AS(torsion_quotient(z, factorial_group(3)), Error);
  // And over the same field.
  SubgroupOfR other = SubgroupOfR::from_elements(
      NumberField::sqrt_field(2), {FieldElement(Rat(1)), parse_real("sqrt(2)")});
  CHECK_THROWS_AS(torsion_quotient(i, other), Error);
}
