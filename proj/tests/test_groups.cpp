#include <doctest.h>

#include "support.hpp"

#include <set>

using namespace qrf;

namespace {

void check_group_axioms(const FiniteGroup& g) {
  int n = g.order();
  for (int a = 0; a < n; ++a) {
    CHECK(g.mul(a, g.identity()) == a);
    CHECK(g.mul(g.identity(), a) == a);
    CHECK(g.mul(a, g.inv(a)) == g.identity());
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
  }
}

std::set<int> closure(const FiniteGroup& g, const std::vector<int>& gens) {
  std::set<int> seen = {g.identity()};
  bool grew = true;
  while (grew) {
    grew = false;
    for (int a : std::vector<int>(seen.begin(), seen.end()))
      for (int s : gens)
        if (seen.insert(g.mul(a, s)).second) grew = true;
  }
  return seen;
}

}  // namespace

TEST_CASE("builtin finite groups satisfy the axioms") {
  for (const char* name : {"Z2", "Z3", "Z12", "S3", "D4", "Q8"}) {
    FiniteGroup g = builtin_finite_group(name);
    check_group_axioms(g);
    CHECK(closure(g, g.generators()).size() == static_cast<size_t>(g.order()));
  }
  check_group_axioms(cyclic_group(7));
}

TEST_CASE("orders and commutativity") {
  CHECK(symmetric_group3().order() == 6);
  CHECK_FALSE(symmetric_group3().is_abelian());
  CHECK(dihedral_group4().order() == 8);
  CHECK_FALSE(dihedral_group4().is_abelian());
  CHECK(quaternion_group().order() == 8);
  CHECK_FALSE(quaternion_group().is_abelian());
  CHECK(cyclic_group(5).is_abelian());
}

TEST_CASE("quaternion relations") {
  FiniteGroup q = quaternion_group();
  int one = 0, i = 1, j = 2, k = 3, minus_one = 4;
  CHECK(q.mul(i, i) == minus_one);
  CHECK(q.mul(j, j) == minus_one);
  CHECK(q.mul(k, k) == minus_one);
  CHECK(q.mul(q.mul(i, j), k) == minus_one);
  CHECK(q.mul(i, j) == k);
  CHECK(q.identity() == one);
}

TEST_CASE("dihedral relations") {
  FiniteGroup d = dihedral_group4();
  int r = 1, s = 4;
  CHECK(d.mul(d.mul(r, r), d.mul(r, r)) == d.identity());
  CHECK(d.mul(s, s) == d.identity());
  CHECK(d.mul(d.mul(s, r), s) == d.inv(r));
}

TEST_CASE("tables that are not groups are rejected") {
  CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {1, 1}}), GroupError);
  CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}), GroupError);
  // Latin square without associativity
  CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1, 2, 3, 4},
                                           {1, 0, 3, 4, 2},
                                           {2, 4, 0, 1, 3},
                                           {3, 2, 4, 0, 1},
                                           {4, 3, 1, 2, 0}}),
                  GroupError);
  CHECK_THROWS(builtin_finite_group("Z0"));
  CHECK_THROWS(builtin_finite_group("A5"));
}

TEST_CASE("SU(2) products follow matrix multiplication") {
  Group g = Group::su2();
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    GroupElement a = lie_element(g, oracle::haar_su2(rng));
    GroupElement b = lie_element(g, oracle::haar_su2(rng));
    Eigen::Matrix2cd ab = su2_matrix(a) * su2_matrix(b);
    CHECK((su2_matrix(g.mul(a, b)) - ab).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((su2_matrix(g.inv(a)) - su2_matrix(a).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((su2_matrix(su2_from_matrix(su2_matrix(a))) - su2_matrix(a)).cwiseAbs().maxCoeff() < 1e-12);
  }
  Eigen::Matrix2cd minus = -Eigen::Matrix2cd::Identity();
  CHECK((su2_matrix(su2_from_matrix(minus)) - minus).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("SU(2) structure constants are 2 epsilon") {
  Group g = Group::su2();
  const auto& f = g.structure_constants();
  CHECK(f[0 * 9 + 1 * 3 + 2] == doctest::Approx(2.0));
  CHECK(f[1 * 9 + 0 * 3 + 2] == doctest::Approx(-2.0));
  CHECK(f[0 * 9 + 0 * 3 + 1] == doctest::Approx(0.0));
}

TEST_CASE("U(1) angles wrap") {
  Group g = Group::u1();
  GroupElement a = lie_element(g, {5.0}), b = lie_element(g, {4.0});
  GroupElement ab = g.mul(a, b);
  CHECK(ab.coords[0] >= 0);
  CHECK(ab.coords[0] < 2 * M_PI);
  CHECK(std::abs(std::remainder(ab.coords[0] - 9.0, 2 * M_PI)) < 1e-12);
  CHECK(g.equal(g.mul(a, g.inv(a)), g.identity()));
}

TEST_CASE("cosets partition the group") {
  FiniteGroup s3 = symmetric_group3();
  for (int h = 0; h < 6; ++h) {
    if (s3.mul(h, h) != s3.identity() || h == s3.identity()) continue;
    Subgroup sub = finite_subgroup(s3, {s3.identity(), h});
    for (CosetSide side : {CosetSide::left, CosetSide::right}) {
      auto cs = cosets(s3, sub, side);
      CHECK(cs.size() == 3);
      std::set<int> all;
      for (const auto& c : cs) {
        CHECK(c.size() == 2);
        all.insert(c.begin(), c.end());
      }
      CHECK(all.size() == 6);
    }
  }
  CHECK_THROWS_AS(finite_subgroup(s3, {s3.identity(), 3}), GroupError);
}
