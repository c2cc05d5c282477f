#include <doctest.h>

#include "support.hpp"

using namespace qrf;

namespace {

std::vector<Group> small_groups() {
  std::vector<Group> out;
  for (const char* n : {"Z2", "Z3", "S3", "D4", "Q8"}) out.push_back(Group::finite(builtin_finite_group(n)));
  return out;
}

void check_homomorphism(const UnitaryRep& r) {
  const FiniteGroup& g = r.group().finite_group();
  for (int a = 0; a < g.order(); ++a) {
    CHECK(is_unitary(r.matrices()[a], 1e-12));
    for (int b = 0; b < g.order(); ++b)
      CHECK(oracle::max_abs(r.matrices()[a] * r.matrices()[b] - r.matrices()[g.mul(a, b)]) < 1e-12);
  }
}

}  // namespace

TEST_CASE("regular representations are homomorphisms") {
  for (const auto& g : small_groups()) {
    check_homomorphism(regular_rep(g, RegularSide::left));
    check_homomorphism(regular_rep(g, RegularSide::right));
  }
}

TEST_CASE("left and right regular representations of S3 commute") {
  Group g = Group::finite(symmetric_group3());
  UnitaryRep l = regular_rep(g, RegularSide::left), r = regular_rep(g, RegularSide::right);
  int pairs = 0;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b, ++pairs)
      CHECK(oracle::max_abs(commutator(l.matrices()[a], r.matrices()[b])) < 1e-14);
  CHECK(pairs == 36);
}

TEST_CASE("finite irreps are complete and orthogonal") {
  for (const auto& g : small_groups()) {
    const FiniteGroup& fg = g.finite_group();
    const auto& irreps = finite_irreps(fg);
    int sum_sq = 0;
    for (size_t i = 0; i < irreps.size(); ++i) {
      sum_sq += irreps[i].dim * irreps[i].dim;
      UnitaryRep r = rep_irrep(g, static_cast<int>(i));
      check_homomorphism(r);
      for (size_t j = 0; j < irreps.size(); ++j) {
        cplx ip = 0;
        for (int a = 0; a < fg.order(); ++a) ip += std::conj(irreps[i].character[a]) * irreps[j].character[a];
        CHECK(std::abs(ip / double(fg.order()) - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
    }
    CHECK(sum_sq == fg.order());
  }
  auto s3 = finite_irreps(symmetric_group3());
  REQUIRE(s3.size() == 3);
  CHECK(s3[0].dim == 1);
  CHECK(s3[1].dim == 1);
  CHECK(s3[2].dim == 2);
}

TEST_CASE("spin representations satisfy the su(2) brackets") {
  for (double j : {0.5, 1.0, 1.5, 2.0}) {
    UnitaryRep r = rep_spin(j);
    const auto& k = r.generators();
    REQUIRE(k.size() == 3);
    // [K_x, K_y] = 2 i K_z with K = 2J
    CHECK(oracle::max_abs(commutator(k[0], k[1]) - cplx(0, 2) * k[2]) < 1e-12);
    CHECK(oracle::max_abs(commutator(k[1], k[2]) - cplx(0, 2) * k[0]) < 1e-12);
    oracle::Spin sp = oracle::spin_matrices(j);
    CHECK(oracle::max_abs(k[2] - 2.0 * sp.jz) < 1e-12);
    std::mt19937_64 rng(11);
    auto c = oracle::haar_su2(rng);
    CHECK(oracle::max_abs(r.evaluate(lie_element(Group::su2(), c)) - oracle::spin_element(sp, c)) < 1e-10);
  }
}

TEST_CASE("spin 1/2 evaluates to the defining matrix") {
  std::mt19937_64 rng(12);
  UnitaryRep r = rep_spin(0.5);
  for (int t = 0; t < 5; ++t) {
    GroupElement g = lie_element(Group::su2(), oracle::haar_su2(rng));
    Eigen::Matrix2cd u = su2_matrix(g);
    CHECK(oracle::max_abs(r.evaluate(g) - CMatrix(u)) < 1e-12);
  }
}

TEST_CASE("spin 1 tensor spin 1 decomposes as 0 + 1 + 2") {
  UnitaryRep r = tensor({rep_spin(1), rep_spin(1)});
  const auto& dec = r.decomposition();
  REQUIRE(dec.blocks.size() == 3);
  int total = 0;
  for (const auto& b : dec.blocks) {
    CHECK(b.multiplicity == 1);
    total += b.irrep_dim * b.multiplicity;
    CHECK(oracle::max_abs(b.basis.adjoint() * b.basis - CMatrix::Identity(b.basis.cols(), b.basis.cols())) < 1e-10);
  }
  CHECK(total == 9);
  CHECK(dec.find("j=2") != nullptr);
  CHECK(dec.find("j=2")->irrep_dim == 5);
}

TEST_CASE("three spin-1 multiplicities") {
  UnitaryRep r = tensor({rep_spin(1), rep_spin(1), rep_spin(1)});
  const auto& dec = r.decomposition();
  std::map<std::string, int> mult;
  for (const auto& b : dec.blocks) mult[b.label] = b.multiplicity;
  CHECK(mult["j=0"] == 1);
  CHECK(mult["j=1"] == 3);
  CHECK(mult["j=2"] == 2);
  CHECK(mult["j=3"] == 1);
}

TEST_CASE("isotypic copies carry identical irrep matrices") {
  std::mt19937_64 rng(13);
  for (const auto& g : small_groups()) {
    UnitaryRep r = regular_rep(g);
    for (const auto& b : r.decomposition().blocks) {
      CHECK(b.multiplicity == b.irrep_dim);
      for (int a = 0; a < g.finite_group().order(); ++a) {
        CMatrix first = b.copy(0).adjoint() * r.matrices()[a] * b.copy(0);
        for (int c = 1; c < b.multiplicity; ++c)
          CHECK(oracle::max_abs(b.copy(c).adjoint() * r.matrices()[a] * b.copy(c) - first) < 1e-9);
      }
    }
  }
  UnitaryRep sp = tensor({rep_spin(1), rep_spin(1), rep_spin(1)});
  GroupElement h = lie_element(Group::su2(), oracle::haar_su2(rng));
  CMatrix u = sp.evaluate(h);
  for (const auto& b : sp.decomposition().blocks) {
    CMatrix first = b.copy(0).adjoint() * u * b.copy(0);
    for (int c = 1; c < b.multiplicity; ++c)
      CHECK(oracle::max_abs(b.copy(c).adjoint() * u * b.copy(c) - first) < 1e-9);
  }
}

TEST_CASE("finite twirl matches the explicit average") {
  std::mt19937_64 rng(14);
  for (const auto& g : small_groups()) {
    UnitaryRep r = tensor({regular_rep(g), rep_irrep(g, static_cast<int>(finite_irreps(g.finite_group()).size()) - 1)});
    CMatrix a = random_hermitian(r.dim(), rng);
    CMatrix brute = CMatrix::Zero(r.dim(), r.dim());
    for (const auto& u : r.matrices()) brute += u * a * u.adjoint();
    brute /= double(r.matrices().size());
    CHECK(oracle::max_abs(group_average(r, a, AverageMode::twirl) - brute) < 1e-10);
    CHECK(oracle::max_abs(group_average(r, a, AverageMode::twirl, 3.0) - 3.0 * brute) < 1e-10);
    CMatrix p = CMatrix::Zero(r.dim(), r.dim());
    for (const auto& u : r.matrices()) p += u;
    p /= double(r.matrices().size());
    CHECK(oracle::max_abs(invariant_projector(r) - p) < 1e-10);
  }
}

TEST_CASE("Lie twirls commute with the generators and fix invariants") {
  std::mt19937_64 rng(15);
  UnitaryRep r = tensor({rep_spin(1), rep_spin(0.5), rep_spin(0.5)});
  CMatrix a = random_hermitian(r.dim(), rng);
  CMatrix t = group_average(r, a, AverageMode::twirl);
  for (const auto& k : r.generators()) CHECK(oracle::max_abs(commutator(k, t)) < 1e-10);
  CHECK(oracle::max_abs(group_average(r, t, AverageMode::twirl) - t) < 1e-10);
  CHECK(std::abs(t.trace() - a.trace()) < 1e-10);

  UnitaryRep q = rep_charges(Group::u1(), {1, -1, 0, 2});
  CMatrix tq = group_average(q, a.topLeftCorner(4, 4), AverageMode::twirl);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(tq(i, j) - (i == j ? a(i, j) : cplx(0))) < 1e-12);
}

TEST_CASE("U(1) charge decomposition and invariant closure") {
  UnitaryRep q = rep_charges(Group::u1(), {1, -1, 1, 3});
  const auto& dec = q.decomposition();
  REQUIRE(dec.find("q=+1") != nullptr);
  CHECK(dec.find("q=+1")->multiplicity == 2);
  CVector v = CVector::Zero(4);
  v(0) = 1;
  v(1) = 1;
  CHECK(invariant_closure(q, v).dim() == 2);
}

TEST_CASE("intertwiner between equivalent representations") {
  Group s3 = Group::finite(symmetric_group3());
  UnitaryRep a = regular_rep(s3, RegularSide::left), b = regular_rep(s3, RegularSide::right);
  auto m = intertwiner(a, b);
  REQUIRE(m.has_value());
  for (int g = 0; g < 6; ++g) CHECK(oracle::max_abs(b.matrices()[g] * *m - *m * a.matrices()[g]) < 1e-9);
  CHECK_FALSE(intertwiner(rep_irrep(s3, 0), rep_irrep(s3, 1)).has_value());
}

TEST_CASE("invalid representations are rejected") {
  Group z2 = Group::finite(cyclic_group(2));
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1;
  CHECK_NOTHROW(UnitaryRep::from_matrices(z2, {CMatrix::Identity(2, 2), x}));
  CHECK_THROWS_AS(UnitaryRep::from_matrices(z2, {x, x}), RepError);
  CHECK_THROWS_AS(UnitaryRep::from_matrices(z2, {CMatrix::Identity(2, 2), 2.0 * x}), RepError);
  CMatrix half = CMatrix::Zero(1, 1);
  half(0, 0) = 0.5;
  CHECK_THROWS_AS(UnitaryRep::from_generators(Group::u1(), {half}), RepError);
  CHECK_THROWS_AS(rep_spin(0.3), RepError);
}

TEST_CASE("conjugate representation") {
  Group s3 = Group::finite(symmetric_group3());
  UnitaryRep r = rep_irrep(s3, 2);
  UnitaryRep c = conjugate_rep(r);
  for (int g = 0; g < 6; ++g) CHECK(oracle::max_abs(c.matrices()[g] - r.matrices()[g].conjugate()) < 1e-14);
  UnitaryRep t = tensor({r, regular_rep(s3)});
  std::mt19937_64 rng(16);
  CMatrix a = random_hermitian(t.dim(), rng);
  for (int g = 0; g < 6; ++g)
    CHECK(oracle::max_abs(t.conjugate(GroupElement::finite(g), a) - t.matrices()[g] * a * t.matrices()[g].adjoint()) < 1e-12);
}
