#include <doctest.h>

#include "support.hpp"

using namespace qrf;
using testing_support::builtin;

namespace {

const char* kFinite[] = {"finite-regular:Z2", "finite-regular:Z3", "finite-mixed:Z2", "finite-mixed:Z3",
                         "finite-mixed:S3",   "finite-mixed:D4",   "finite-mixed:Q8"};

CVector ket(int n, int i) { return CVector::Unit(n, i); }

}  // namespace

TEST_CASE("finite physical projectors match the explicit group average") {
  for (const char* name : kFinite) {
    CAPTURE(name);
    auto b = builtin(name);
    CMatrix p = oracle::finite_phys_projector(b.s);
    CHECK(oracle::max_abs(b.ps.projector - p) < 1e-10);
    CHECK(b.ps.dim() == static_cast<int>(std::lround(p.trace().real())));
  }
}

TEST_CASE("U(1) physical space is spanned by the zero-charge kets") {
  auto b = builtin("u1-qubit-qubit-qutrit");
  REQUIRE(b.ps.dim() == 4);
  CMatrix expect(12, 4);
  expect << ket(12, 2), ket(12, 4), ket(12, 7), ket(12, 9);
  CHECK(oracle::max_abs(b.ps.space.basis - expect) < 1e-12);
}

TEST_CASE("embedding agrees with the index formula") {
  std::mt19937_64 rng(21);
  auto b = builtin("finite-mixed:S3");
  for (int k = 0; k < b.s.num_frames(); ++k) {
    int dr = b.s.frame(k).dim(), ds = b.s.system_dim(k);
    CMatrix a = random_hermitian(dr, rng), f = random_hermitian(ds, rng);
    CHECK(oracle::max_abs(b.s.embed(k, a, f) - oracle::embed(b.s.dims(), b.s.frame_subsystem(k), a, f)) < 1e-14);
  }
}

TEST_CASE("finite relational observables match the brute-force twirl") {
  std::mt19937_64 rng(22);
  for (const char* name : kFinite) {
    CAPTURE(name);
    auto b = builtin(name);
    int n = b.s.group().finite_group().order();
    for (int k = 0; k < b.s.num_frames(); ++k) {
      int g = static_cast<int>(rng() % n);
      CMatrix f = random_hermitian(b.s.system_dim(k), rng);
      RelObs o = relational_observable(b.s, k, GroupElement::finite(g), f);
      CHECK(oracle::max_abs(o.matrix - oracle::finite_relobs(b.s, k, g, f)) < 1e-10);
    }
  }
}

TEST_CASE("the identity observable twirls to the identity") {
  for (const char* name : {"u1-qubit-qubit-qutrit", "su2-three-spin1", "su2-lr-spinhalf", "finite-mixed:D4"}) {
    CAPTURE(name);
    auto b = builtin(name);
    auto samples = sample_orientations(b.s.group(), 4);
    for (int k = 0; k < b.s.num_frames(); ++k)
      for (const auto& g : samples) {
        int ds = b.s.system_dim(k);
        RelObs o = relational_observable(b.s, k, g, CMatrix::Identity(ds, ds));
        CHECK(oracle::max_abs(o.matrix - CMatrix::Identity(b.s.kin_dim(), b.s.kin_dim())) < 1e-9);
      }
  }
}

TEST_CASE("U(1) system projector equals the cosine-weighted average") {
  auto b = builtin("u1-qubit-qubit-qutrit");
  int a = b.s.frame_index("A");
  // charges of B (x) C
  std::vector<int> q;
  for (int cb : {1, -1})
    for (int cc : {2, 0, -2}) q.push_back(cb + cc);
  int n = 64;
  CMatrix brute = CMatrix::Zero(6, 6);
  for (int i = 0; i < n; ++i) {
    double t = 2 * M_PI * i / n;
    for (int r = 0; r < 6; ++r) brute(r, r) += 2.0 * std::cos(t) * std::exp(cplx(0, q[r] * t)) / double(n);
  }
  CMatrix pi = system_projector(b.s, b.ps, a, b.s.group().identity());
  CHECK(oracle::max_abs(pi - brute) < 1e-12);
  CHECK(std::abs(pi.trace() - 4.0) < 1e-12);
  CHECK(orientation_independent(b.s, b.ps, a).independent);
  int c = b.s.frame_index("C");
  CMatrix pc = system_projector(b.s, b.ps, c, b.s.group().identity());
  CHECK(oracle::max_abs(pc - CMatrix::Identity(4, 4)) < 1e-12);
}

TEST_CASE("system projectors are orthogonal projectors") {
  for (const char* name : {"su2-three-spin1", "su2-four-spin1", "finite-mixed:S3", "finite-regular:Z3"}) {
    CAPTURE(name);
    auto b = builtin(name);
    for (int k = 0; k < b.s.num_frames(); ++k)
      for (const auto& g : sample_orientations(b.s.group(), 5)) {
        CMatrix pi = system_projector(b.s, b.ps, k, g);
        CHECK(is_projector(pi, 1e-9));
      }
  }
  auto su2 = builtin("su2-three-spin1");
  CHECK_FALSE(orientation_independent(su2.s, su2.ps, 0).independent);
}

TEST_CASE("weak homomorphism everywhere, strong only for regular frames") {
  std::mt19937_64 rng(23);
  auto reg = builtin("finite-regular:Z3");
  auto g = GroupElement::finite(1);
  int ds = reg.s.system_dim(0);
  HomomorphismReport r = check_weak_homomorphism(reg.s, reg.ps, 0, g, random_hermitian(ds, rng), random_hermitian(ds, rng));
  CHECK(r.weak_ok);
  CHECK(r.strong_ok);
  auto spin = builtin("su2-three-spin1");
  ds = spin.s.system_dim(0);
  GroupElement h = sample_orientations(spin.s.group(), 2)[1];
  HomomorphismReport w = check_weak_homomorphism(spin.s, spin.ps, 0, h, random_hermitian(ds, rng), random_hermitian(ds, rng));
  CHECK(w.weak_ok);
  CHECK_FALSE(w.strong_ok);
  CHECK(w.strong_multiplicative > 1e-3);
}

TEST_CASE("isotropy average is idempotent and isotropy-invariant") {
  std::mt19937_64 rng(24);
  Group s3 = Group::finite(symmetric_group3());
  Subgroup h = finite_subgroup(s3.finite_group(), {0, 1});
  UnitaryRep r = tensor({rep_irrep(s3, 2), rep_irrep(s3, 2)});
  CMatrix f = random_hermitian(4, rng);
  CMatrix avg = h_average(r, f, h);
  CHECK(oracle::max_abs(h_average(r, avg, h) - avg) < 1e-12);
  for (int x : h.elements) CHECK(oracle::max_abs(r.conjugate(GroupElement::finite(x), avg) - avg) < 1e-12);
}

TEST_CASE("conditional inner products equal physical ones") {
  std::mt19937_64 rng(25);
  for (const char* name : {"su2-four-spin1", "finite-mixed:Q8", "u1-qubit-qubit-qutrit"}) {
    CAPTURE(name);
    auto b = builtin(name);
    CVector psi = testing_support::random_physical(b.ps, rng);
    CVector chi = testing_support::random_physical(b.ps, rng);
    for (int k = 0; k < b.s.num_frames(); ++k) {
      InnerProductReport ip = conditional_inner_product_check(b.s, b.ps, k, psi, chi);
      CHECK(ip.residual < 1e-9);
    }
  }
}

TEST_CASE("scenario validation") {
  Group z2 = Group::finite(cyclic_group(2));
  Group z3 = Group::finite(cyclic_group(3));
  std::vector<Subsystem> subs = {{"A", regular_rep(z2)}, {"B", regular_rep(z3)}};
  CHECK_THROWS_AS(Scenario("bad", z2, subs, {}), ScenarioError);
  std::vector<Subsystem> ok = {{"A", rep_charges(z2, {1})}, {"B", rep_trivial(z2, 1)}};
  Scenario s("odd", z2, ok, {});
  CHECK_THROWS_AS(physical_space(s), ScenarioError);
}
