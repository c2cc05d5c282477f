#include <doctest.h>

#include "support.hpp"

using namespace qrf;
using testing_support::builtin;

TEST_CASE("frame changes are isometries between system spaces") {
  std::mt19937_64 rng(41);
  for (const char* name : {"u1-qubit-qubit-qutrit", "finite-regular:S3", "finite-mixed:D4"}) {
    CAPTURE(name);
    auto b = builtin(name);
    CVector psi = testing_support::random_physical(b.ps, rng);
    auto samples = sample_orientations(b.s.group(), 3);
    for (int i = 0; i < b.s.num_frames(); ++i)
      for (int j = 0; j < b.s.num_frames(); ++j) {
        FrameChange fc = frame_change(b.s, b.ps, i, samples[1], j, samples[2]);
        CHECK(fc.isometry_from < 1e-9);
        CHECK(fc.isometry_to < 1e-9);
        CVector ri = schrodinger_reduce(b.s, b.ps, i, samples[1], psi);
        CVector rj = schrodinger_reduce(b.s, b.ps, j, samples[2], psi);
        CHECK((fc.matrix * ri - rj).norm() < 1e-9);
      }
  }
}

TEST_CASE("regular frame change equals the explicit kernel") {
  for (const char* name : {"finite-regular:Z3", "finite-regular:S3"}) {
    auto b = builtin(name);
    const FiniteGroup& g = b.s.group().finite_group();
    for (int gi = 0; gi < g.order(); gi += 2)
      for (int gj = 1; gj < g.order(); gj += 2) {
        FrameChange fc = frame_change(b.s, b.ps, 0, GroupElement::finite(gi), 1, GroupElement::finite(gj));
        CMatrix k = regular_frame_change_kernel(b.s, 0, GroupElement::finite(gi), 1, GroupElement::finite(gj));
        CHECK(oracle::max_abs(fc.matrix - k) < 1e-9);
      }
  }
}

TEST_CASE("reorientation is the right action on orientations") {
  std::mt19937_64 rng(42);
  auto b = builtin("finite-regular:S3");
  const Frame& f = b.s.frame(0);
  REQUIRE(f.lr.has_value());
  const FiniteGroup& g = b.s.group().finite_group();
  CMatrix fs = random_hermitian(b.s.system_dim(0), rng);
  for (int k = 0; k < 6; ++k) {
    CHECK(oracle::max_abs(f.lr->matrices()[k] - oracle::finite_right_action(f, k)) < 1e-12);
    for (int g1 = 0; g1 < 6; ++g1) {
      RelObs o = relational_observable(b.s, 0, GroupElement::finite(g1), fs);
      RelObs moved = reorient(b.s, 0, GroupElement::finite(k), o);
      CHECK(moved.orientation.index == g.mul(g1, g.inv(k)));
      CHECK(oracle::max_abs(moved.matrix - oracle::finite_relobs(b.s, 0, g.mul(g1, g.inv(k)), fs)) < 1e-10);
    }
  }
  auto spin = builtin("su2-three-spin1");
  RelObs o = relational_observable(spin.s, 0, spin.s.group().identity(), CMatrix::Identity(9, 9));
  CHECK_THROWS_AS(reorient(spin.s, 0, spin.s.group().identity(), o), UnsupportedError);
}

TEST_CASE("relation-conditional reorientation moves observables between regular frames") {
  std::mt19937_64 rng(43);
  auto b = builtin("finite-regular:S3");
  const FiniteGroup& g = b.s.group().finite_group();
  CMatrix fs = random_hermitian(6, rng);
  for (int g1 : {0, 2, 5})
    for (int g2 : {1, 3}) {
      GroupElement a1 = GroupElement::finite(g1), a2 = GroupElement::finite(g2);
      RelObs on_s = relational_observable(b.s, 0, a1, place_operator(b.s, b.s.system_subsystems(0), {2}, fs));
      CMatrix direct = oracle::finite_relobs(b.s, 1, g2, place_operator(b.s, b.s.system_subsystems(1), {2}, fs));
      for (RelCondMode m : {RelCondMode::modified, RelCondMode::unital})
        CHECK(oracle::max_abs(relation_conditional_reorient(b.s, 0, a1, 1, a2, on_s, m).matrix - direct) < 1e-9);

      // tautological observable of R1 becomes R1 relative to R2 in the modified form
      CVector q(6);
      for (int x = 0; x < 6; ++x) q(x) = double(x * x) - 2.0;
      CMatrix qm = q.asDiagonal();
      RelObs taut = relational_observable(b.s, 0, a1, CMatrix::Identity(36, 36), qm);
      CHECK(oracle::max_abs(taut.matrix - q(g1) * CMatrix::Identity(216, 216)) < 1e-10);
      CMatrix target = oracle::finite_relobs(b.s, 1, g2, place_operator(b.s, b.s.system_subsystems(1), {0}, qm));
      CHECK(oracle::max_abs(relation_conditional_reorient(b.s, 0, a1, 1, a2, taut).matrix - target) < 1e-9);
      CHECK(oracle::max_abs(relation_conditional_reorient(b.s, 0, a1, 1, a2, taut, RelCondMode::unital).matrix -
                            taut.matrix) < 1e-9);
      (void)g;
    }
  auto mixed = builtin("finite-mixed:S3");
  RelObs o = relational_observable(mixed.s, 0, GroupElement::finite(0), CMatrix::Identity(mixed.s.system_dim(0), mixed.s.system_dim(0)));
  CHECK_THROWS_AS(relation_conditional_reorient(mixed.s, 0, GroupElement::finite(0), 1, GroupElement::finite(0), o),
                  UnsupportedError);
}

TEST_CASE("subsystem relativity for three regular frames") {
  auto b = builtin("finite-regular:S3");
  SubsystemRelativityReport r = subsystem_relativity_report(b.s, b.ps, 0, 1);
  CHECK(r.commuting);
  CHECK_FALSE(r.coincide);
  CHECK(r.dim_s_r1 == 36);
  CHECK(r.dim_s_r2 == 36);
  CHECK(r.overlap_dim < 36);
}

TEST_CASE("place_operator matches the index formula") {
  std::mt19937_64 rng(44);
  auto b = builtin("finite-mixed:Z3");
  CMatrix op = random_hermitian(2, rng);
  std::vector<int> all = {0, 1, 2};
  CMatrix placed = place_operator(b.s, all, {1}, op);
  CMatrix expect = oracle::embed(b.s.dims(), 1, op, CMatrix::Identity(6, 6));
  CHECK(oracle::max_abs(placed - expect) < 1e-14);
  CHECK_THROWS_AS(place_operator(b.s, {0, 2}, {1}, op), ScenarioError);
}
