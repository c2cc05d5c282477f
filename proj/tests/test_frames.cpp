#include <doctest.h>

#include "support.hpp"

using namespace qrf;

TEST_CASE("every builtin frame resolves the identity") {
  for (const auto& b : list_builtins()) {
    if (!b.expect_pass) continue;
    CAPTURE(b.name);
    ScenarioConfig cfg = load_config(b.name);
    for (const auto& spec : cfg.frames) {
      const UnitaryRep& r = cfg.subsystems[spec.subsystem].rep;
      Frame f = make_frame(r, seed_vector(cfg.group, r, spec.seed), spec.name);
      CHECK(f.resolution.ok);
      CHECK(f.resolution.residual < 1e-8);
      CHECK(f.volume == doctest::Approx(r.dim()));
    }
  }
}

TEST_CASE("multiplicity larger than irrep dimension cannot resolve the identity") {
  UnitaryRep r = rep_charges(Group::u1(), {1, 1});
  CVector seed = CVector::Ones(2) / std::sqrt(2.0);
  ResolutionReport rep = resolution_check(r, seed);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.blocks.size() == 1);
  CHECK(rep.blocks[0].dim_m == 1);
  CHECK(rep.blocks[0].dim_n == 2);
  CHECK(rep.blocks[0].message == "q=+1: dim M=1 < dim N=2");
  // the frame-state sum equals 2|+><+|, not the identity
  CHECK(rep.residual == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(make_frame(r, seed), ResolutionFails);
}

TEST_CASE("frame-state sum matches the identity by brute force") {
  Group s3 = Group::finite(symmetric_group3());
  UnitaryRep r = tensor({rep_irrep(s3, 2), rep_trivial(s3, 2)});
  Frame f = make_frame(r, build_lr_seed(r), "R");
  CMatrix sum = CMatrix::Zero(4, 4);
  for (int g = 0; g < 6; ++g) {
    CVector phi = r.matrices()[g] * f.seed;
    sum += f.volume / 6.0 * phi * phi.adjoint();
  }
  CHECK(oracle::max_abs(sum - CMatrix::Identity(4, 4)) < 1e-10);
}

TEST_CASE("U(1) frames: POVM arcs match numeric integration") {
  ScenarioConfig cfg = load_config("u1-qubit-qubit-qutrit");
  Scenario s = build_scenario(cfg);
  for (int k = 0; k < s.num_frames(); ++k) {
    const Frame& f = s.frame(k);
    double a = 0.3, b = 2.1;
    int n = 20000;
    CMatrix brute = CMatrix::Zero(f.dim(), f.dim());
    for (int i = 0; i < n; ++i) {
      double t = a + (b - a) * (i + 0.5) / n;
      CVector phi = f.orientation_state(GroupElement::angle(t));
      brute += phi * phi.adjoint();
    }
    brute *= f.volume * (b - a) / n / (2 * M_PI);
    CHECK(oracle::max_abs(povm_effect_arc(f, a, b) - brute) < 1e-7);
    CHECK(oracle::max_abs(povm_effect_arc(f, 0, 2 * M_PI) - CMatrix::Identity(f.dim(), f.dim())) < 1e-12);
  }
}

TEST_CASE("isotropy group of a finite frame") {
  Group s3 = Group::finite(symmetric_group3());
  Frame reg = make_frame(regular_rep(s3), CVector::Unit(6, 0));
  CHECK(reg.isotropy.order() == 1);
  CHECK(is_regular_frame(reg));
  UnitaryRep sign = rep_irrep(s3, 1);
  UnitaryRep two = tensor({rep_irrep(s3, 0), rep_trivial(s3, 1)});
  Frame fixed = make_frame(two, CVector::Ones(1));
  CHECK(fixed.isotropy.order() == 6);
  Frame sg = make_frame(sign, CVector::Ones(1));
  CHECK(sg.isotropy.order() == 6);  // a phase does not move the projector
  Group z4 = Group::finite(cyclic_group(4));
  Frame half = make_frame(rep_charges(z4, {0, 2}), CVector::Ones(2) / std::sqrt(2.0));
  CHECK(half.isotropy.order() == 2);
}

TEST_CASE("POVM completeness for finite frames") {
  Group d4 = Group::finite(dihedral_group4());
  Frame f = make_frame(regular_rep(d4), CVector::Unit(8, 0));
  std::vector<int> all(8);
  for (int i = 0; i < 8; ++i) all[i] = i;
  CHECK(oracle::max_abs(povm_effect(f, all) - CMatrix::Identity(8, 8)) < 1e-12);
  CMatrix half = povm_effect(f, {0, 1, 2, 3});
  CHECK(std::abs(half.trace() - 4.0) < 1e-12);
}

TEST_CASE("right action exists exactly when multiplicity equals dimension") {
  Group s3 = Group::finite(symmetric_group3());
  Frame reg = make_frame(regular_rep(s3), CVector::Unit(6, 0));
  LrReport lr = lr_classify(reg);
  REQUIRE(lr.exists);
  for (int k = 0; k < 6; ++k)
    CHECK(oracle::max_abs(lr.right->matrices()[k] - oracle::finite_right_action(reg, k)) < 1e-10);
  // V is a representation commuting with the gauge action
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      CHECK(oracle::max_abs(commutator(lr.right->matrices()[a], reg.rep.matrices()[b])) < 1e-10);
      CHECK(oracle::max_abs(lr.right->matrices()[a] * lr.right->matrices()[b] -
                             lr.right->matrices()[s3.finite_group().mul(a, b)]) < 1e-10);
    }
}

TEST_CASE("LR seeds for Lie frames") {
  UnitaryRep r = tensor({rep_spin(0.5), rep_trivial(Group::su2(), 2)});
  Frame f = make_frame(r, build_lr_seed(r), "R");
  LrReport lr = lr_classify(f);
  CHECK(lr.exists);
  CHECK(lr.action_residual < 1e-10);
  Frame spin1 = make_frame(rep_spin(1), CVector::Ones(3) / std::sqrt(3.0));
  CHECK_FALSE(lr_classify(spin1).exists);
  UnitaryRep q = rep_charges(Group::u1(), {1, -1});
  Frame fq = make_frame(q, CVector::Ones(2) / std::sqrt(2.0));
  LrReport lq = lr_classify(fq);
  CHECK(lq.exists);
  CHECK(lq.action_residual < 1e-10);
}

TEST_CASE("seeds are normalized") {
  UnitaryRep q = rep_charges(Group::u1(), {1, -1});
  Frame f = make_frame(q, CVector::Ones(2));
  CHECK(f.seed.norm() == doctest::Approx(1.0));
}

TEST_CASE("sample orientations start at the identity") {
  for (const Group& g : {Group::u1(), Group::su2(), Group::finite(quaternion_group())}) {
    auto s = sample_orientations(g, 6);
    CHECK(s.size() == 6);
    CHECK(g.equal(s[0], g.identity()));
  }
}
