#include "qrf/reductions.hpp"

#include <cmath>

namespace qrf {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_physical(const PhysicalSpace& ps, const CVector& psi) {
  if (psi.size() != ps.space.ambient_dim)
    throw ReductionError("state dimension does not match the kinematical space");
  if (ps.space.distance(psi) > 1e-8 * std::max(1.0, psi.norm()))
    throw ReductionError("state is not in the physical space");
}

int max_charge(const UnitaryRep& r) {
  int q = 0;
  for (const auto& b : r.decomposition().blocks)
    q = std::max(q, static_cast<int>(std::lround(std::abs(b.weight))));
  return q;
}

// kinematical vector of |a> (x) v in frame k's ordering
CVector from_frame_first(const Scenario& s, int k, const CVector& x) {
  const auto& perm = s.frame_first(k);
  CVector out(s.kin_dim());
  for (int idx = 0; idx < s.kin_dim(); ++idx) out(idx) = x(perm[idx]);
  return out;
}

int u1_points(const Scenario& s, int frame, int k) {
  int qr = max_charge(s.frame(frame).rep);
  int qs = max_charge(s.system_rep(frame));
  return 2 * (std::abs(k) + 2 * qr + qs) + 2;
}

}  // namespace

CVector conditional_state(const Scenario& s, int frame, const GroupElement& g, const CVector& psi) {
  if (psi.size() != s.kin_dim()) throw ReductionError("state dimension does not match");
  return s.conditioning(frame, g) * psi;
}

CVector schrodinger_reduce(const Scenario& s, const PhysicalSpace& ps, int frame,
                           const GroupElement& g, const CVector& psi) {
  require_physical(ps, psi);
  return std::sqrt(s.frame(frame).volume) * (s.conditioning(frame, g) * psi);
}

CVector schrodinger_inverse(const Scenario& s, const PhysicalSpace& ps, int frame,
                            const GroupElement& g, const CVector& psi_s) {
  if (psi_s.size() != s.system_dim(frame)) throw ReductionError("system state has the wrong size");
  CMatrix pi = system_projector(s, ps, frame, g);
  if ((pi * psi_s - psi_s).norm() > 1e-8 * std::max(1.0, psi_s.norm()))
    throw ReductionError("system state is outside the physical system space");
  CMatrix c = s.conditioning(frame, g);
  return std::sqrt(s.frame(frame).volume) * (ps.projector * (c.adjoint() * psi_s));
}

CMatrix schrodinger_matrix(const Scenario& s, const PhysicalSpace& ps, int frame,
                           const GroupElement& g) {
  return std::sqrt(s.frame(frame).volume) * (s.conditioning(frame, g) * ps.space.basis);
}

ProbabilityReport conditional_probability(const Scenario& s, const PhysicalSpace& ps, int frame,
                                          const GroupElement& g, const CMatrix& effect,
                                          const CVector& psi) {
  if (!is_hermitian(effect, 1e-8)) throw ReductionError("effect is not Hermitian");
  Eigh e = eigh(effect);
  if (e.values.size() && (e.values(0) < -1e-8 || e.values(e.values.size() - 1) > 1 + 1e-8))
    throw ReductionError("effect is not between 0 and 1");
  CVector red = schrodinger_reduce(s, ps, frame, g, psi);
  double nrm = psi.squaredNorm();
  ProbabilityReport out;
  out.reduced = red.dot(effect * red).real() / red.squaredNorm();
  RelObs f = relational_observable(s, frame, g, effect);
  out.invariant = psi.dot(f.matrix * psi).real() / nrm;
  return out;
}

ProbabilityReport multi_event_probability(const Scenario& s, const PhysicalSpace& ps, int frame,
                                          const GroupElement& g,
                                          const std::vector<std::pair<int, CMatrix>>& events,
                                          const CVector& psi) {
  const auto& rest = s.system_subsystems(frame);
  std::vector<CMatrix> parts;
  for (int r : rest) {
    int d = s.subsystems()[r].rep.dim();
    parts.push_back(CMatrix::Identity(d, d));
  }
  std::vector<char> used(rest.size(), 0);
  for (const auto& [pos, proj] : events) {
    if (pos < 0 || pos >= static_cast<int>(rest.size()))
      throw ReductionError("event position outside the frame's system");
    if (used[pos]) throw ReductionError("two events on the same subsystem");
    used[pos] = 1;
    if (proj.rows() != parts[pos].rows() || !is_projector(proj, 1e-8))
      throw ReductionError("event is not a projector of the right size");
    parts[pos] = proj;
  }
  return conditional_probability(s, ps, frame, g, kron_all(parts), psi);
}

ThetaResult solve_theta(const Frame& f, const std::optional<CVector>& ansatz, const Tolerance& tol) {
  ThetaResult out;
  double ctol = std::max(1e-8, 10 * tol.abs_tol);
  const Group& grp = f.group();
  if (grp.is_finite()) {
    int order = grp.finite_group().order();
    double w = f.element_weight();
    CMatrix phis(f.dim(), order);
    for (int a = 0; a < order; ++a) phis.col(a) = f.orientation_state(GroupElement::finite(a));
    CMatrix k = w * phis.adjoint() * phis;
    CVector n = CVector::Ones(order);
    for (int it = 1; it <= 500; ++it) {
      CVector kn = k * n;
      out.residual = (kn - n).cwiseAbs().maxCoeff();
      out.iterations = it;
      if (out.residual <= ctol) break;
      for (int a = 0; a < order; ++a)
        if (std::abs(kn(a)) > 1e-12) n(a) = kn(a) / std::abs(kn(a));
    }
    if (out.residual > ctol) {
      out.note = "phase iteration did not reach a fixed point";
      return out;
    }
    out.phases.assign(n.data(), n.data() + order);
    out.theta = w * phis * n;
    out.found = true;
    return out;
  }
  if (grp.kind() == GroupKind::u1) {
    int qmax = max_charge(f.rep);
    std::vector<int> ks = {0};
    for (int k = 1; k <= qmax; ++k) {
      ks.push_back(k);
      ks.push_back(-k);
    }
    for (int k : ks) {
      int m = 2 * (std::abs(k) + 2 * qmax) + 2;
      CMatrix phis(f.dim(), m);
      CVector n(m);
      for (int j = 0; j < m; ++j) {
        double t = 2 * kPi * j / m;
        phis.col(j) = f.orientation_state(GroupElement::angle(t));
        n(j) = std::polar(1.0, k * t);
      }
      CVector kn = (f.volume / m) * (phis.adjoint() * (phis * n));
      double res = (kn - n).cwiseAbs().maxCoeff();
      if (res <= ctol) {
        out.found = true;
        out.fourier_k = k;
        out.residual = res;
        out.theta = (f.volume / m) * phis * n;
        out.iterations = 1;
        return out;
      }
    }
    out.note = "no Fourier mode exp(i k t) satisfies the fixed-point condition";
    return out;
  }
  if (!ansatz) {
    out.note = "SU(2) theta needs an ansatz vector";
    return out;
  }
  if (ansatz->size() != f.dim()) throw ReductionError("theta ansatz has the wrong dimension");
  out.ansatz = *ansatz;
  out.theta = *ansatz;
  for (const auto& g : sample_orientations(grp, 16)) {
    double mod = std::abs(f.orientation_state(g).dot(*ansatz));
    out.residual = std::max(out.residual, std::abs(mod - 1.0));
  }
  out.residual = std::max(out.residual, std::abs(ansatz->squaredNorm() - f.volume));
  if (out.residual > ctol) {
    out.note = "ansatz overlaps are not pure phases";
    return out;
  }
  out.found = true;
  return out;
}

cplx theta_phase(const Frame& f, const ThetaResult& t, const GroupElement& g) {
  if (!t.found) throw ReductionError("theta was not found");
  switch (f.group().kind()) {
    case GroupKind::finite: return t.phases.at(g.index);
    case GroupKind::u1: return std::polar(1.0, t.fourier_k * g.coords.at(0));
    default: return f.orientation_state(g).dot(t.ansatz);
  }
}

Disentangler disentangler(const Scenario& s, int frame, const ThetaResult& theta) {
  if (!theta.found) throw ReductionError("disentangler needs a theta solution");
  const Frame& f = s.frame(frame);
  const UnitaryRep& rs = s.system_rep(frame);
  Disentangler out;
  out.matrix = CMatrix::Zero(s.kin_dim(), s.kin_dim());
  auto add = [&](const GroupElement& g, double w) {
    CVector phi = f.orientation_state(g);
    CMatrix a = theta_phase(f, theta, g) * w * phi * phi.adjoint();
    out.matrix += s.embed(frame, a, rs.evaluate(g).adjoint());
  };
  if (s.group().is_finite()) {
    for (const auto& g : s.group().elements()) add(g, f.element_weight());
    out.quadrature_points = s.group().finite_group().order();
  } else if (s.group().kind() == GroupKind::u1) {
    int m = u1_points(s, frame, theta.fourier_k);
    for (int j = 0; j < m; ++j) add(GroupElement::angle(2 * kPi * j / m), f.volume / m);
    out.quadrature_points = m;
  } else {
    throw UnsupportedError("disentangler: SU(2) frames are not supported");
  }
  return out;
}

DisentanglerReport check_disentangler(const Scenario& s, const PhysicalSpace& ps, int frame,
                                      const ThetaResult& theta, const Disentangler& t) {
  DisentanglerReport out;
  const Frame& f = s.frame(frame);
  GroupElement e = s.group().identity();
  for (int c = 0; c < ps.dim(); ++c) {
    CVector v = ps.space.basis.col(c);
    CVector target = from_frame_first(s, frame, kron_vec(theta.theta, conditional_state(s, frame, e, v)));
    out.action = std::max(out.action, (t.matrix * v - target).norm());
    out.isometry = std::max(out.isometry, (t.matrix.adjoint() * (t.matrix * v) - v).norm());
  }
  CMatrix lhs = t.matrix * ps.projector * t.matrix.adjoint();
  CMatrix rhs = s.embed(frame, theta.theta * theta.theta.adjoint() / f.volume,
                        system_projector(s, ps, frame, e));
  out.projector = max_abs(lhs - rhs);
  out.theta_norm = std::abs(theta.theta.squaredNorm() - f.volume);
  return out;
}

CVector heisenberg_reduce(const Scenario& s, const PhysicalSpace& ps, int frame,
                          const ThetaResult& theta, const Disentangler& t,
                          const GroupElement& g, const CVector& psi) {
  require_physical(ps, psi);
  const Frame& f = s.frame(frame);
  cplx n = theta_phase(f, theta, g);
  return std::sqrt(f.volume) * std::conj(n) * (s.conditioning(frame, g) * (t.matrix * psi));
}

CMatrix heisenberg_observable(const Scenario& s, const PhysicalSpace& ps, int frame,
                              const GroupElement& g, const CMatrix& f_s) {
  CMatrix pi = system_projector(s, ps, frame, s.group().identity());
  CMatrix u = s.system_rep(frame).evaluate(g);
  return pi * u.adjoint() * f_s * u * pi;
}

}  // namespace qrf
