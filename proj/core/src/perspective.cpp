#include "qrf/perspective.hpp"

#include <cmath>

namespace qrf {

Scenario::Scenario(std::string name, Group group, std::vector<Subsystem> subsystems,
                   std::vector<FrameSlot> frames, Tolerance tol)
    : name_(std::move(name)),
      group_(std::move(group)),
      tol_(tol),
      subsystems_(std::move(subsystems)),
      frames_(std::move(frames)) {
  if (subsystems_.empty()) throw ScenarioError("scenario has no subsystems");
  std::vector<UnitaryRep> reps;
  for (const auto& sub : subsystems_) {
    if (!sub.rep.group().same_as(group_))
      throw ScenarioError("subsystem " + sub.name + " carries a different group");
    kin_dim_ *= sub.rep.dim();
    reps.push_back(sub.rep);
  }
  total_ = tensor(reps);
  std::vector<int> d = dims();
  for (const auto& slot : frames_) {
    if (slot.subsystem < 0 || slot.subsystem >= num_subsystems())
      throw ScenarioError("frame " + slot.frame.name + " refers to a missing subsystem");
    const Subsystem& sub = subsystems_[slot.subsystem];
    if (slot.frame.dim() != sub.rep.dim())
      throw ScenarioError("frame " + slot.frame.name + " does not match subsystem " + sub.name);
    View v;
    std::vector<int> order = {slot.subsystem};
    std::vector<UnitaryRep> rest_reps;
    for (int k = 0; k < num_subsystems(); ++k) {
      if (k == slot.subsystem) continue;
      v.rest.push_back(k);
      order.push_back(k);
      v.rest_dim *= d[k];
      rest_reps.push_back(subsystems_[k].rep);
    }
    v.rest_rep = rest_reps.empty() ? rep_trivial(group_, 1) : tensor(rest_reps);
    v.perm = subsystem_permutation(d, order);
    views_.push_back(std::move(v));
  }
}

std::vector<int> Scenario::dims() const {
  std::vector<int> d;
  for (const auto& sub : subsystems_) d.push_back(sub.rep.dim());
  return d;
}

int Scenario::subsystem_index(const std::string& name) const {
  for (int k = 0; k < num_subsystems(); ++k)
    if (subsystems_[k].name == name) return k;
  throw ScenarioError("no subsystem named '" + name + "'");
}

int Scenario::frame_index(const std::string& name) const {
  for (int k = 0; k < num_frames(); ++k)
    if (frames_[k].frame.name == name) return k;
  throw ScenarioError("no frame named '" + name + "'");
}

CMatrix Scenario::conditioning(int k, const GroupElement& g) const {
  const View& v = views_.at(k);
  CVector phi = frame(k).orientation_state(g);
  CMatrix c = CMatrix::Zero(v.rest_dim, kin_dim_);
  for (int idx = 0; idx < kin_dim_; ++idx) {
    int p = v.perm[idx];
    c(p % v.rest_dim, idx) = std::conj(phi(p / v.rest_dim));
  }
  return c;
}

CMatrix Scenario::embed(int k, const CMatrix& a_r, const CMatrix& f_s) const {
  const View& v = views_.at(k);
  if (a_r.rows() != frame(k).dim() || a_r.cols() != frame(k).dim())
    throw ScenarioError("embed: frame operator has the wrong size");
  if (f_s.rows() != v.rest_dim || f_s.cols() != v.rest_dim)
    throw ScenarioError("embed: system operator has the wrong size");
  CMatrix x = kron(a_r, f_s);
  CMatrix out(kin_dim_, kin_dim_);
  for (int j = 0; j < kin_dim_; ++j)
    for (int i = 0; i < kin_dim_; ++i) out(i, j) = x(v.perm[i], v.perm[j]);
  return out;
}

CMatrix Scenario::conjugate_frame(int k, const CMatrix& v, const CMatrix& x) const {
  const View& view = views_.at(k);
  int dr = frame(k).dim(), ds = view.rest_dim;
  if (v.rows() != dr || v.cols() != dr) throw ScenarioError("conjugate_frame: operator has the wrong size");
  if (x.rows() != kin_dim_ || x.cols() != kin_dim_) throw ScenarioError("conjugate_frame: operand has the wrong size");
  CMatrix xf(kin_dim_, kin_dim_);
  for (int j = 0; j < kin_dim_; ++j)
    for (int i = 0; i < kin_dim_; ++i) xf(view.perm[i], view.perm[j]) = x(i, j);
  CMatrix z = CMatrix::Zero(kin_dim_, kin_dim_);
  for (int a = 0; a < dr; ++a)
    for (int c = 0; c < dr; ++c)
      if (v(a, c) != cplx(0)) z.middleRows(a * ds, ds) += v(a, c) * xf.middleRows(c * ds, ds);
  CMatrix y = CMatrix::Zero(kin_dim_, kin_dim_);
  for (int b = 0; b < dr; ++b)
    for (int d = 0; d < dr; ++d)
      if (v(b, d) != cplx(0)) y.middleCols(b * ds, ds) += std::conj(v(b, d)) * z.middleCols(d * ds, ds);
  CMatrix out(kin_dim_, kin_dim_);
  for (int j = 0; j < kin_dim_; ++j)
    for (int i = 0; i < kin_dim_; ++i) out(i, j) = y(view.perm[i], view.perm[j]);
  return out;
}

PhysicalSpace physical_space(const Scenario& s) {
  const UnitaryRep& total = s.total_rep();
  Subspace raw;
  if (s.group().is_finite()) {
    Eigh e = eigh(invariant_projector(total));
    int n = s.kin_dim();
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
      if (e.values(i) > 0.5) keep.push_back(i);
    raw = Subspace{n, CMatrix(n, keep.size())};
    for (size_t c = 0; c < keep.size(); ++c) raw.basis.col(c) = e.vectors.col(keep[c]);
  } else {
    raw = joint_fixed_subspace(total.generators(), FixedMode::generator, s.tol());
  }
  if (raw.dim() == 0) throw ScenarioError("physical space is empty: no invariant states");
  PhysicalSpace ps;
  ps.space = canonical_basis(raw);
  ps.projector = ps.space.projector();
  return ps;
}

RelObs relational_observable(const Scenario& s, int frame, const GroupElement& g,
                             const CMatrix& f_s) {
  int d = s.frame(frame).dim();
  return relational_observable(s, frame, g, f_s, CMatrix::Identity(d, d));
}

RelObs relational_observable(const Scenario& s, int frame, const GroupElement& g,
                             const CMatrix& f_s, const CMatrix& frame_op) {
  const Frame& f = s.frame(frame);
  CVector phi = f.orientation_state(g);
  CMatrix a_r = frame_op * phi * phi.adjoint();
  CMatrix x = s.embed(frame, a_r, f_s);
  RelObs out;
  out.matrix = group_average(s.total_rep(), x, AverageMode::twirl, f.volume);
  out.frame = frame;
  out.orientation = g;
  out.f_s = f_s;
  out.frame_op = frame_op;
  return out;
}

CMatrix h_average(const UnitaryRep& rep_s, const CMatrix& f_s, const Subgroup& h) {
  if (f_s.rows() != rep_s.dim() || f_s.cols() != rep_s.dim())
    throw ScenarioError("h_average: observable does not match the representation");
  if (rep_s.group().is_finite()) {
    if (h.elements.empty()) throw ScenarioError("h_average: empty subgroup");
    CMatrix acc = CMatrix::Zero(f_s.rows(), f_s.cols());
    for (int a : h.elements) acc += rep_s.conjugate(GroupElement::finite(a), f_s);
    return acc / static_cast<double>(h.elements.size());
  }
  if (h.algebra.empty()) return f_s;
  if (h.algebra.size() > 1)
    throw ScenarioError("h_average: isotropy algebras of dimension > 1 are unsupported");
  // average over the one-parameter subgroup keeps the blocks diagonal in its generator
  Eigh e = eigh(rep_s.algebra_element(h.algebra.front()));
  int n = static_cast<int>(e.values.size());
  CMatrix out = CMatrix::Zero(n, n);
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || e.values(i) - e.values(i - 1) > 1e-8) {
      CMatrix v = e.vectors.middleCols(start, i - start);
      CMatrix p = v * v.adjoint();
      out += p * f_s * p;
      start = i;
    }
  }
  return out;
}

CMatrix system_projector(const Scenario& s, const PhysicalSpace& ps, int frame,
                         const GroupElement& g) {
  CMatrix c = s.conditioning(frame, g) * ps.space.basis;
  return s.frame(frame).volume * c * c.adjoint();
}

IndependenceReport orientation_independent(const Scenario& s, const PhysicalSpace& ps, int frame) {
  IndependenceReport out;
  CMatrix p0 = system_projector(s, ps, frame, s.group().identity());
  for (const auto& g : sample_orientations(s.group(), 8))
    out.residual = std::max(out.residual, max_abs(system_projector(s, ps, frame, g) - p0));
  out.independent = out.residual <= std::max(1e-8, 10 * s.tol().abs_tol);
  return out;
}

Subspace physical_system_span(const Scenario& s, const PhysicalSpace& ps, int frame) {
  // conditional states are covariant, so the span is the invariant closure at the identity
  CMatrix c = s.conditioning(frame, s.group().identity()) * ps.space.basis;
  Subspace at_e = orthonormal_range(c, s.tol());
  return invariant_closure(s.system_rep(frame), at_e, s.tol());
}

CMatrix restrict_to_physical(const PhysicalSpace& ps, const CMatrix& op) {
  return ps.space.basis.adjoint() * op * ps.space.basis;
}

HomomorphismReport check_weak_homomorphism(const Scenario& s, const PhysicalSpace& ps, int frame,
                                           const GroupElement& g, const CMatrix& a,
                                           const CMatrix& b, double tol) {
  CMatrix pi = system_projector(s, ps, frame, g);
  CMatrix ap = pi * a * pi;
  CMatrix bp = pi * b * pi;
  auto rel = [&](const CMatrix& f) { return relational_observable(s, frame, g, f).matrix; };
  CMatrix fa = rel(ap), fb = rel(bp);
  CMatrix fab = rel(ap * bp);
  CMatrix fsum = rel(ap + bp);
  HomomorphismReport out;
  out.additive = deviation_on_subspace(fsum, fa + fb, ps.space);
  out.multiplicative = deviation_on_subspace(fab, fa * fb, ps.space);
  out.projection = deviation_on_subspace(rel(a), fa, ps.space);
  CMatrix fadj = restrict_to_physical(ps, rel(ap.adjoint()));
  out.adjoint = max_abs(fadj - restrict_to_physical(ps, fa).adjoint());
  out.strong_multiplicative = std::max(max_abs(fab - fa * fb), max_abs(rel(a) - fa));
  double scale = std::max(1.0, max_abs(a)) * std::max(1.0, max_abs(b));
  out.weak_ok = std::max({out.additive, out.multiplicative, out.projection, out.adjoint}) <= tol * scale;
  out.strong_ok = out.strong_multiplicative <= tol * scale;
  return out;
}

InnerProductReport conditional_inner_product_check(const Scenario& s, const PhysicalSpace& ps,
                                                   int frame, const CVector& psi,
                                                   const CVector& chi, double tol) {
  for (const CVector* v : {&psi, &chi})
    if (ps.space.distance(*v) > 1e-8 * std::max(1.0, v->norm()))
      throw ScenarioError("conditional_inner_product_check: state is not physical");
  InnerProductReport out;
  cplx phys = psi.dot(chi);
  double vol = s.frame(frame).volume;
  for (const auto& g : sample_orientations(s.group(), 8)) {
    CMatrix c = s.conditioning(frame, g);
    cplx cond = vol * (c * psi).dot(c * chi);
    out.residual = std::max(out.residual, std::abs(cond - phys));
  }
  out.ok = out.residual <= tol;
  return out;
}

}  // namespace qrf
