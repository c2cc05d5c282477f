#include "qrf/framechange.hpp"

#include <algorithm>
#include <cmath>

namespace qrf {

namespace {

int digit(const Scenario& s, int idx, int sub) {
  auto d = s.dims();
  int stride = 1;
  for (int k = s.num_subsystems() - 1; k > sub; --k) stride *= d[k];
  return (idx / stride) % d[sub];
}

void require_regular(const Scenario& s, int frame) {
  if (!is_regular_frame(s.frame(frame)))
    throw UnsupportedError("frame " + s.frame(frame).name +
                           " is not a regular frame; relation-conditional reorientation needs "
                           "regular frames");
}

CMatrix vectorize_all(const std::vector<CMatrix>& ms) {
  if (ms.empty()) return CMatrix(0, 0);
  Eigen::Index n = ms.front().size();
  CMatrix out(n, ms.size());
  for (size_t k = 0; k < ms.size(); ++k)
    out.col(k) = Eigen::Map<const CVector>(ms[k].data(), n);
  return out;
}

// rank of the column span through the Gram matrix; the columns here are tall and few
int gram_rank(const CMatrix& x) {
  if (x.cols() == 0) return 0;
  RVector ev = eigh(x.adjoint() * x).values;
  double top = ev.maxCoeff();
  if (top <= 0) return 0;
  return static_cast<int>((ev.array() > 1e-12 * top).count());
}

}  // namespace

FrameChange frame_change(const Scenario& s, const PhysicalSpace& ps, int from,
                         const GroupElement& g_from, int to, const GroupElement& g_to) {
  FrameChange out;
  out.from = from;
  out.to = to;
  out.g_from = g_from;
  out.g_to = g_to;
  double scale = std::sqrt(s.frame(from).volume * s.frame(to).volume);
  CMatrix cf = s.conditioning(from, g_from) * ps.space.basis;
  CMatrix ct = s.conditioning(to, g_to) * ps.space.basis;
  out.matrix = scale * ct * cf.adjoint();
  out.isometry_from =
      max_abs(out.matrix.adjoint() * out.matrix - system_projector(s, ps, from, g_from));
  out.isometry_to = max_abs(out.matrix * out.matrix.adjoint() - system_projector(s, ps, to, g_to));
  return out;
}

CMatrix regular_frame_change_kernel(const Scenario& s, int from, const GroupElement& g_from, int to,
                                    const GroupElement& g_to) {
  require_regular(s, from);
  require_regular(s, to);
  int ri = s.frame_subsystem(from), rj = s.frame_subsystem(to);
  if (ri == rj) throw ScenarioError("kernel needs two distinct frames");
  const FiniteGroup& grp = s.group().finite_group();
  auto dims = s.dims();
  std::vector<int> rest;
  std::vector<UnitaryRep> rest_reps;
  for (int k = 0; k < s.num_subsystems(); ++k)
    if (k != ri && k != rj) {
      rest.push_back(k);
      rest_reps.push_back(s.subsystems()[k].rep);
    }
  int rest_dim = 1;
  for (int k : rest) rest_dim *= dims[k];
  UnitaryRep rest_rep = rest_reps.empty() ? rep_trivial(s.group(), 1) : tensor(rest_reps);
  int n = grp.order();
  // (a, rest) <- (b, rest) with a = g_j b^-1 g_i and weight U_rest(g_j b^-1)
  CMatrix kp = CMatrix::Zero(n * rest_dim, n * rest_dim);
  for (int b = 0; b < n; ++b) {
    int g = grp.mul(g_to.index, grp.inv(b));
    int a = grp.mul(g, g_from.index);
    kp.block(a * rest_dim, b * rest_dim, rest_dim, rest_dim) = rest_rep.matrices()[g];
  }
  // reorder into the system orderings of the two frames
  const auto& sys_from = s.system_subsystems(from);  // contains rj
  const auto& sys_to = s.system_subsystems(to);      // contains ri
  auto reorder = [&](const std::vector<int>& sys, int lead) {
    std::vector<int> d, order;
    for (size_t p = 0; p < sys.size(); ++p) d.push_back(dims[sys[p]]);
    for (size_t p = 0; p < sys.size(); ++p)
      if (sys[p] == lead) order.push_back(static_cast<int>(p));
    for (size_t p = 0; p < sys.size(); ++p)
      if (sys[p] != lead) order.push_back(static_cast<int>(p));
    return subsystem_permutation(d, order);
  };
  auto pin = reorder(sys_from, rj);
  auto pout = reorder(sys_to, ri);
  CMatrix k(kp.rows(), kp.cols());
  for (int c = 0; c < k.cols(); ++c)
    for (int r = 0; r < k.rows(); ++r) k(r, c) = kp(pout[r], pin[c]);
  return k;
}

RelObs reorient(const Scenario& s, int frame, const GroupElement& k, const RelObs& obs) {
  const Frame& f = s.frame(frame);
  if (!f.lr) throw UnsupportedError("frame " + f.name + " has no right action");
  if (obs.frame != frame) throw ScenarioError("reorient: observable is relative to another frame");
  RelObs out = obs;
  out.matrix = s.conjugate_frame(frame, f.lr->evaluate(k), obs.matrix);
  out.orientation = s.group().mul(obs.orientation, s.group().inv(k));
  return out;
}

RelObs relation_conditional_reorient(const Scenario& s, int frame1, const GroupElement& g1,
                                     int frame2, const GroupElement& g2, const RelObs& obs,
                                     RelCondMode mode) {
  require_regular(s, frame1);
  require_regular(s, frame2);
  if (frame1 == frame2) throw ScenarioError("relation-conditional reorientation needs two frames");
  if (obs.frame != frame1) throw ScenarioError("observable must be relative to the first frame");
  const Group& grp = s.group();
  const FiniteGroup& fg = grp.finite_group();
  int r1 = s.frame_subsystem(frame1), r2 = s.frame_subsystem(frame2);
  int n = s.kin_dim();
  std::vector<int> rel(n);
  for (int idx = 0; idx < n; ++idx)
    rel[idx] = fg.mul(fg.inv(digit(s, idx, r1)), digit(s, idx, r2));
  CMatrix out = CMatrix::Zero(n, n);
  for (int gp = 0; gp < fg.order(); ++gp) {
    CMatrix y;
    if (mode == RelCondMode::unital) {
      GroupElement k = GroupElement::finite(fg.mul(fg.mul(gp, fg.inv(g2.index)), g1.index));
      y = reorient(s, frame1, k, obs).matrix;
    } else {
      GroupElement at = GroupElement::finite(fg.mul(g2.index, fg.inv(gp)));
      y = relational_observable(s, frame1, at, obs.f_s, obs.frame_op).matrix;
    }
    for (int idx = 0; idx < n; ++idx)
      if (rel[idx] == gp) out.row(idx) = y.row(idx);
  }
  RelObs res;
  res.matrix = out;
  res.frame = frame2;
  res.orientation = g2;
  return res;
}

CMatrix place_operator(const Scenario& s, const std::vector<int>& space,
                       const std::vector<int>& support, const CMatrix& op) {
  auto dims = s.dims();
  std::vector<int> local_dims, order;
  int sup_dim = 1, rest_dim = 1;
  for (int k : space) local_dims.push_back(dims[k]);
  std::vector<int> rest;
  for (int k : support) {
    auto it = std::find(space.begin(), space.end(), k);
    if (it == space.end()) throw ScenarioError("place_operator: support outside the space");
    order.push_back(static_cast<int>(it - space.begin()));
    sup_dim *= dims[k];
  }
  for (size_t p = 0; p < space.size(); ++p)
    if (std::find(support.begin(), support.end(), space[p]) == support.end()) {
      order.push_back(static_cast<int>(p));
      rest_dim *= dims[space[p]];
    }
  if (op.rows() != sup_dim || op.cols() != sup_dim)
    throw ScenarioError("place_operator: operator has the wrong size");
  CMatrix x = kron(op, CMatrix::Identity(rest_dim, rest_dim));
  auto perm = subsystem_permutation(local_dims, order);
  CMatrix out(x.rows(), x.cols());
  for (int c = 0; c < x.cols(); ++c)
    for (int r = 0; r < x.rows(); ++r) out(r, c) = x(perm[r], perm[c]);
  return out;
}

SubsystemRelativityReport subsystem_relativity_report(const Scenario& s, const PhysicalSpace& ps,
                                                      int frame1, int frame2) {
  SubsystemRelativityReport out;
  int r1 = s.frame_subsystem(frame1), r2 = s.frame_subsystem(frame2);
  if (r1 == r2) {
    out.degenerate = true;
    out.coincide = true;
    out.commuting = true;
    out.note = "coincident frames: the algebras agree trivially";
    return out;
  }
  std::vector<int> sys;
  for (int k = 0; k < s.num_subsystems(); ++k)
    if (k != r1 && k != r2) sys.push_back(k);
  if (sys.empty()) throw ScenarioError("subsystem relativity needs a third subsystem");
  auto dims = s.dims();
  int ds = 1;
  for (int k : sys) ds *= dims[k];
  GroupElement e = s.group().identity();

  // on physical states F_f(e) acts as volume * M^dagger f M with M = C(e) B
  auto algebra = [&](int frame, const std::vector<int>& support, int dim) {
    CMatrix m = s.conditioning(frame, e) * ps.space.basis;
    double vol = s.frame(frame).volume;
    std::vector<CMatrix> mats;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        CMatrix unit = CMatrix::Zero(dim, dim);
        unit(a, b) = 1.0;
        CMatrix f = place_operator(s, s.system_subsystems(frame), support, unit);
        mats.push_back(vol * m.adjoint() * f * m);
      }
    return mats;
  };
  auto s_r1 = algebra(frame1, sys, ds);
  auto s_r2 = algebra(frame2, sys, ds);
  auto r2_r1 = algebra(frame1, {r2}, dims[r2]);

  // restricted images are multiplicative, so the units E_{a,a+-1} generating each algebra suffice
  auto generators = [](int dim) {
    std::vector<int> idx;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        if (std::abs(a - b) == 1 || dim == 1) idx.push_back(a * dim + b);
    return idx;
  };
  for (int x : generators(dims[r2]))
    for (int y : generators(ds))
      out.commutator_residual = std::max(out.commutator_residual, max_abs(commutator(r2_r1[x], s_r1[y])));
  out.commuting = out.commutator_residual <= 1e-8;

  CMatrix x1 = vectorize_all(s_r1), x2 = vectorize_all(s_r2);
  CMatrix both(x1.rows(), x1.cols() + x2.cols());
  both << x1, x2;
  out.dim_s_r1 = gram_rank(x1);
  out.dim_s_r2 = gram_rank(x2);
  out.dim_r2_r1 = gram_rank(vectorize_all(r2_r1));
  int joint = gram_rank(both);
  out.overlap_dim = out.dim_s_r1 + out.dim_s_r2 - joint;
  out.coincide = joint == out.dim_s_r1 && joint == out.dim_s_r2;
  return out;
}

}  // namespace qrf
