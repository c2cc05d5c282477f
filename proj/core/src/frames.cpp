#include "qrf/frames.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace qrf {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double Frame::element_weight() const {
  if (group().is_finite()) return volume / group().finite_group().order();
  return volume;
}

ResolutionReport resolution_check(const UnitaryRep& rep, const CVector& seed,
                                  const Tolerance& tol) {
  int n = rep.dim();
  ResolutionReport out;
  const IsotypicDecomposition& dec = rep.decomposition();
  double check_tol = std::max(1e-8, 10 * tol.abs_tol);
  for (const auto& b : dec.blocks) {
    BlockDiagnosis d;
    d.label = b.label;
    d.dim_m = b.irrep_dim;
    d.dim_n = b.multiplicity;
    d.expected = std::sqrt(static_cast<double>(b.irrep_dim) / n);
    CMatrix c = b.coefficients(seed);
    Eigen::JacobiSVD<CMatrix> svd(c);
    const auto& s = svd.singularValues();
    for (Eigen::Index k = 0; k < s.size(); ++k) d.singular_values.push_back(s(k));
    if (b.multiplicity > b.irrep_dim) {
      d.ok = false;
      d.message = b.label + ": dim M=" + std::to_string(b.irrep_dim) +
                  " < dim N=" + std::to_string(b.multiplicity);
    } else {
      for (double sv : d.singular_values)
        if (std::abs(sv - d.expected) > check_tol) {
          d.ok = false;
          d.message = b.label + ": seed coefficients have singular value " + fmt(sv) +
                      ", need " + fmt(d.expected);
          break;
        }
    }
    out.ok = out.ok && d.ok;
    out.blocks.push_back(std::move(d));
  }
  // direct check of the weighted sum
  CMatrix phi = seed * seed.adjoint();
  CMatrix sum = group_average(rep, phi, AverageMode::twirl, static_cast<double>(n));
  out.residual = max_abs(sum - CMatrix::Identity(n, n));
  if (out.residual > check_tol) out.ok = false;
  if (!out.ok) {
    std::ostringstream os;
    os << "frame states do not resolve the identity (residual " << fmt(out.residual) << ")";
    for (const auto& d : out.blocks)
      if (!d.ok) os << "; block " << d.message;
    out.message = os.str();
  }
  return out;
}

Frame make_frame(const UnitaryRep& rep, const CVector& seed, const std::string& name,
                 const Tolerance& tol) {
  if (seed.size() != rep.dim()) throw FrameError("seed dimension does not match the representation");
  require_finite(seed, "frame seed");
  double nrm = seed.norm();
  if (nrm < 1e-12) throw FrameError("seed vector is zero");
  Frame f;
  f.name = name;
  f.rep = rep;
  f.seed = seed / nrm;
  f.volume = rep.dim();
  f.resolution = resolution_check(rep, f.seed, tol);
  if (!f.resolution.ok) throw ResolutionFails(f.resolution);
  f.isotropy = isotropy_group(f, tol);
  LrReport lr = lr_classify(f, tol);
  if (lr.exists) f.lr = lr.right;
  return f;
}

CVector orientation_state(const Frame& f, const GroupElement& g) { return f.orientation_state(g); }

Subgroup isotropy_group(const Frame& f, const Tolerance& tol) {
  Subgroup h;
  double ptol = std::max(1e-8, tol.abs_tol);
  if (f.group().is_finite()) {
    CMatrix p0 = f.seed * f.seed.adjoint();
    const FiniteGroup& g = f.group().finite_group();
    for (int a = 0; a < g.order(); ++a) {
      CVector v = f.orientation_state(GroupElement::finite(a));
      if (max_abs(v * v.adjoint() - p0) <= ptol) h.elements.push_back(a);
    }
    return finite_subgroup(g, h.elements);
  }
  // directions X with (1 - P) X phi = 0
  int n = f.dim();
  const auto& k = f.rep.generators();
  int na = static_cast<int>(k.size());
  CMatrix q = CMatrix::Identity(n, n) - f.seed * f.seed.adjoint();
  RMatrix stacked(2 * n, na);
  for (int a = 0; a < na; ++a) {
    CVector w = q * (k[a] * f.seed);
    stacked.col(a).head(n) = w.real();
    stacked.col(a).tail(n) = w.imag();
  }
  Eigen::JacobiSVD<RMatrix> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cut = tol.rank_cut(s.size() ? s(0) : 0.0);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  for (int c = r; c < na; ++c) h.algebra.push_back(svd.matrixV().col(c));
  h.elements = {0};
  h.discrete_part_unknown = true;
  return h;
}

CMatrix povm_effect(const Frame& f, const std::vector<int>& elements) {
  if (!f.group().is_finite()) throw FrameError("povm_effect: finite subsets need a finite group");
  int n = f.dim();
  CMatrix e = CMatrix::Zero(n, n);
  const int order = f.group().finite_group().order();
  std::vector<char> seen(order, 0);
  for (int a : elements) {
    if (a < 0 || a >= order) throw FrameError("povm_effect: element out of range");
    if (seen[a]) continue;
    seen[a] = 1;
    CVector v = f.orientation_state(GroupElement::finite(a));
    e += f.element_weight() * v * v.adjoint();
  }
  return e;
}

CMatrix povm_effect_arc(const Frame& f, double a, double b) {
  if (f.group().kind() != GroupKind::u1) throw FrameError("povm_effect_arc needs U(1)");
  if (!(b >= a) || b - a > 2 * kPi + 1e-12) throw FrameError("arc must satisfy a <= b <= a + 2 pi");
  int n = f.dim();
  // |phi(t)> = sum_q e^{i q t} P_q phi; integrate each charge pair exactly
  const auto& dec = f.rep.decomposition();
  CMatrix e = CMatrix::Zero(n, n);
  for (const auto& bq : dec.blocks)
    for (const auto& bp : dec.blocks) {
      CVector vq = bq.project(f.seed);
      CVector vp = bp.project(f.seed);
      double nq = bq.weight - bp.weight;
      cplx integral;
      if (nq == 0)
        integral = b - a;
      else
        integral = (std::polar(1.0, nq * b) - std::polar(1.0, nq * a)) / cplx(0, nq);
      e += integral * vq * vp.adjoint();
    }
  return e * (f.volume / (2 * kPi));
}

LrReport lr_classify(const Frame& f, const Tolerance& tol) {
  LrReport out;
  const IsotypicDecomposition& dec = f.rep.decomposition();
  int n = f.dim();
  for (const auto& b : dec.blocks) {
    if (b.multiplicity != b.irrep_dim) {
      out.reason = "block " + b.label + ": multiplicity " + std::to_string(b.multiplicity) +
                   " != irrep dimension " + std::to_string(b.irrep_dim);
      return out;
    }
  }
  // on block q the right action acts on the copy index by conj(W^dagger D(k) W)
  std::vector<CMatrix> ws;
  for (const auto& b : dec.blocks) {
    double s = std::sqrt(static_cast<double>(b.irrep_dim) / n);
    CMatrix w = b.coefficients(f.seed) / s;
    if (!is_unitary(w, std::max(1e-8, 10 * tol.abs_tol))) {
      out.reason = "block " + b.label + ": seed coefficients are not proportional to a unitary";
      return out;
    }
    ws.push_back(w);
  }
  auto assemble = [&](auto&& copy_op) {
    CMatrix v = CMatrix::Zero(n, n);
    for (size_t q = 0; q < dec.blocks.size(); ++q) {
      const auto& b = dec.blocks[q];
      CMatrix sigma = copy_op(q, b);
      v += b.basis * kron(sigma, CMatrix::Identity(b.irrep_dim, b.irrep_dim)) * b.basis.adjoint();
    }
    return v;
  };
  try {
    if (f.group().is_finite()) {
      std::vector<CMatrix> mats;
      for (int k = 0; k < f.group().finite_group().order(); ++k) {
        mats.push_back(assemble([&](size_t q, const IsotypicBlock& b) {
          CMatrix c0 = b.copy(0);
          CMatrix d = c0.adjoint() * f.rep.matrices()[k] * c0;
          return CMatrix((ws[q].adjoint() * d * ws[q]).conjugate());
        }));
      }
      out.right = UnitaryRep::from_matrices(f.group(), std::move(mats), tol);
    } else {
      std::vector<CMatrix> gens;
      for (size_t a = 0; a < f.rep.generators().size(); ++a) {
        gens.push_back(assemble([&](size_t q, const IsotypicBlock& b) {
          CMatrix c0 = b.copy(0);
          CMatrix ka = c0.adjoint() * f.rep.generators()[a] * c0;
          return CMatrix(-(ws[q].adjoint() * ka * ws[q]).conjugate());
        }));
      }
      out.right = UnitaryRep::from_generators(f.group(), std::move(gens), tol);
    }
  } catch (const RepError& e) {
    out.reason = std::string("right action failed validation: ") + e.what();
    out.right.reset();
    return out;
  }
  double worst = 0;
  auto samples = sample_orientations(f.group(), 8);
  for (const auto& g : samples)
    for (const auto& k : samples) {
      CVector lhs = out.right->evaluate(k) * f.orientation_state(g);
      CVector rhs = f.orientation_state(f.group().mul(g, f.group().inv(k)));
      worst = std::max(worst, (lhs - rhs).norm());
    }
  out.action_residual = worst;
  if (worst > std::max(1e-8, 10 * tol.abs_tol)) {
    out.reason = "right action does not reorient the frame states";
    out.right.reset();
    return out;
  }
  out.exists = true;
  return out;
}

CVector build_lr_seed(const std::vector<int>& block_dims) {
  int total = 0;
  for (int d : block_dims) {
    if (d < 1) throw FrameError("build_lr_seed: block dimensions must be positive");
    total += d * d;
  }
  CVector v = CVector::Zero(total);
  int offset = 0;
  for (int d : block_dims) {
    double s = std::sqrt(static_cast<double>(d) / total);
    for (int i = 0; i < d; ++i) v(offset + i * d + i) = s;
    offset += d * d;
  }
  return v;
}

CVector build_lr_seed(const UnitaryRep& rep) {
  const auto& dec = rep.decomposition();
  int n = rep.dim();
  CVector v = CVector::Zero(n);
  for (const auto& b : dec.blocks) {
    if (b.multiplicity != b.irrep_dim)
      throw FrameError("build_lr_seed: block " + b.label + " has multiplicity != dimension");
    double s = std::sqrt(static_cast<double>(b.irrep_dim) / n);
    for (int i = 0; i < b.irrep_dim; ++i) v += s * b.basis.col(i * b.irrep_dim + i);
  }
  return v;
}

bool is_regular_frame(const Frame& f) {
  if (!f.group().is_finite()) return false;
  const FiniteGroup& g = f.group().finite_group();
  if (f.dim() != g.order()) return false;
  UnitaryRep reg = regular_rep(f.group());
  for (int a = 0; a < g.order(); ++a)
    if (max_abs(reg.matrices()[a] - f.rep.matrices()[a]) > 1e-12) return false;
  return std::abs(std::abs(f.seed(g.identity())) - 1.0) < 1e-12;
}

std::vector<GroupElement> sample_orientations(const Group& g, int count) {
  std::vector<GroupElement> out;
  if (g.is_finite()) {
    int order = g.finite_group().order();
    if (order <= count) return g.elements();
    for (int k = 0; k < count; ++k) out.push_back(GroupElement::finite((k * order) / count));
    return out;
  }
  const double golden = 0.6180339887498949;
  for (int k = 0; k < count; ++k) {
    if (g.kind() == GroupKind::u1) {
      out.push_back(lie_element(g, {k == 0 ? 0.0 : 2 * kPi * std::fmod(0.1 + k * golden, 1.0)}));
    } else if (k == 0) {
      out.push_back(g.identity());
    } else {
      double t = 0.3 + 2.7 * std::fmod(k * golden, 1.0);
      double ph = 2 * kPi * std::fmod(k * 0.7548776662466927, 1.0);
      double z = 2 * std::fmod(0.25 + k * 0.5698402909980532, 1.0) - 1;
      double r = std::sqrt(1 - z * z);
      out.push_back(GroupElement::su2(t * r * std::cos(ph), t * r * std::sin(ph), t * z));
    }
  }
  return out;
}

}  // namespace qrf
