#include "qrf/linalg.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qrf {

Tolerance Tolerance::from_env() {
  Tolerance t;
  if (const char* env = std::getenv("QRF_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && std::isfinite(v) && v > 0) {
      t.abs_tol = v;
      t.rel_tol = v;
    }
  }
  return t;
}

CMatrix Subspace::projector() const {
  if (dim() == 0) return CMatrix::Zero(ambient_dim, ambient_dim);
  return basis * basis.adjoint();
}

double Subspace::distance(const CVector& v) const {
  if (dim() == 0) return v.norm();
  CVector r = v - basis * (basis.adjoint() * v);
  return r.norm();
}

bool Subspace::contains(const CVector& v, double tol) const {
  return distance(v) <= tol * std::max(1.0, v.norm());
}

Subspace Subspace::empty(int ambient) { return {ambient, CMatrix(ambient, 0)}; }

Subspace Subspace::whole(int ambient) {
  return {ambient, CMatrix::Identity(ambient, ambient)};
}

void require_finite(const CMatrix& m, const std::string& what) {
  if (!m.allFinite()) throw LinalgError("non-finite entries in " + what);
}

Subspace orthonormal_range(const CMatrix& m, const Tolerance& tol) {
  require_finite(m, "orthonormal_range input");
  int n = static_cast<int>(m.rows());
  if (m.cols() == 0 || n == 0) return Subspace::empty(n);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double cut = tol.rank_cut(s.size() ? s(0) : 0.0);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return {n, svd.matrixU().leftCols(r)};
}

Subspace joint_kernel(const std::vector<CMatrix>& ops, const Tolerance& tol) {
  if (ops.empty()) throw LinalgError("joint_kernel: no operators");
  int n = static_cast<int>(ops.front().cols());
  Eigen::Index rows = 0;
  for (const auto& op : ops) {
    if (op.cols() != n) throw LinalgError("joint_kernel: dimension mismatch");
    require_finite(op, "joint_kernel input");
    rows += op.rows();
  }
  CMatrix stacked(rows, n);
  Eigen::Index at = 0;
  for (const auto& op : ops) {
    stacked.middleRows(at, op.rows()) = op;
    at += op.rows();
  }
  if (rows < n) {
    CMatrix padded = CMatrix::Zero(n, n);
    padded.topRows(rows) = stacked;
    stacked = padded;
  }
  Eigen::BDCSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cut = tol.rank_cut(s.size() ? s(0) : 0.0);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return {n, svd.matrixV().rightCols(n - r)};
}

Subspace joint_fixed_subspace(const std::vector<CMatrix>& ops, FixedMode mode,
                              const Tolerance& tol) {
  if (ops.empty()) throw LinalgError("joint_fixed_subspace: no operators");
  int n = static_cast<int>(ops.front().rows());
  std::vector<CMatrix> shifted;
  shifted.reserve(ops.size());
  for (const auto& op : ops) {
    if (op.rows() != n || op.cols() != n)
      throw LinalgError("joint_fixed_subspace: operators must be square and equal-sized");
    if (mode == FixedMode::unitary)
      shifted.push_back(op - CMatrix::Identity(n, n));
    else
      shifted.push_back(op);
  }
  return joint_kernel(shifted, tol);
}

double deviation_on_subspace(const CMatrix& a, const CMatrix& b, const Subspace& s) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.cols() != s.ambient_dim)
    throw LinalgError("deviation_on_subspace: dimension mismatch");
  if (s.dim() == 0) return 0.0;
  CMatrix d = (a - b) * s.basis;
  double worst = 0.0;
  for (int c = 0; c < d.cols(); ++c) worst = std::max(worst, d.col(c).norm());
  return worst;
}

bool equal_on_subspace(const CMatrix& a, const CMatrix& b, const Subspace& s,
                       const Tolerance& tol) {
  double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return deviation_on_subspace(a, b, s) <= tol.abs_tol * scale;
}

void fix_phase(CVector& v, double tol) {
  double vmax = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol * std::max(1.0, vmax)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

Subspace canonical_basis(const Subspace& s) {
  int n = s.ambient_dim;
  int k = s.dim();
  Subspace out{n, CMatrix(n, k)};
  if (k == 0) return out;
  CMatrix p = s.projector();
  int found = 0;
  auto residual_of = [&](int col) {
    CVector v = p.col(col);
    if (found > 0) {
      auto q = out.basis.leftCols(found);
      v -= q * (q.adjoint() * v);
      v -= q * (q.adjoint() * v);
    }
    return v;
  };
  for (int i = 0; i < n && found < k; ++i) {
    CVector v = residual_of(i);
    if (v.norm() > 1e-3) {
      v.normalize();
      fix_phase(v);
      out.basis.col(found++) = v;
    }
  }
  // pivoted fallback for nearly degenerate projected columns
  while (found < k) {
    int best = -1;
    double best_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      double nr = residual_of(i).norm();
      if (nr > best_norm) {
        best_norm = nr;
        best = i;
      }
    }
    if (best < 0 || best_norm < 1e-12) throw LinalgError("canonical_basis: rank deficiency");
    CVector v = residual_of(best);
    v.normalize();
    fix_phase(v);
    out.basis.col(found++) = v;
  }
  return out;
}

Subspace span_union(const Subspace& a, const Subspace& b, const Tolerance& tol) {
  if (a.ambient_dim != b.ambient_dim) throw LinalgError("span_union: ambient mismatch");
  CMatrix m(a.ambient_dim, a.dim() + b.dim());
  m << a.basis, b.basis;
  return orthonormal_range(m, tol);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix kron_all(const std::vector<CMatrix>& ms) {
  if (ms.empty()) return CMatrix::Identity(1, 1);
  CMatrix out = ms.front();
  for (size_t i = 1; i < ms.size(); ++i) out = kron(out, ms[i]);
  return out;
}

CVector kron_vec(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Eigh eigh(const CMatrix& h) {
  require_finite(h, "eigh input");
  CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) throw LinalgError("eigh: decomposition failed");
  Eigh out{es.eigenvalues(), es.eigenvectors()};
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    CVector v = out.vectors.col(c);
    fix_phase(v);
    out.vectors.col(c) = v;
  }
  return out;
}

CMatrix expi_hermitian(const CMatrix& h) {
  Eigh e = eigh(h);
  CVector ph(e.values.size());
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, e.values(i));
  return e.vectors * ph.asDiagonal() * e.vectors.adjoint();
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol * std::max(1.0, max_abs(m));
}

bool is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())) <= tol;
}

bool is_projector(const CMatrix& m, double tol) {
  return is_hermitian(m, tol) && max_abs(m * m - m) <= tol * std::max(1.0, max_abs(m));
}

double product_residual(const CMatrix& op, int dim_a, int dim_b) {
  if (op.rows() != dim_a * dim_b || op.cols() != dim_a * dim_b)
    throw LinalgError("product_residual: dimension mismatch");
  double total = op.norm();
  if (total == 0.0) return 0.0;
  // realign (ab),(a'b') -> (aa'),(bb')
  CMatrix r(dim_a * dim_a, dim_b * dim_b);
  for (int a = 0; a < dim_a; ++a)
    for (int ap = 0; ap < dim_a; ++ap)
      for (int b = 0; b < dim_b; ++b)
        for (int bp = 0; bp < dim_b; ++bp)
          r(a * dim_a + ap, b * dim_b + bp) = op(a * dim_b + b, ap * dim_b + bp);
  Eigen::BDCSVD<CMatrix> svd(r);
  const auto& s = svd.singularValues();
  double tail = 0.0;
  for (Eigen::Index k = 1; k < s.size(); ++k) tail += s(k) * s(k);
  return std::sqrt(tail) / total;
}

std::vector<int> subsystem_permutation(const std::vector<int>& dims, const std::vector<int>& order) {
  int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n) throw LinalgError("subsystem_permutation: bad order");
  int total = 1;
  for (int d : dims) total *= d;
  std::vector<int> new_dims(n);
  for (int k = 0; k < n; ++k) new_dims[k] = dims[order[k]];
  std::vector<int> perm(total);
  std::vector<int> digits(n);
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx;
    for (int k = n - 1; k >= 0; --k) {
      digits[k] = rem % dims[k];
      rem /= dims[k];
    }
    int out = 0;
    for (int k = 0; k < n; ++k) out = out * new_dims[k] + digits[order[k]];
    perm[idx] = out;
  }
  return perm;
}

CMatrix permutation_matrix(const std::vector<int>& perm) {
  int n = static_cast<int>(perm.size());
  CMatrix p = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) p(perm[i], i) = 1.0;
  return p;
}

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return 0.5 * (m + m.adjoint());
}

CVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
  return v.normalized();
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    cplx d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

std::string format_complex(cplx z, int digits) {
  double re = z.real();
  double im = z.imag();
  double eps = 0.5 * std::pow(10.0, -digits);
  if (std::abs(re) < eps) re = 0.0;
  if (std::abs(im) < eps) im = 0.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*f%c%.*fi", digits, re, im < 0 ? '-' : '+', digits,
                std::abs(im));
  return buf;
}

}  // namespace qrf
