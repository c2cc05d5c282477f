#pragma once

// brute-force reference constructions shared by the unit and acceptance tests

#include "qrf/cli.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using namespace qrf;

inline CMatrix kron2(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline CMatrix kron_list(const std::vector<CMatrix>& ms) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& m : ms) out = kron2(out, m);
  return out;
}

// digits of a kinematical index, first subsystem most significant
inline std::vector<int> digits(int idx, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    d[k] = idx % dims[k];
    idx /= dims[k];
  }
  return d;
}

// a on subsystem `slot`, f on the remaining subsystems in their original order
inline CMatrix embed(const std::vector<int>& dims, int slot, const CMatrix& a, const CMatrix& f) {
  int n = 1;
  for (int d : dims) n *= d;
  CMatrix out(n, n);
  auto rest_index = [&](const std::vector<int>& d) {
    int r = 0;
    for (size_t k = 0; k < dims.size(); ++k)
      if (static_cast<int>(k) != slot) r = r * dims[k] + d[k];
    return r;
  };
  for (int i = 0; i < n; ++i) {
    auto di = digits(i, dims);
    for (int j = 0; j < n; ++j) {
      auto dj = digits(j, dims);
      out(i, j) = a(di[slot], dj[slot]) * f(rest_index(di), rest_index(dj));
    }
  }
  return out;
}

// total unitary of a finite-group scenario for element g, as an explicit Kronecker product
inline CMatrix finite_total(const Scenario& s, int g) {
  std::vector<CMatrix> ms;
  for (const auto& sub : s.subsystems()) ms.push_back(sub.rep.matrices()[g]);
  return kron_list(ms);
}

inline CMatrix finite_twirl(const Scenario& s, const CMatrix& a, double measure) {
  int n = s.group().finite_group().order();
  CMatrix out = CMatrix::Zero(a.rows(), a.cols());
  for (int g = 0; g < n; ++g) {
    CMatrix u = finite_total(s, g);
    out += u * a * u.adjoint();
  }
  return out * (measure / n);
}

inline CMatrix finite_phys_projector(const Scenario& s) {
  int n = s.group().finite_group().order();
  CMatrix out = CMatrix::Zero(s.kin_dim(), s.kin_dim());
  for (int g = 0; g < n; ++g) out += finite_total(s, g);
  return out / n;
}

// volume/|G| sum_h U(h) (|phi(g)><phi(g)| (x) f) U(h)^dagger
inline CMatrix finite_relobs(const Scenario& s, int frame, int g, const CMatrix& f) {
  const Frame& fr = s.frame(frame);
  CVector phi = fr.rep.matrices()[g] * fr.seed;
  CMatrix a = phi * phi.adjoint();
  return finite_twirl(s, embed(s.dims(), s.frame_subsystem(frame), a, f), fr.volume);
}

// V(k) = sum_h w |phi(h k^-1)><phi(h)|
inline CMatrix finite_right_action(const Frame& fr, int k) {
  const FiniteGroup& g = fr.group().finite_group();
  CMatrix out = CMatrix::Zero(fr.dim(), fr.dim());
  double w = fr.volume / g.order();
  for (int h = 0; h < g.order(); ++h) {
    CVector a = fr.rep.matrices()[g.mul(h, g.inv(k))] * fr.seed;
    CVector b = fr.rep.matrices()[h] * fr.seed;
    out += w * a * b.adjoint();
  }
  return out;
}

// spin-j matrices in the basis m = j ... -j
struct Spin {
  CMatrix jx, jy, jz;
};

inline Spin spin_matrices(double j) {
  int d = static_cast<int>(std::lround(2 * j)) + 1;
  CMatrix jp = CMatrix::Zero(d, d), jz = CMatrix::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    double m = j - r;
    jz(r, r) = m;
    if (r > 0) jp(r - 1, r) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  Spin s;
  s.jz = jz;
  s.jx = (jp + jp.adjoint()) / 2.0;
  s.jy = (jp - jp.adjoint()) / cplx(0, 2);
  return s;
}

// exp(i c . 2J) through the matrix exponential
inline CMatrix spin_element(const Spin& s, const std::vector<double>& c) {
  CMatrix h = 2.0 * (c[0] * s.jx + c[1] * s.jy + c[2] * s.jz);
  return CMatrix(cplx(0, 1) * h).exp();
}

// Haar-random SU(2) element as coordinates c with U = exp(i c . sigma)
inline std::vector<double> haar_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4];
  double nrm = 0;
  for (double& x : q) {
    x = n(rng);
    nrm += x * x;
  }
  nrm = std::sqrt(nrm);
  for (double& x : q) x /= nrm;
  // U = q0 + i (q1 s_x + q2 s_y + q3 s_z) = exp(i a n.sigma)
  double v = std::sqrt(q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  double a = std::atan2(v, q[0]);
  if (v < 1e-15) return {0, 0, 0};
  return {a * q[1] / v, a * q[2] / v, a * q[3] / v};
}

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace oracle

namespace testing_support {

using namespace qrf;

struct Built {
  ScenarioConfig cfg;
  Scenario s;
  PhysicalSpace ps;
};

inline Built builtin(const std::string& name) {
  Built b;
  b.cfg = load_config(name);
  b.s = build_scenario(b.cfg);
  b.ps = physical_space(b.s);
  return b;
}

inline CVector random_physical(const PhysicalSpace& ps, std::mt19937_64& rng) {
  return ps.space.basis * random_state(ps.dim(), rng);
}

}  // namespace testing_support
