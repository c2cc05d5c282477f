#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrf {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerance {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;

  // threshold for singular values of a matrix whose largest singular value is smax
  double rank_cut(double smax) const { return abs_tol + rel_tol * smax; }

  // default tolerance, overridden by QRF_TOL when set
  static Tolerance from_env();
};

struct Subspace {
  int ambient_dim = 0;
  CMatrix basis;  // ambient_dim x dim, orthonormal columns

  int dim() const { return static_cast<int>(basis.cols()); }
  CMatrix projector() const;
  double distance(const CVector& v) const;
  bool contains(const CVector& v, double tol) const;

  static Subspace empty(int ambient);
  static Subspace whole(int ambient);
};

void require_finite(const CMatrix& m, const std::string& what);

Subspace orthonormal_range(const CMatrix& m, const Tolerance& tol = {});
Subspace joint_kernel(const std::vector<CMatrix>& ops, const Tolerance& tol = {});

enum class FixedMode { unitary, generator };

// common fixed subspace: U v = v for every U (unitary mode) or K v = 0 (generator mode)
Subspace joint_fixed_subspace(const std::vector<CMatrix>& ops, FixedMode mode,
                              const Tolerance& tol = {});

double deviation_on_subspace(const CMatrix& a, const CMatrix& b, const Subspace& s);
bool equal_on_subspace(const CMatrix& a, const CMatrix& b, const Subspace& s,
                       const Tolerance& tol = {});

// Deterministic basis of a subspace: Gram-Schmidt over the projected unit
// vectors in index order, each vector phase-fixed.
Subspace canonical_basis(const Subspace& s);

// multiply v by a phase so its first non-negligible entry is real positive
void fix_phase(CVector& v, double tol = 1e-10);

Subspace span_union(const Subspace& a, const Subspace& b, const Tolerance& tol = {});

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_all(const std::vector<CMatrix>& ms);
CVector kron_vec(const CVector& a, const CVector& b);

struct Eigh {
  RVector values;  // ascending
  CMatrix vectors;
};
Eigh eigh(const CMatrix& h);

CMatrix expi_hermitian(const CMatrix& h);  // exp(i h)
CMatrix commutator(const CMatrix& a, const CMatrix& b);

double max_abs(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol);
bool is_unitary(const CMatrix& m, double tol);
bool is_projector(const CMatrix& m, double tol);

// operator-Schmidt tail: relative distance of op on A (x) B from the nearest product operator
double product_residual(const CMatrix& op, int dim_a, int dim_b);

// index map for reordering tensor factors: out[i] is the new position of basis index i
std::vector<int> subsystem_permutation(const std::vector<int>& dims, const std::vector<int>& order);
CMatrix permutation_matrix(const std::vector<int>& perm);

CMatrix random_hermitian(int n, std::mt19937_64& rng);
CVector random_state(int n, std::mt19937_64& rng);
CMatrix random_unitary(int n, std::mt19937_64& rng);

std::string format_complex(cplx z, int digits = 6);

}  // namespace qrf
