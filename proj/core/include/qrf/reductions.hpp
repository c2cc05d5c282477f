#pragma once

#include "qrf/perspective.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qrf {

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (<phi(g)| (x) 1) psi without normalization
CVector conditional_state(const Scenario& s, int frame, const GroupElement& g, const CVector& psi);

// isometric reduction sqrt(volume) (<phi(g)| (x) 1) psi; psi must be physical
CVector schrodinger_reduce(const Scenario& s, const PhysicalSpace& ps, int frame,
                           const GroupElement& g, const CVector& psi);
// sqrt(volume) P (|phi(g)> (x) 1) psi_s; psi_s must lie in the range of Pi_S(g)
CVector schrodinger_inverse(const Scenario& s, const PhysicalSpace& ps, int frame,
                            const GroupElement& g, const CVector& psi_s);

// reduction written as a matrix from canonical physical coordinates to the system space
CMatrix schrodinger_matrix(const Scenario& s, const PhysicalSpace& ps, int frame,
                           const GroupElement& g);

struct ProbabilityReport {
  double reduced = 0;    // from the reduced state
  double invariant = 0;  // from the relational observable on the physical state
};

ProbabilityReport conditional_probability(const Scenario& s, const PhysicalSpace& ps, int frame,
                                          const GroupElement& g, const CMatrix& effect,
                                          const CVector& psi);

// joint event: projector on each listed position of the frame's system (indices into
// system_subsystems), identity elsewhere
ProbabilityReport multi_event_probability(const Scenario& s, const PhysicalSpace& ps, int frame,
                                          const GroupElement& g,
                                          const std::vector<std::pair<int, CMatrix>>& events,
                                          const CVector& psi);

struct ThetaResult {
  bool found = false;
  std::string note;
  std::vector<cplx> phases;  // finite: N(g) per element
  int fourier_k = 0;         // U(1): N(t) = exp(i k t)
  CVector ansatz;            // SU(2): N(g) = <phi(g)|theta>
  CVector theta;
  double residual = 0;
  int iterations = 0;
};

ThetaResult solve_theta(const Frame& f, const std::optional<CVector>& ansatz = std::nullopt,
                        const Tolerance& tol = {});
cplx theta_phase(const Frame& f, const ThetaResult& t, const GroupElement& g);

struct Disentangler {
  CMatrix matrix;  // on the kinematical space
  int quadrature_points = 0;
};

// sum_g w N(g) |phi(g)><phi(g)| (x) U_S(g)^dagger; SU(2) is unsupported
Disentangler disentangler(const Scenario& s, int frame, const ThetaResult& theta);

struct DisentanglerReport {
  double action = 0;      // T psi = |theta> (x) conditional state at e
  double isometry = 0;    // T^dagger T = 1 on the physical space
  double projector = 0;   // T P T^dagger = |theta><theta| (x) Pi_S(e) / volume
  double theta_norm = 0;  // <theta|theta> - volume
};
DisentanglerReport check_disentangler(const Scenario& s, const PhysicalSpace& ps, int frame,
                                      const ThetaResult& theta, const Disentangler& t);

// sqrt(volume) N(g)^* (<phi(g)| (x) 1) T psi
CVector heisenberg_reduce(const Scenario& s, const PhysicalSpace& ps, int frame,
                          const ThetaResult& theta, const Disentangler& t,
                          const GroupElement& g, const CVector& psi);

// Pi_S(e) U_S(g)^dagger f U_S(g) Pi_S(e)
CMatrix heisenberg_observable(const Scenario& s, const PhysicalSpace& ps, int frame,
                              const GroupElement& g, const CMatrix& f_s);

}  // namespace qrf
