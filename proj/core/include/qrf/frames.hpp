#pragma once

#include "qrf/groups.hpp"
#include "qrf/linalg.hpp"
#include "qrf/reps.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qrf {

struct BlockDiagnosis {
  std::string label;
  int dim_m = 0;  // irrep dimension
  int dim_n = 0;  // multiplicity
  std::vector<double> singular_values;
  double expected = 0;  // required common singular value of the seed coefficients
  bool ok = true;
  std::string message;
};

struct ResolutionReport {
  bool ok = true;
  double residual = 0;  // deviation of the weighted frame-state sum from the identity
  std::vector<BlockDiagnosis> blocks;
  std::string message;
};

class ResolutionFails : public std::runtime_error {
 public:
  explicit ResolutionFails(ResolutionReport r)
      : std::runtime_error(r.message), report(std::move(r)) {}
  ResolutionReport report;
};

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Frame {
  std::string name;
  UnitaryRep rep;
  CVector seed;
  double volume = 1;  // dim of the frame space; one orientation carries volume/|G|
  Subgroup isotropy;
  std::optional<UnitaryRep> lr;  // right action V(k)|phi(g)> = |phi(g k^-1)>
  ResolutionReport resolution;

  const Group& group() const { return rep.group(); }
  int dim() const { return rep.dim(); }
  double element_weight() const;
  CVector orientation_state(const GroupElement& g) const { return rep.evaluate(g) * seed; }
};

ResolutionReport resolution_check(const UnitaryRep& rep, const CVector& seed,
                                  const Tolerance& tol = {});

// throws ResolutionFails when the frame states do not resolve the identity
Frame make_frame(const UnitaryRep& rep, const CVector& seed, const std::string& name = "R",
                 const Tolerance& tol = {});

CVector orientation_state(const Frame& f, const GroupElement& g);
Subgroup isotropy_group(const Frame& f, const Tolerance& tol = {});

// effect of a finite subset of orientations
CMatrix povm_effect(const Frame& f, const std::vector<int>& elements);
// effect of the U(1) arc [a, b]
CMatrix povm_effect_arc(const Frame& f, double a, double b);

struct LrReport {
  bool exists = false;
  std::string reason;
  std::optional<UnitaryRep> right;
  double action_residual = 0;  // max over samples of |V(k) phi(g) - phi(g k^-1)|
};
LrReport lr_classify(const Frame& f, const Tolerance& tol = {});

// seed for the representation  (+)_q rho_q (x) 1_{d_q}, index i*d_q + c inside block q
CVector build_lr_seed(const std::vector<int>& block_dims);
// seed for a representation whose decomposition has multiplicity = dimension everywhere
CVector build_lr_seed(const UnitaryRep& rep);

bool is_regular_frame(const Frame& f);

// deterministic orientations used for property sampling
std::vector<GroupElement> sample_orientations(const Group& g, int count);

}  // namespace qrf
