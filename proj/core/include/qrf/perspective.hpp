#pragma once

#include "qrf/frames.hpp"
#include "qrf/groups.hpp"
#include "qrf/linalg.hpp"
#include "qrf/reps.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qrf {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Subsystem {
  std::string name;
  UnitaryRep rep;
};

struct FrameSlot {
  Frame frame;
  int subsystem = 0;
};

// kinematical space: tensor product of the subsystems in the given order
class Scenario {
 public:
  Scenario() = default;
  Scenario(std::string name, Group group, std::vector<Subsystem> subsystems,
           std::vector<FrameSlot> frames, Tolerance tol = {});

  const std::string& name() const { return name_; }
  const Group& group() const { return group_; }
  const Tolerance& tol() const { return tol_; }
  int kin_dim() const { return kin_dim_; }
  int num_subsystems() const { return static_cast<int>(subsystems_.size()); }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::vector<int> dims() const;
  int subsystem_index(const std::string& name) const;

  int num_frames() const { return static_cast<int>(frames_.size()); }
  const Frame& frame(int k) const { return frames_.at(k).frame; }
  int frame_subsystem(int k) const { return frames_.at(k).subsystem; }
  int frame_index(const std::string& name) const;

  const UnitaryRep& total_rep() const { return total_; }

  // complement of frame k: the other subsystems in their original order
  const std::vector<int>& system_subsystems(int k) const { return views_.at(k).rest; }
  int system_dim(int k) const { return views_.at(k).rest_dim; }
  const UnitaryRep& system_rep(int k) const { return views_.at(k).rest_rep; }

  // (<phi(g)| (x) 1) reordered to act on the kinematical space: system_dim x kin_dim
  CMatrix conditioning(int k, const GroupElement& g) const;
  // (a_R (x) f_S) written on the kinematical space, for frame k's factorization
  CMatrix embed(int k, const CMatrix& a_r, const CMatrix& f_s) const;
  // (v (x) 1) x (v (x) 1)^dagger with v acting on frame k, computed block by block
  CMatrix conjugate_frame(int k, const CMatrix& v, const CMatrix& x) const;
  // kinematical index -> index in the (frame, rest) ordering
  const std::vector<int>& frame_first(int k) const { return views_.at(k).perm; }

 private:
  struct View {
    std::vector<int> rest;
    int rest_dim = 1;
    UnitaryRep rest_rep;
    std::vector<int> perm;
  };
  std::string name_;
  Group group_;
  Tolerance tol_;
  int kin_dim_ = 1;
  std::vector<Subsystem> subsystems_;
  std::vector<FrameSlot> frames_;
  UnitaryRep total_;
  std::vector<View> views_;
};

struct PhysicalSpace {
  Subspace space;  // canonical orthonormal basis
  CMatrix projector;
  int dim() const { return space.dim(); }
};

PhysicalSpace physical_space(const Scenario& s);

struct RelObs {
  CMatrix matrix;
  int frame = 0;
  GroupElement orientation;
  CMatrix f_s;       // system factor
  CMatrix frame_op;  // diagonal function of the orientation, identity unless tautological
};

// volume * twirl(|phi(g)><phi(g)| (x) f_S)
RelObs relational_observable(const Scenario& s, int frame, const GroupElement& g,
                             const CMatrix& f_s);
// volume * twirl(Q |phi(g)><phi(g)| (x) f_S), Q acting on the frame
RelObs relational_observable(const Scenario& s, int frame, const GroupElement& g,
                             const CMatrix& f_s, const CMatrix& frame_op);

// average of f_S over the isotropy group in the system representation
CMatrix h_average(const UnitaryRep& rep_s, const CMatrix& f_s, const Subgroup& h);

CMatrix system_projector(const Scenario& s, const PhysicalSpace& ps, int frame,
                         const GroupElement& g);

struct IndependenceReport {
  bool independent = false;
  double residual = 0;  // max over orientations of |Pi_S(g) - Pi_S(e)|
};
IndependenceReport orientation_independent(const Scenario& s, const PhysicalSpace& ps, int frame);

// span of all conditional states: the physical system space over every orientation
Subspace physical_system_span(const Scenario& s, const PhysicalSpace& ps, int frame);

struct HomomorphismReport {
  double additive = 0;        // weak residuals on the physical space
  double multiplicative = 0;
  double projection = 0;      // F_f vs F_{Pi f Pi}
  double adjoint = 0;
  double strong_multiplicative = 0;  // residual on the kinematical space
  bool weak_ok = false;
  bool strong_ok = false;
};
HomomorphismReport check_weak_homomorphism(const Scenario& s, const PhysicalSpace& ps, int frame,
                                           const GroupElement& g, const CMatrix& a,
                                           const CMatrix& b, double tol = 1e-7);

struct InnerProductReport {
  double residual = 0;  // max over orientations of |conditional - physical inner product|
  bool ok = false;
};
InnerProductReport conditional_inner_product_check(const Scenario& s, const PhysicalSpace& ps,
                                                   int frame, const CVector& psi,
                                                   const CVector& chi, double tol = 1e-8);

// restriction of a kinematical operator to the physical space, in the canonical basis
CMatrix restrict_to_physical(const PhysicalSpace& ps, const CMatrix& op);

}  // namespace qrf
