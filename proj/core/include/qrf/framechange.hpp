#pragma once

#include "qrf/perspective.hpp"
#include "qrf/reductions.hpp"

#include <string>

namespace qrf {

struct FrameChange {
  int from = 0;
  int to = 0;
  GroupElement g_from;
  GroupElement g_to;
  CMatrix matrix;  // system space of `from` -> system space of `to`
  double isometry_from = 0;  // |M^dagger M - Pi_S(from)|
  double isometry_to = 0;    // |M M^dagger - Pi_S(to)|
};

FrameChange frame_change(const Scenario& s, const PhysicalSpace& ps, int from,
                         const GroupElement& g_from, int to, const GroupElement& g_to);

// kernel sum_g |g g_i><g^-1 g_j| (x) U_rest(g) for two regular frames
CMatrix regular_frame_change_kernel(const Scenario& s, int from, const GroupElement& g_from, int to,
                                    const GroupElement& g_to);

// conjugation by V_R(k) (x) 1; the reoriented observable sits at orientation g k^-1
RelObs reorient(const Scenario& s, int frame, const GroupElement& k, const RelObs& obs);

enum class RelCondMode { modified, unital };

// reorientation of frame 1 conditioned on its relation to frame 2; regular frames only
RelObs relation_conditional_reorient(const Scenario& s, int frame1, const GroupElement& g1,
                                     int frame2, const GroupElement& g2, const RelObs& obs,
                                     RelCondMode mode = RelCondMode::modified);

struct SubsystemRelativityReport {
  bool degenerate = false;  // both frames coincide
  bool commuting = false;   // A_{R2|R1} and A_{S|R1}
  double commutator_residual = 0;
  bool coincide = false;    // A_{S|R1} == A_{S|R2} on the physical space
  int dim_s_r1 = 0;
  int dim_s_r2 = 0;
  int dim_r2_r1 = 0;
  int overlap_dim = 0;
  std::string note;
};

SubsystemRelativityReport subsystem_relativity_report(const Scenario& s, const PhysicalSpace& ps,
                                                      int frame1, int frame2);

// operator on the listed subsystems (ascending kinematical order) placed into `space`,
// an ascending list of subsystems, identity elsewhere
CMatrix place_operator(const Scenario& s, const std::vector<int>& space,
                       const std::vector<int>& support, const CMatrix& op);

}  // namespace qrf
