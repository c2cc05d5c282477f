#pragma once

#include "qrf/groups.hpp"
#include "qrf/linalg.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qrf {

class RepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IsotypicBlock {
  std::string label;  // "j=1", "q=-1", "irrep2"
  double weight = 0;  // spin j, charge q, or catalogue index of a finite irrep
  int irrep_dim = 1;
  int multiplicity = 0;
  // ambient x (irrep_dim * multiplicity); column c*irrep_dim + i is basis vector i of copy c.
  // Copies carry identical matrices of the irrep.
  CMatrix basis;

  CMatrix copy(int c) const { return basis.middleCols(c * irrep_dim, irrep_dim); }
  // C(i, c) = <copy c, i | v>
  CMatrix coefficients(const CVector& v) const;
  // component of v inside the block
  CVector project(const CVector& v) const { return basis * (basis.adjoint() * v); }
};

struct IsotypicDecomposition {
  int dim = 0;
  std::vector<IsotypicBlock> blocks;
  std::uint64_t seed = 0;
  int attempts = 1;

  const IsotypicBlock* find(const std::string& label) const;
};

struct FiniteIrrep {
  int dim = 1;
  std::vector<cplx> character;
  std::vector<CMatrix> matrices;
};

class UnitaryRep {
 public:
  UnitaryRep() = default;
  static UnitaryRep from_matrices(const Group& g, std::vector<CMatrix> mats,
                                  const Tolerance& tol = {});
  static UnitaryRep from_generators(const Group& g, std::vector<CMatrix> gens,
                                    const Tolerance& tol = {});

  const Group& group() const;
  int dim() const;
  const std::vector<CMatrix>& matrices() const;
  const std::vector<CMatrix>& generators() const;
  const std::vector<UnitaryRep>& factors() const;
  bool monomial() const;

  CMatrix evaluate(const GroupElement& g) const;
  CMatrix algebra_element(const RVector& c) const;
  // U A U^dagger, using the monomial structure when present
  CMatrix conjugate(const GroupElement& g, const CMatrix& a) const;

  // cached, computed on first use with the default seed
  const IsotypicDecomposition& decomposition() const;

  bool valid() const { return static_cast<bool>(s_); }

 private:
  struct State;
  std::shared_ptr<State> s_;
  friend UnitaryRep tensor(const std::vector<UnitaryRep>& reps);
  friend UnitaryRep conjugate_rep(const UnitaryRep& r);
  static UnitaryRep make(std::shared_ptr<State> s);
};

UnitaryRep rep_trivial(const Group& g, int dim);
UnitaryRep rep_spin(double j);  // basis m = j, j-1, ..., -j; generators are 2 J_a
UnitaryRep rep_charges(const Group& g, const std::vector<int>& charges);  // U(1) or Z_n
UnitaryRep rep_irrep(const Group& g, int index);  // finite catalogue irrep

CMatrix rep_evaluate(const UnitaryRep& r, const GroupElement& g);
UnitaryRep tensor(const std::vector<UnitaryRep>& reps);
UnitaryRep conjugate_rep(const UnitaryRep& r);

enum class RegularSide { left, right };
UnitaryRep regular_rep(const Group& g, RegularSide side = RegularSide::left);

// operators M with b(g) M = M a(g); first solution, scaled to be an isometry when possible
std::optional<CMatrix> intertwiner(const UnitaryRep& a, const UnitaryRep& b,
                                   const Tolerance& tol = {});

enum class AverageMode { twirl, project };
// twirl: measure * (normalized average of U A U^dagger); project: projector onto invariants
CMatrix group_average(const UnitaryRep& r, const CMatrix& operand, AverageMode mode,
                      double measure = 1.0);
CMatrix invariant_projector(const UnitaryRep& r);

IsotypicDecomposition isotypic_decompose(const UnitaryRep& r, std::uint64_t seed = 0x51ed2701);

Subspace invariant_closure(const UnitaryRep& r, const Subspace& s, const Tolerance& tol = {});
Subspace invariant_closure(const UnitaryRep& r, const CVector& v, const Tolerance& tol = {});

// irreps of a finite group, ordered by dimension then by character
const std::vector<FiniteIrrep>& finite_irreps(const FiniteGroup& g);

}  // namespace qrf
