#pragma once

#include "qrf/linalg.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrf {

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FiniteGroup {
 public:
  FiniteGroup() = default;
  static FiniteGroup from_table(const std::vector<std::vector<int>>& table,
                                std::string name = "custom");

  int order() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  bool is_abelian() const;
  const std::string& name() const { return name_; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  // a small generating set, chosen greedily in index order
  std::vector<int> generators() const;

 private:
  std::string name_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
};

FiniteGroup cyclic_group(int n);
FiniteGroup symmetric_group3();
FiniteGroup dihedral_group4();
FiniteGroup quaternion_group();
// "Z<n>" (1 <= n <= 32), "S3", "D4", "Q8"
FiniteGroup builtin_finite_group(const std::string& name);
std::vector<std::string> builtin_finite_group_names();

// finite groups: index; U(1): coords = {theta}; SU(2): coords c with U = exp(i c.sigma)
struct GroupElement {
  int index = 0;
  std::vector<double> coords;

  static GroupElement finite(int i) { return {i, {}}; }
  static GroupElement angle(double theta) { return {0, {theta}}; }
  static GroupElement su2(double x, double y, double z) { return {0, {x, y, z}}; }
};

enum class GroupKind { finite, u1, su2 };

class Group {
 public:
  Group() = default;
  static Group finite(FiniteGroup g);
  static Group u1();
  static Group su2();

  GroupKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == GroupKind::finite; }
  bool is_lie() const { return !is_finite(); }
  const FiniteGroup& finite_group() const;
  int algebra_dim() const;
  std::string name() const;
  bool same_as(const Group& other) const;

  GroupElement identity() const;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const;
  GroupElement inv(const GroupElement& a) const;
  bool equal(const GroupElement& a, const GroupElement& b, double tol = 1e-9) const;
  std::vector<GroupElement> elements() const;  // finite groups only

  // [K_a, K_b] = i f_abc K_c, stored at a*n*n + b*n + c
  const std::vector<double>& structure_constants() const { return structure_; }

 private:
  GroupKind kind_ = GroupKind::finite;
  std::shared_ptr<const FiniteGroup> finite_;
  std::vector<double> structure_;
};

// validated, normalized element (U(1) angle reduced mod 2 pi)
GroupElement lie_element(const Group& g, std::vector<double> coords);

Eigen::Matrix2cd su2_matrix(const GroupElement& g);
GroupElement su2_from_matrix(const Eigen::Matrix2cd& u);

// continuous part given by a basis of a subalgebra, finite part by element list
struct Subgroup {
  std::vector<int> elements;
  std::vector<RVector> algebra;
  bool discrete_part_unknown = false;

  bool is_trivial() const { return algebra.empty() && elements.size() <= 1; }
  int order() const { return static_cast<int>(elements.size()); }
};

Subgroup finite_subgroup(const FiniteGroup& g, std::vector<int> elements);
Subgroup trivial_subgroup(const Group& g);

enum class CosetSide { left, right };
// left cosets gH or right cosets Hg, as sorted element lists ordered by smallest member
std::vector<std::vector<int>> cosets(const FiniteGroup& g, const Subgroup& h,
                                     CosetSide side = CosetSide::left);

}  // namespace qrf
