#include "qrf/groups.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

namespace qrf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double t) {
  double r = std::fmod(t, 2 * kPi);
  if (r < 0) r += 2 * kPi;
  if (r >= 2 * kPi) r -= 2 * kPi;
  return r;
}

}  // namespace

FiniteGroup FiniteGroup::from_table(const std::vector<std::vector<int>>& table, std::string name) {
  int n = static_cast<int>(table.size());
  if (n == 0) throw GroupError("empty multiplication table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw GroupError("multiplication table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw GroupError("multiplication table entry out of range");
  }
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = table[a][b] == b && table[b][a] == b;
    if (ok) e = a;
  }
  if (e < 0) throw GroupError("multiplication table has no identity");
  for (int a = 0; a < n; ++a) {
    std::vector<char> seen(n, 0);
    for (int b = 0; b < n; ++b) {
      if (seen[table[a][b]]) throw GroupError("multiplication table row is not a permutation");
      seen[table[a][b]] = 1;
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw GroupError("multiplication table is not associative");
  FiniteGroup g;
  g.name_ = std::move(name);
  g.table_ = table;
  g.identity_ = e;
  g.inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table[a][b] == e) g.inverse_[a] = b;
  return g;
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = 0; b < a; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::vector<int> FiniteGroup::generators() const {
  std::vector<int> gens;
  std::set<int> span = {identity_};
  for (int a = 0; a < order() && static_cast<int>(span.size()) < order(); ++a) {
    if (span.count(a)) continue;
    gens.push_back(a);
    std::vector<int> frontier(span.begin(), span.end());
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int x : frontier)
        for (int gen : gens) {
          int y = mul(x, gen);
          if (span.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
  }
  return gens;
}

FiniteGroup cyclic_group(int n) {
  if (n < 1 || n > 32) throw GroupError("cyclic group order must be in [1, 32]");
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return FiniteGroup::from_table(t, "Z" + std::to_string(n));
}

FiniteGroup symmetric_group3() {
  // permutations of {0,1,2} in lexicographic order, (p q)(i) = p(q(i))
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p = {0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  int n = static_cast<int>(perms.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return FiniteGroup::from_table(t, "S3");
}

FiniteGroup dihedral_group4() {
  // element r^k s^m stored at index k + 4m; s r = r^-1 s
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int k1 = a % 4, m1 = a / 4, k2 = b % 4, m2 = b / 4;
      int k = m1 ? (k1 - k2 + 4) % 4 : (k1 + k2) % 4;
      t[a][b] = k + 4 * ((m1 + m2) % 2);
    }
  return FiniteGroup::from_table(t, "D4");
}

FiniteGroup quaternion_group() {
  // 1, i, j, k at 0..3 and their negatives at 4..7
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, -0, 3, -2}, {2, -3, -0, 1}, {3, 2, -1, -0}};
  static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int ua = a % 4, ub = b % 4;
      int s = sign[ua][ub] * (a >= 4 ? -1 : 1) * (b >= 4 ? -1 : 1);
      int u = std::abs(unit[ua][ub]);
      t[a][b] = u + (s < 0 ? 4 : 0);
    }
  return FiniteGroup::from_table(t, "Q8");
}

FiniteGroup builtin_finite_group(const std::string& name) {
  if (name == "S3") return symmetric_group3();
  if (name == "D4") return dihedral_group4();
  if (name == "Q8") return quaternion_group();
  if (name.size() >= 2 && name[0] == 'Z') {
    int n = 0;
    try {
      size_t used = 0;
      n = std::stoi(name.substr(1), &used);
      if (used != name.size() - 1) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n >= 1 && n <= 32) return cyclic_group(n);
  }
  throw GroupError("unknown builtin group '" + name + "'");
}

std::vector<std::string> builtin_finite_group_names() { return {"Z<n> (n<=32)", "S3", "D4", "Q8"}; }

Group Group::finite(FiniteGroup g) {
  Group out;
  out.kind_ = GroupKind::finite;
  out.finite_ = std::make_shared<const FiniteGroup>(std::move(g));
  return out;
}

Group Group::u1() {
  Group out;
  out.kind_ = GroupKind::u1;
  out.structure_ = {0.0};
  return out;
}

Group Group::su2() {
  Group out;
  out.kind_ = GroupKind::su2;
  // Pauli normalization: [s_a, s_b] = 2 i eps_abc s_c
  out.structure_.assign(27, 0.0);
  auto set = [&](int a, int b, int c, double v) { out.structure_[a * 9 + b * 3 + c] = v; };
  set(0, 1, 2, 2);
  set(1, 2, 0, 2);
  set(2, 0, 1, 2);
  set(1, 0, 2, -2);
  set(2, 1, 0, -2);
  set(0, 2, 1, -2);
  return out;
}

const FiniteGroup& Group::finite_group() const {
  if (!finite_) throw GroupError("group is not finite");
  return *finite_;
}

int Group::algebra_dim() const {
  switch (kind_) {
    case GroupKind::u1: return 1;
    case GroupKind::su2: return 3;
    default: return 0;
  }
}

std::string Group::name() const {
  switch (kind_) {
    case GroupKind::u1: return "U1";
    case GroupKind::su2: return "SU2";
    default: return finite_ ? finite_->name() : "finite";
  }
}

bool Group::same_as(const Group& other) const {
  if (kind_ != other.kind_) return false;
  if (!is_finite()) return true;
  return finite_ == other.finite_ || finite_->table() == other.finite_->table();
}

GroupElement Group::identity() const {
  switch (kind_) {
    case GroupKind::u1: return GroupElement::angle(0.0);
    case GroupKind::su2: return GroupElement::su2(0, 0, 0);
    default: return GroupElement::finite(finite_group().identity());
  }
}

GroupElement Group::mul(const GroupElement& a, const GroupElement& b) const {
  switch (kind_) {
    case GroupKind::u1: return GroupElement::angle(wrap_angle(a.coords.at(0) + b.coords.at(0)));
    case GroupKind::su2: return su2_from_matrix(su2_matrix(a) * su2_matrix(b));
    default: return GroupElement::finite(finite_group().mul(a.index, b.index));
  }
}

GroupElement Group::inv(const GroupElement& a) const {
  switch (kind_) {
    case GroupKind::u1: return GroupElement::angle(wrap_angle(-a.coords.at(0)));
    case GroupKind::su2: return GroupElement::su2(-a.coords.at(0), -a.coords.at(1), -a.coords.at(2));
    default: return GroupElement::finite(finite_group().inv(a.index));
  }
}

bool Group::equal(const GroupElement& a, const GroupElement& b, double tol) const {
  switch (kind_) {
    case GroupKind::u1: {
      double d = wrap_angle(a.coords.at(0) - b.coords.at(0));
      return std::min(d, 2 * kPi - d) <= tol;
    }
    case GroupKind::su2: return (su2_matrix(a) - su2_matrix(b)).cwiseAbs().maxCoeff() <= tol;
    default: return a.index == b.index;
  }
}

std::vector<GroupElement> Group::elements() const {
  const FiniteGroup& g = finite_group();
  std::vector<GroupElement> out;
  out.reserve(g.order());
  for (int i = 0; i < g.order(); ++i) out.push_back(GroupElement::finite(i));
  return out;
}

GroupElement lie_element(const Group& g, std::vector<double> coords) {
  if (!g.is_lie()) throw GroupError("lie_element: group is finite");
  if (static_cast<int>(coords.size()) != g.algebra_dim())
    throw GroupError("lie_element: expected " + std::to_string(g.algebra_dim()) + " coordinates");
  for (double c : coords)
    if (!std::isfinite(c)) throw GroupError("lie_element: non-finite coordinate");
  if (g.kind() == GroupKind::u1) return GroupElement::angle(wrap_angle(coords[0]));
  return GroupElement{0, std::move(coords)};
}

Eigen::Matrix2cd su2_matrix(const GroupElement& g) {
  double x = g.coords.at(0), y = g.coords.at(1), z = g.coords.at(2);
  double t = std::sqrt(x * x + y * y + z * z);
  Eigen::Matrix2cd m;
  if (t < 1e-300) return Eigen::Matrix2cd::Identity();
  double s = std::sin(t) / t;
  double c = std::cos(t);
  const cplx i(0, 1);
  m(0, 0) = c + i * s * z;
  m(0, 1) = i * s * x + s * y;
  m(1, 0) = i * s * x - s * y;
  m(1, 1) = c - i * s * z;
  return m;
}

GroupElement su2_from_matrix(const Eigen::Matrix2cd& u) {
  // u = a0 + i (a . sigma)
  double a0 = 0.5 * (u(0, 0) + u(1, 1)).real();
  double az = 0.5 * (u(0, 0) - u(1, 1)).imag();
  double ax = 0.5 * (u(0, 1) + u(1, 0)).imag();
  double ay = 0.5 * (u(0, 1) - u(1, 0)).real();
  double an = std::sqrt(ax * ax + ay * ay + az * az);
  if (an < 1e-15) {
    if (a0 >= 0) return GroupElement::su2(0, 0, 0);
    return GroupElement::su2(kPi, 0, 0);
  }
  double t = std::atan2(an, a0);
  return GroupElement::su2(t * ax / an, t * ay / an, t * az / an);
}

Subgroup finite_subgroup(const FiniteGroup& g, std::vector<int> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  std::set<int> s(elements.begin(), elements.end());
  if (!s.count(g.identity())) throw GroupError("subgroup does not contain the identity");
  for (int a : elements) {
    if (a < 0 || a >= g.order()) throw GroupError("subgroup element out of range");
    for (int b : elements)
      if (!s.count(g.mul(a, g.inv(b)))) throw GroupError("subset is not closed under a b^-1");
  }
  Subgroup h;
  h.elements = std::move(elements);
  return h;
}

Subgroup trivial_subgroup(const Group& g) {
  Subgroup h;
  h.elements = {g.is_finite() ? g.finite_group().identity() : 0};
  return h;
}

std::vector<std::vector<int>> cosets(const FiniteGroup& g, const Subgroup& h, CosetSide side) {
  if (h.elements.empty()) throw GroupError("cosets: empty subgroup");
  Subgroup checked = finite_subgroup(g, h.elements);
  std::vector<int> owner(g.order(), -1);
  std::vector<std::vector<int>> out;
  for (int a = 0; a < g.order(); ++a) {
    if (owner[a] >= 0) continue;
    std::vector<int> c;
    for (int x : checked.elements) c.push_back(side == CosetSide::left ? g.mul(a, x) : g.mul(x, a));
    std::sort(c.begin(), c.end());
    for (int x : c) owner[x] = static_cast<int>(out.size());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace qrf
