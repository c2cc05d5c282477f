#include "qrf/reps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace qrf {

struct UnitaryRep::State {
  Group group;
  int dim = 0;
  std::vector<CMatrix> mats;
  std::vector<CMatrix> gens;
  std::vector<UnitaryRep> factors;
  bool monomial = false;
  std::vector<std::vector<int>> perm;  // perm[g][j]: row of the nonzero entry in column j
  std::vector<CVector> phase;
  std::once_flag once;
  std::unique_ptr<IsotypicDecomposition> dec;
};

namespace {

constexpr double kPi = 3.14159265358979323846;

bool detect_monomial(const std::vector<CMatrix>& mats, std::vector<std::vector<int>>& perm,
                     std::vector<CVector>& phase) {
  perm.clear();
  phase.clear();
  for (const auto& m : mats) {
    std::vector<int> p(m.cols(), -1);
    CVector ph(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (std::abs(m(i, j)) > 1e-12) {
          if (p[j] >= 0) return false;
          p[j] = static_cast<int>(i);
          ph(j) = m(i, j);
        }
      }
      if (p[j] < 0 || std::abs(std::abs(ph(j)) - 1.0) > 1e-12) return false;
    }
    perm.push_back(std::move(p));
    phase.push_back(std::move(ph));
  }
  return true;
}

std::string spin_label(double j) {
  int twice = static_cast<int>(std::lround(2 * j));
  if (twice % 2 == 0) return "j=" + std::to_string(twice / 2);
  return "j=" + std::to_string(twice) + "/2";
}

std::string charge_label(int q) {
  if (q > 0) return "q=+" + std::to_string(q);
  return "q=" + std::to_string(q);
}

struct RawClass {
  std::vector<cplx> chi;
  int d = 1;
  std::vector<CMatrix> copies;
};

bool same_character(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-6) return false;
  return true;
}

std::vector<RawClass> raw_finite_decomposition(const UnitaryRep& r, std::uint64_t seed,
                                               int* attempts_out) {
  const FiniteGroup& grp = r.group().finite_group();
  int n = r.dim();
  int order = grp.order();
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::mt19937_64 rng(seed + 7919ull * attempt);
    CMatrix h = random_hermitian(n, rng);
    CMatrix t = group_average(r, h, AverageMode::twirl, 1.0);
    Eigh e = eigh(t);
    double spread = std::max(1.0, e.values.cwiseAbs().maxCoeff());
    std::vector<std::pair<int, int>> clusters;  // [start, end)
    int start = 0;
    for (int i = 1; i <= n; ++i) {
      if (i == n || e.values(i) - e.values(i - 1) > 1e-8 * spread) {
        clusters.emplace_back(start, i);
        start = i;
      }
    }
    bool ok = true;
    std::vector<RawClass> classes;
    for (auto [a, b] : clusters) {
      CMatrix basis = e.vectors.middleCols(a, b - a);
      std::vector<cplx> chi(order);
      double norm = 0.0;
      for (int g = 0; g < order; ++g) {
        chi[g] = (basis.adjoint() * (r.matrices()[g] * basis)).trace();
        norm += std::norm(chi[g]);
      }
      norm /= order;
      if (std::abs(norm - 1.0) > 1e-6) {
        ok = false;
        break;
      }
      auto it = std::find_if(classes.begin(), classes.end(),
                             [&](const RawClass& c) { return same_character(c.chi, chi); });
      if (it == classes.end()) {
        classes.push_back({chi, b - a, {basis}});
      } else {
        it->copies.push_back(basis);
      }
    }
    if (!ok) continue;
    // align every copy with the first one
    for (auto& cls : classes) {
      const CMatrix& b1 = cls.copies[0];
      int d = cls.d;
      std::vector<CMatrix> d1(order);
      for (int g = 0; g < order; ++g) d1[g] = b1.adjoint() * r.matrices()[g] * b1;
      for (size_t c = 1; c < cls.copies.size(); ++c) {
        CMatrix& bc = cls.copies[c];
        CMatrix best;
        double best_norm = -1.0;
        for (int k = 0; k < d; ++k) {
          CMatrix ek = CMatrix::Zero(d, d);
          ek(0, k) = 1.0;
          CMatrix j = CMatrix::Zero(d, d);
          for (int g = 0; g < order; ++g) {
            CMatrix dc = bc.adjoint() * r.matrices()[g] * bc;
            j += dc * ek * d1[g].adjoint();
          }
          if (j.norm() > best_norm) {
            best_norm = j.norm();
            best = j;
          }
        }
        double scale = std::sqrt((best.adjoint() * best).trace().real() / d);
        if (scale < 1e-8) throw RepError("isotypic_decompose: copy alignment failed");
        bc = bc * (best / scale);
      }
    }
    if (attempts_out) *attempts_out = attempt + 1;
    return classes;
  }
  throw RepError("isotypic_decompose: irreducibility certificate failed after 8 seeds");
}

std::vector<double> character_key(const std::vector<cplx>& chi) {
  std::vector<double> key;
  for (const auto& z : chi) {
    key.push_back(std::round(z.real() * 1e6) / 1e6);
    key.push_back(std::round(z.imag() * 1e6) / 1e6);
  }
  return key;
}

IsotypicDecomposition decompose_u1(const UnitaryRep& r) {
  Eigh e = eigh(r.generators()[0]);
  int n = r.dim();
  std::map<int, std::vector<int>> by_charge;
  for (int i = 0; i < n; ++i) {
    double v = e.values(i);
    int q = static_cast<int>(std::lround(v));
    if (std::abs(v - q) > 1e-6) throw RepError("U(1) generator has non-integer eigenvalue");
    by_charge[q].push_back(i);
  }
  IsotypicDecomposition out;
  out.dim = n;
  for (auto& [q, idx] : by_charge) {
    Subspace s{n, CMatrix(n, idx.size())};
    for (size_t k = 0; k < idx.size(); ++k) s.basis.col(k) = e.vectors.col(idx[k]);
    Subspace c = canonical_basis(s);
    IsotypicBlock b;
    b.label = charge_label(q);
    b.weight = q;
    b.irrep_dim = 1;
    b.multiplicity = c.dim();
    b.basis = c.basis;
    out.blocks.push_back(std::move(b));
  }
  return out;
}

IsotypicDecomposition decompose_su2(const UnitaryRep& r) {
  int n = r.dim();
  const auto& k = r.generators();
  const cplx i(0, 1);
  CMatrix raise = 0.5 * (k[0] + i * k[1]);
  CMatrix lower = 0.5 * (k[0] - i * k[1]);
  Eigh e = eigh(k[2]);
  std::map<int, std::vector<int>> by_weight;
  for (int a = 0; a < n; ++a) {
    double v = e.values(a);
    int w = static_cast<int>(std::lround(v));
    if (std::abs(v - w) > 1e-6) throw RepError("SU(2) weight is not an integer multiple of 1/2");
    by_weight[w].push_back(a);
  }
  IsotypicDecomposition out;
  out.dim = n;
  int total = 0;
  for (auto& [w, idx] : by_weight) {
    if (w < 0) continue;
    CMatrix bw(n, idx.size());
    for (size_t a = 0; a < idx.size(); ++a) bw.col(a) = e.vectors.col(idx[a]);
    Subspace ker = joint_kernel({raise * bw}, Tolerance{1e-8, 1e-8});
    if (ker.dim() == 0) continue;
    Subspace hw = canonical_basis(Subspace{n, bw * ker.basis});
    int d = w + 1;
    int m = hw.dim();
    IsotypicBlock b;
    b.weight = 0.5 * w;
    b.label = spin_label(b.weight);
    b.irrep_dim = d;
    b.multiplicity = m;
    b.basis.resize(n, d * m);
    for (int c = 0; c < m; ++c) {
      CVector v = hw.basis.col(c);
      for (int t = 0; t < d; ++t) {
        b.basis.col(c * d + t) = v;
        if (t + 1 < d) {
          v = lower * v;
          double nv = v.norm();
          if (nv < 1e-8) throw RepError("SU(2) lowering chain terminated early");
          v /= nv;
        }
      }
    }
    total += d * m;
    out.blocks.push_back(std::move(b));
  }
  if (total != n) throw RepError("SU(2) decomposition does not exhaust the space");
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const IsotypicBlock& a, const IsotypicBlock& b) { return a.weight < b.weight; });
  return out;
}

IsotypicDecomposition decompose_finite(const UnitaryRep& r, std::uint64_t seed) {
  int attempts = 1;
  auto classes = raw_finite_decomposition(r, seed, &attempts);
  const auto& cat = finite_irreps(r.group().finite_group());
  IsotypicDecomposition out;
  out.dim = r.dim();
  out.seed = seed;
  out.attempts = attempts;
  for (auto& cls : classes) {
    int idx = -1;
    for (size_t k = 0; k < cat.size(); ++k)
      if (same_character(cat[k].character, cls.chi)) idx = static_cast<int>(k);
    if (idx < 0) throw RepError("isotypic_decompose: character not in the irrep catalogue");
    IsotypicBlock b;
    b.label = "irrep" + std::to_string(idx);
    b.weight = idx;
    b.irrep_dim = cls.d;
    b.multiplicity = static_cast<int>(cls.copies.size());
    b.basis.resize(r.dim(), cls.d * b.multiplicity);
    for (int c = 0; c < b.multiplicity; ++c) b.basis.middleCols(c * cls.d, cls.d) = cls.copies[c];
    out.blocks.push_back(std::move(b));
  }
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const IsotypicBlock& a, const IsotypicBlock& b) { return a.weight < b.weight; });
  return out;
}

}  // namespace

CMatrix IsotypicBlock::coefficients(const CVector& v) const {
  CVector flat = basis.adjoint() * v;
  CMatrix c(irrep_dim, multiplicity);
  for (int k = 0; k < multiplicity; ++k)
    for (int t = 0; t < irrep_dim; ++t) c(t, k) = flat(k * irrep_dim + t);
  return c;
}

const IsotypicBlock* IsotypicDecomposition::find(const std::string& label) const {
  for (const auto& b : blocks)
    if (b.label == label) return &b;
  return nullptr;
}

UnitaryRep UnitaryRep::make(std::shared_ptr<State> s) {
  UnitaryRep r;
  r.s_ = std::move(s);
  return r;
}

UnitaryRep UnitaryRep::from_matrices(const Group& g, std::vector<CMatrix> mats,
                                     const Tolerance& tol) {
  if (!g.is_finite()) throw RepError("from_matrices needs a finite group");
  const FiniteGroup& fg = g.finite_group();
  if (static_cast<int>(mats.size()) != fg.order())
    throw RepError("expected one matrix per group element");
  int n = static_cast<int>(mats.front().rows());
  double utol = std::max(1e-8, 10 * tol.abs_tol);
  for (const auto& m : mats) {
    if (m.rows() != n || m.cols() != n) throw RepError("representation matrices differ in size");
    require_finite(m, "representation matrix");
    if (!is_unitary(m, utol)) throw RepError("representation matrix is not unitary");
  }
  if (max_abs(mats[fg.identity()] - CMatrix::Identity(n, n)) > utol)
    throw RepError("identity is not represented by the identity matrix");
  auto s = std::make_shared<State>();
  s->group = g;
  s->dim = n;
  s->monomial = detect_monomial(mats, s->perm, s->phase);
  for (int gen : fg.generators())
    for (int a = 0; a < fg.order(); ++a)
      if (max_abs(mats[a] * mats[gen] - mats[fg.mul(a, gen)]) > utol)
        throw RepError("matrices do not satisfy the group multiplication table");
  s->mats = std::move(mats);
  return make(std::move(s));
}

UnitaryRep UnitaryRep::from_generators(const Group& g, std::vector<CMatrix> gens,
                                       const Tolerance& tol) {
  if (!g.is_lie()) throw RepError("from_generators needs a Lie group");
  int na = g.algebra_dim();
  if (static_cast<int>(gens.size()) != na)
    throw RepError("expected " + std::to_string(na) + " generators");
  int n = static_cast<int>(gens.front().rows());
  double htol = std::max(1e-8, 10 * tol.abs_tol);
  for (const auto& k : gens) {
    if (k.rows() != n || k.cols() != n) throw RepError("generators differ in size");
    require_finite(k, "generator");
    if (!is_hermitian(k, htol)) throw RepError("generator is not Hermitian");
  }
  const auto& f = g.structure_constants();
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b) {
      CMatrix rhs = CMatrix::Zero(n, n);
      for (int c = 0; c < na; ++c) rhs += cplx(0, f[a * na * na + b * na + c]) * gens[c];
      double scale = std::max(1.0, max_abs(gens[a]) * max_abs(gens[b]));
      if (max_abs(commutator(gens[a], gens[b]) - rhs) > htol * scale)
        throw RepError("generators violate the Lie bracket relations");
    }
  auto s = std::make_shared<State>();
  s->group = g;
  s->dim = n;
  s->gens = std::move(gens);
  if (g.kind() == GroupKind::u1) {
    Eigh e = eigh(s->gens[0]);
    for (int i = 0; i < n; ++i)
      if (std::abs(e.values(i) - std::round(e.values(i))) > 1e-6)
        throw RepError("U(1) charges must be integers");
  }
  return make(std::move(s));
}

const Group& UnitaryRep::group() const { return s_->group; }
int UnitaryRep::dim() const { return s_->dim; }
const std::vector<CMatrix>& UnitaryRep::matrices() const {
  if (!s_->group.is_finite()) throw RepError("matrices() on a Lie group representation");
  return s_->mats;
}
const std::vector<CMatrix>& UnitaryRep::generators() const {
  if (!s_->group.is_lie()) throw RepError("generators() on a finite group representation");
  return s_->gens;
}
const std::vector<UnitaryRep>& UnitaryRep::factors() const { return s_->factors; }
bool UnitaryRep::monomial() const { return s_->monomial; }

CMatrix UnitaryRep::evaluate(const GroupElement& g) const {
  if (s_->group.is_finite()) {
    if (g.index < 0 || g.index >= static_cast<int>(s_->mats.size()))
      throw RepError("group element index out of range");
    return s_->mats[g.index];
  }
  if (!s_->factors.empty()) {
    std::vector<CMatrix> parts;
    for (const auto& f : s_->factors) parts.push_back(f.evaluate(g));
    return kron_all(parts);
  }
  RVector c(g.coords.size());
  for (size_t a = 0; a < g.coords.size(); ++a) c(a) = g.coords[a];
  return expi_hermitian(algebra_element(c));
}

CMatrix UnitaryRep::algebra_element(const RVector& c) const {
  const auto& k = generators();
  if (c.size() != static_cast<Eigen::Index>(k.size())) throw RepError("algebra coordinate mismatch");
  CMatrix out = CMatrix::Zero(dim(), dim());
  for (size_t a = 0; a < k.size(); ++a) out += c(a) * k[a];
  return out;
}

CMatrix UnitaryRep::conjugate(const GroupElement& g, const CMatrix& a) const {
  if (s_->group.is_finite() && s_->monomial) {
    const auto& p = s_->perm.at(g.index);
    const CVector& ph = s_->phase[g.index];
    CMatrix out(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        out(p[i], p[j]) = ph(i) * a(i, j) * std::conj(ph(j));
    return out;
  }
  CMatrix u = evaluate(g);
  return u * a * u.adjoint();
}

const IsotypicDecomposition& UnitaryRep::decomposition() const {
  std::call_once(s_->once, [this] {
    s_->dec = std::make_unique<IsotypicDecomposition>(isotypic_decompose(*this));
  });
  return *s_->dec;
}

UnitaryRep rep_trivial(const Group& g, int dim) {
  if (dim < 1) throw RepError("trivial representation needs dim >= 1");
  if (g.is_finite()) {
    std::vector<CMatrix> mats(g.finite_group().order(), CMatrix::Identity(dim, dim));
    return UnitaryRep::from_matrices(g, std::move(mats));
  }
  std::vector<CMatrix> gens(g.algebra_dim(), CMatrix::Zero(dim, dim));
  return UnitaryRep::from_generators(g, std::move(gens));
}

UnitaryRep rep_spin(double j) {
  int twice = static_cast<int>(std::lround(2 * j));
  if (twice < 0 || std::abs(2 * j - twice) > 1e-12) throw RepError("spin must be a non-negative half-integer");
  int d = twice + 1;
  double jj = 0.5 * twice;
  CMatrix jp = CMatrix::Zero(d, d);
  CMatrix jz = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    double m = jj - i;
    jz(i, i) = 2 * m;
    if (i > 0) jp(i - 1, i) = std::sqrt(jj * (jj + 1) - m * (m + 1));
  }
  CMatrix jm = jp.adjoint();
  const cplx im(0, 1);
  CMatrix kx = jp + jm;
  CMatrix ky = -im * (jp - jm);
  return UnitaryRep::from_generators(Group::su2(), {kx, ky, jz});
}

UnitaryRep rep_charges(const Group& g, const std::vector<int>& charges) {
  if (charges.empty()) throw RepError("charge list is empty");
  int d = static_cast<int>(charges.size());
  if (g.kind() == GroupKind::u1) {
    CMatrix k = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) k(i, i) = charges[i];
    return UnitaryRep::from_generators(g, {k});
  }
  if (!g.is_finite() || !g.finite_group().is_abelian() || g.name().empty() || g.name()[0] != 'Z')
    throw RepError("charge representations need U(1) or a cyclic group");
  int n = g.finite_group().order();
  std::vector<CMatrix> mats;
  for (int a = 0; a < n; ++a) {
    CMatrix m = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = std::polar(1.0, 2 * kPi * charges[i] * a / n);
    mats.push_back(m);
  }
  return UnitaryRep::from_matrices(g, std::move(mats));
}

UnitaryRep rep_irrep(const Group& g, int index) {
  const auto& cat = finite_irreps(g.finite_group());
  if (index < 0 || index >= static_cast<int>(cat.size()))
    throw RepError("irrep index out of range (group has " + std::to_string(cat.size()) + ")");
  return UnitaryRep::from_matrices(g, cat[index].matrices);
}

CMatrix rep_evaluate(const UnitaryRep& r, const GroupElement& g) { return r.evaluate(g); }

UnitaryRep tensor(const std::vector<UnitaryRep>& reps) {
  if (reps.empty()) throw RepError("tensor of no representations");
  const Group& g = reps.front().group();
  for (const auto& r : reps)
    if (!r.group().same_as(g)) throw RepError("tensor factors carry different groups");
  if (reps.size() == 1) return reps.front();
  auto s = std::make_shared<UnitaryRep::State>();
  s->group = g;
  s->dim = 1;
  for (const auto& r : reps) s->dim *= r.dim();
  for (const auto& r : reps) {
    if (r.factors().empty())
      s->factors.push_back(r);
    else
      for (const auto& f : r.factors()) s->factors.push_back(f);
  }
  if (g.is_finite()) {
    int order = g.finite_group().order();
    for (int a = 0; a < order; ++a) {
      std::vector<CMatrix> parts;
      for (const auto& r : reps) parts.push_back(r.matrices()[a]);
      s->mats.push_back(kron_all(parts));
    }
    s->monomial = detect_monomial(s->mats, s->perm, s->phase);
  } else {
    int na = g.algebra_dim();
    for (int a = 0; a < na; ++a) {
      CMatrix total = CMatrix::Zero(s->dim, s->dim);
      int before = 1;
      for (size_t k = 0; k < reps.size(); ++k) {
        int after = s->dim / (before * reps[k].dim());
        total += kron(kron(CMatrix::Identity(before, before), reps[k].generators()[a]),
                      CMatrix::Identity(after, after));
        before *= reps[k].dim();
      }
      s->gens.push_back(total);
    }
  }
  return UnitaryRep::make(std::move(s));
}

UnitaryRep conjugate_rep(const UnitaryRep& r) {
  auto s = std::make_shared<UnitaryRep::State>();
  s->group = r.group();
  s->dim = r.dim();
  for (const auto& f : r.factors()) s->factors.push_back(conjugate_rep(f));
  if (r.group().is_finite()) {
    for (const auto& m : r.matrices()) s->mats.push_back(m.conjugate());
    s->monomial = detect_monomial(s->mats, s->perm, s->phase);
  } else {
    for (const auto& k : r.generators()) s->gens.push_back(-k.conjugate());
  }
  return UnitaryRep::make(std::move(s));
}

UnitaryRep regular_rep(const Group& g, RegularSide side) {
  if (!g.is_finite()) throw RepError("regular representation needs a finite group");
  const FiniteGroup& fg = g.finite_group();
  int n = fg.order();
  std::vector<CMatrix> mats;
  for (int a = 0; a < n; ++a) {
    CMatrix m = CMatrix::Zero(n, n);
    for (int h = 0; h < n; ++h) {
      int to = side == RegularSide::left ? fg.mul(a, h) : fg.mul(h, fg.inv(a));
      m(to, h) = 1.0;
    }
    mats.push_back(m);
  }
  return UnitaryRep::from_matrices(g, std::move(mats));
}

std::optional<CMatrix> intertwiner(const UnitaryRep& a, const UnitaryRep& b, const Tolerance& tol) {
  if (!a.group().same_as(b.group())) throw RepError("intertwiner: different groups");
  int na = a.dim(), nb = b.dim();
  std::vector<std::pair<CMatrix, CMatrix>> pairs;
  if (a.group().is_finite()) {
    for (int gen : a.group().finite_group().generators())
      pairs.emplace_back(a.matrices()[gen], b.matrices()[gen]);
  } else {
    for (size_t k = 0; k < a.generators().size(); ++k)
      pairs.emplace_back(a.generators()[k], b.generators()[k]);
  }
  if (pairs.empty()) pairs.emplace_back(CMatrix::Identity(na, na), CMatrix::Identity(nb, nb));
  std::vector<CMatrix> eqs;
  for (const auto& [ma, mb] : pairs)
    eqs.push_back(kron(CMatrix::Identity(na, na), mb) - kron(ma.transpose(), CMatrix::Identity(nb, nb)));
  Subspace ker = joint_kernel(eqs, tol);
  if (ker.dim() == 0) return std::nullopt;
  Subspace canon = canonical_basis(ker);
  CVector v = canon.basis.col(0);
  CMatrix m = Eigen::Map<CMatrix>(v.data(), nb, na);
  CMatrix mm = m.adjoint() * m;
  double s = mm.trace().real() / na;
  if (s > 0 && max_abs(mm - s * CMatrix::Identity(na, na)) <= 1e-8 * s) m /= std::sqrt(s);
  return m;
}

CMatrix group_average(const UnitaryRep& r, const CMatrix& operand, AverageMode mode,
                      double measure) {
  if (mode == AverageMode::project) return invariant_projector(r);
  int n = r.dim();
  if (operand.rows() != n || operand.cols() != n)
    throw RepError("group_average: operand dimension does not match the representation");
  require_finite(operand, "group_average operand");
  if (r.group().is_finite()) {
    int order = r.group().finite_group().order();
    CMatrix acc = CMatrix::Zero(n, n);
    for (int g = 0; g < order; ++g) acc += r.conjugate(GroupElement::finite(g), operand);
    return acc * (measure / order);
  }
  const IsotypicDecomposition& dec = r.decomposition();
  CMatrix acc = CMatrix::Zero(n, n);
  for (const auto& b : dec.blocks) {
    int d = b.irrep_dim, m = b.multiplicity;
    CMatrix ab = b.basis.adjoint() * operand * b.basis;
    CMatrix t(m, m);
    for (int c = 0; c < m; ++c)
      for (int cp = 0; cp < m; ++cp) {
        cplx s = 0;
        for (int i = 0; i < d; ++i) s += ab(c * d + i, cp * d + i);
        t(c, cp) = s / static_cast<double>(d);
      }
    acc += b.basis * kron(t, CMatrix::Identity(d, d)) * b.basis.adjoint();
  }
  return acc * measure;
}

CMatrix invariant_projector(const UnitaryRep& r) {
  int n = r.dim();
  if (r.group().is_finite()) {
    CMatrix acc = CMatrix::Zero(n, n);
    for (const auto& m : r.matrices()) acc += m;
    acc /= static_cast<double>(r.matrices().size());
    return 0.5 * (acc + acc.adjoint());
  }
  for (const auto& b : r.decomposition().blocks)
    if (b.weight == 0) return b.basis * b.basis.adjoint();
  return CMatrix::Zero(n, n);
}

IsotypicDecomposition isotypic_decompose(const UnitaryRep& r, std::uint64_t seed) {
  switch (r.group().kind()) {
    case GroupKind::u1: return decompose_u1(r);
    case GroupKind::su2: return decompose_su2(r);
    default: return decompose_finite(r, seed);
  }
}

Subspace invariant_closure(const UnitaryRep& r, const Subspace& s, const Tolerance& tol) {
  int n = r.dim();
  if (s.ambient_dim != n) throw RepError("invariant_closure: dimension mismatch");
  if (s.dim() == 0) return s;
  if (r.group().is_finite()) {
    const auto& mats = r.matrices();
    CMatrix all(n, s.dim() * mats.size());
    for (size_t g = 0; g < mats.size(); ++g) all.middleCols(g * s.dim(), s.dim()) = mats[g] * s.basis;
    return orthonormal_range(all, tol);
  }
  Subspace cur = orthonormal_range(s.basis, tol);
  while (true) {
    const auto& k = r.generators();
    CMatrix all(n, cur.dim() * (k.size() + 1));
    all.leftCols(cur.dim()) = cur.basis;
    for (size_t a = 0; a < k.size(); ++a) all.middleCols((a + 1) * cur.dim(), cur.dim()) = k[a] * cur.basis;
    Subspace next = orthonormal_range(all, tol);
    if (next.dim() == cur.dim()) return next;
    cur = next;
  }
}

Subspace invariant_closure(const UnitaryRep& r, const CVector& v, const Tolerance& tol) {
  if (v.norm() == 0) return Subspace::empty(r.dim());
  return invariant_closure(r, Subspace{r.dim(), v.normalized()}, tol);
}

const std::vector<FiniteIrrep>& finite_irreps(const FiniteGroup& g) {
  static std::mutex mu;
  static std::map<std::vector<std::vector<int>>, std::vector<FiniteIrrep>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(g.table());
  if (it != cache.end()) return it->second;
  Group grp = Group::finite(g);
  UnitaryRep reg = regular_rep(grp);
  auto classes = raw_finite_decomposition(reg, 0x1ee7, nullptr);
  std::vector<FiniteIrrep> out;
  for (auto& cls : classes) {
    if (static_cast<int>(cls.copies.size()) != cls.d)
      throw RepError("regular representation has an irrep of wrong multiplicity");
    FiniteIrrep irr;
    irr.dim = cls.d;
    irr.character = cls.chi;
    for (int a = 0; a < g.order(); ++a)
      irr.matrices.push_back(cls.copies[0].adjoint() * reg.matrices()[a] * cls.copies[0]);
    out.push_back(std::move(irr));
  }
  std::sort(out.begin(), out.end(), [](const FiniteIrrep& a, const FiniteIrrep& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return character_key(a.character) > character_key(b.character);
  });
  return cache.emplace(g.table(), std::move(out)).first->second;
}

}  // namespace qrf
