#include "qrf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qrf {

namespace {

constexpr double kPi = 3.14159265358979323846;
const char* kHeisenbergUnavailable = "Heisenberg picture unavailable, Schr\xC3\xB6" "dinger picture used";

struct Checks {
  json list = json::array();
  int total = 0;
  int failed = 0;

  void residual(const std::string& name, double r, double tol) {
    bool pass = std::isfinite(r) && r <= tol;
    list.push_back({{"name", name}, {"pass", pass}, {"residual", r}, {"tolerance", tol}});
    ++total;
    if (!pass) ++failed;
  }
  void flag(const std::string& name, bool pass, const std::string& detail = "") {
    json c = {{"name", name}, {"pass", pass}};
    if (!detail.empty()) c["detail"] = detail;
    list.push_back(c);
    ++total;
    if (!pass) ++failed;
  }
};

struct Ctx {
  const ScenarioConfig& cfg;
  const RunOptions& opts;
  Scenario s;
  PhysicalSpace ps;
  CVector psi;
  std::mt19937_64 rng;
  double ctol = 1e-8;
  double wtol = 1e-7;
};

json element_json(const Group& g, const GroupElement& e) {
  if (g.is_finite()) return e.index;
  if (g.kind() == GroupKind::u1) return e.coords.at(0);
  return e.coords;
}

std::string local_label(const UnitaryRep& r, int i) {
  if (r.group().is_lie()) {
    const CMatrix& k = r.group().kind() == GroupKind::u1 ? r.generators()[0] : r.generators()[2];
    CMatrix off = k;
    off.diagonal().setZero();
    if (max_abs(off) < 1e-12) {
      long v = std::lround(k(i, i).real());
      return std::to_string(v);
    }
  }
  return std::to_string(i);
}

std::string ket_label(const std::vector<const UnitaryRep*>& reps, int idx) {
  std::vector<std::string> parts(reps.size());
  for (int k = static_cast<int>(reps.size()) - 1; k >= 0; --k) {
    int d = reps[k]->dim();
    parts[k] = local_label(*reps[k], idx % d);
    idx /= d;
  }
  std::string out = "|";
  for (size_t k = 0; k < parts.size(); ++k) out += (k ? "," : "") + parts[k];
  return out + ">";
}

json amplitudes(const CVector& v, const std::vector<const UnitaryRep*>& reps) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > 1e-10)
      out.push_back({{"ket", ket_label(reps, static_cast<int>(i))}, {"amp", complex_json(v(i))}});
  return out;
}

std::vector<const UnitaryRep*> kin_reps(const Scenario& s) {
  std::vector<const UnitaryRep*> out;
  for (const auto& sub : s.subsystems()) out.push_back(&sub.rep);
  return out;
}

std::vector<const UnitaryRep*> system_reps(const Scenario& s, int frame) {
  std::vector<const UnitaryRep*> out;
  for (int k : s.system_subsystems(frame)) out.push_back(&s.subsystems()[k].rep);
  return out;
}

CMatrix random_observable(int n, std::mt19937_64& rng) {
  CMatrix h = random_hermitian(n, rng);
  double nrm = eigh(h).values.cwiseAbs().maxCoeff();
  return nrm > 0 ? CMatrix(h / nrm) : h;
}

double gauge_commutator(const Scenario& s, const CMatrix& op) {
  double worst = 0;
  const UnitaryRep& u = s.total_rep();
  if (s.group().is_finite()) {
    for (int gen : s.group().finite_group().generators()) {
      const CMatrix& m = u.matrices()[gen];
      worst = std::max(worst, max_abs(m * op - op * m));
    }
  } else {
    for (const auto& k : u.generators()) worst = std::max(worst, max_abs(commutator(k, op)));
  }
  return worst;
}

std::vector<int> frame_list(const Ctx& c, const json& task) {
  std::vector<int> out;
  if (task.contains("frame")) {
    out.push_back(c.s.frame_index(task.at("frame").get<std::string>()));
  } else {
    for (int k = 0; k < c.s.num_frames(); ++k) out.push_back(k);
  }
  return out;
}

GroupElement task_orientation(const Ctx& c, const json& task, const char* key, int sample) {
  if (task.contains(key)) return parse_element(c.s.group(), task.at(key));
  auto samples = sample_orientations(c.s.group(), 3);
  return samples[std::min<size_t>(sample, samples.size() - 1)];
}

CMatrix task_observable(Ctx& c, const json& task, int dim) {
  if (!task.contains("observable") || task.at("observable") == "random") return random_observable(dim, c.rng);
  const json& o = task.at("observable");
  CMatrix m;
  if (o.is_object() && o.contains("diag")) {
    CVector d = parse_vector(o.at("diag"));
    m = d.asDiagonal();
  } else if (o == "identity") {
    m = CMatrix::Identity(dim, dim);
  } else {
    m = parse_matrix(o);
  }
  if (m.rows() != dim || m.cols() != dim) throw ConfigError("observable has the wrong dimension");
  return m;
}

// ---------------------------------------------------------------- tasks

json task_phys_space(Ctx& c) {
  Checks ch;
  const Scenario& s = c.s;
  const CMatrix& b = c.ps.space.basis;
  double inv = 0;
  if (s.group().is_finite()) {
    for (const auto& m : s.total_rep().matrices()) inv = std::max(inv, max_abs(m * b - b));
  } else {
    for (const auto& k : s.total_rep().generators()) inv = std::max(inv, max_abs(k * b));
  }
  ch.residual("basis vectors are invariant", inv, c.ctol);
  ch.residual("basis is orthonormal", max_abs(b.adjoint() * b - CMatrix::Identity(b.cols(), b.cols())), c.ctol);
  CMatrix p_avg = invariant_projector(s.total_rep());
  ch.residual("projector matches the group average", max_abs(p_avg - c.ps.projector), c.ctol);

  json res;
  res["kin_dim"] = s.kin_dim();
  res["dim"] = c.ps.dim();
  json blocks = json::array();
  if (s.group().is_lie() || s.kin_dim() <= 64)
    for (const auto& blk : s.total_rep().decomposition().blocks)
      blocks.push_back({{"label", blk.label}, {"irrep_dim", blk.irrep_dim}, {"multiplicity", blk.multiplicity}});
  res["decomposition"] = blocks;
  if (c.ps.dim() <= 16) {
    json basis = json::array();
    for (int k = 0; k < c.ps.dim(); ++k) basis.push_back(amplitudes(b.col(k), kin_reps(s)));
    res["basis"] = basis;
  }
  return {{"task", "phys_space"}, {"results", res}, {"checks", ch.list}};
}

json task_lr_classify(Ctx& c, int k) {
  Checks ch;
  const Frame& f = c.s.frame(k);
  json res;
  res["frame"] = f.name;
  res["dim"] = f.dim();
  res["volume"] = f.volume;
  res["regular"] = is_regular_frame(f);
  json blocks = json::array();
  for (const auto& d : f.resolution.blocks)
    blocks.push_back({{"label", d.label},
                      {"dim_M", d.dim_m},
                      {"dim_N", d.dim_n},
                      {"singular_values", d.singular_values},
                      {"expected", d.expected},
                      {"ok", d.ok}});
  res["resolution"] = {{"residual", f.resolution.residual}, {"blocks", blocks}};
  ch.residual("frame states resolve the identity", f.resolution.residual, c.ctol);
  json iso;
  if (f.group().is_finite()) {
    iso["elements"] = f.isotropy.elements;
  } else {
    iso["algebra_dim"] = f.isotropy.algebra.size();
    iso["discrete_part_unknown"] = f.isotropy.discrete_part_unknown;
  }
  res["isotropy"] = iso;
  CMatrix povm;
  if (f.group().is_finite()) {
    std::vector<int> all(f.group().finite_group().order());
    for (size_t a = 0; a < all.size(); ++a) all[a] = static_cast<int>(a);
    povm = povm_effect(f, all);
  } else if (f.group().kind() == GroupKind::u1) {
    povm = povm_effect_arc(f, 0.0, 2 * kPi);
  }
  if (povm.size()) ch.residual("orientation POVM is complete", max_abs(povm - CMatrix::Identity(f.dim(), f.dim())), c.ctol);
  LrReport lr = lr_classify(f, c.s.tol());
  res["lr"] = {{"exists", lr.exists}, {"reason", lr.reason}, {"action_residual", lr.action_residual}};
  if (lr.exists) ch.residual("right action reorients the frame states", lr.action_residual, c.ctol);
  return {{"task", "lr_classify"}, {"frame", f.name}, {"results", res}, {"checks", ch.list}};
}

json task_rel_obs(Ctx& c, int k, const json& task) {
  Checks ch;
  const Scenario& s = c.s;
  const Frame& f = s.frame(k);
  int ds = s.system_dim(k);
  GroupElement g = task_orientation(c, task, "orientation", 1);
  CMatrix fs = task_observable(c, task, ds);
  RelObs obs = relational_observable(s, k, g, fs);
  double scale = std::max(1.0, max_abs(fs));
  ch.residual("relational observable is gauge invariant", gauge_commutator(s, obs.matrix), c.ctol * scale);
  if (is_hermitian(fs, 1e-12))
    ch.residual("relational observable is Hermitian", max_abs(obs.matrix - obs.matrix.adjoint()), c.ctol * scale);
  RelObs one = relational_observable(s, k, g, CMatrix::Identity(ds, ds));
  ch.residual("relational identity is the identity", max_abs(one.matrix - CMatrix::Identity(s.kin_dim(), s.kin_dim())), c.ctol);

  CMatrix a = random_observable(ds, c.rng), b = random_observable(ds, c.rng);
  HomomorphismReport h = check_weak_homomorphism(s, c.ps, k, g, a, b, c.wtol);
  ch.residual("weak homomorphism: addition", h.additive, c.wtol);
  ch.residual("weak homomorphism: multiplication", h.multiplicative, c.wtol);
  ch.residual("weak homomorphism: projection", h.projection, c.wtol);
  ch.residual("weak homomorphism: adjoint", h.adjoint, c.wtol);
  bool regular = is_regular_frame(f);
  if (regular) ch.residual("strong homomorphism (regular frame)", h.strong_multiplicative, c.wtol);

  // observables agree with their isotropy average at the identity orientation
  GroupElement e = s.group().identity();
  CMatrix fe = relational_observable(s, k, e, fs).matrix;
  bool h_supported = f.group().is_finite() || f.isotropy.algebra.size() <= 1;
  if (h_supported) {
    CMatrix avg = h_average(s.system_rep(k), fs, f.isotropy);
    ch.residual("isotropy average leaves the observable unchanged",
                max_abs(relational_observable(s, k, e, avg).matrix - fe), c.ctol * scale);
  }
  if (f.group().is_finite() && f.isotropy.order() > 1) {
    double worst = 0;
    for (int hh : f.isotropy.elements) {
      GroupElement gh = s.group().mul(g, GroupElement::finite(hh));
      worst = std::max(worst, max_abs(relational_observable(s, k, gh, fs).matrix - obs.matrix));
    }
    ch.residual("orientation is defined modulo isotropy", worst, c.ctol * scale);
  }
  json res;
  res["frame"] = f.name;
  res["orientation"] = element_json(s.group(), g);
  res["system_dim"] = ds;
  res["regular_frame"] = regular;
  res["strong_residual"] = h.strong_multiplicative;
  res["strong_homomorphism"] = h.strong_ok;
  res["isotropy_average_supported"] = h_supported;
  return {{"task", "rel_obs"}, {"frame", f.name}, {"results", res}, {"checks", ch.list}};
}

json task_reduce(Ctx& c, int k) {
  Checks ch;
  const Scenario& s = c.s;
  const Frame& f = s.frame(k);
  const UnitaryRep& rs = s.system_rep(k);
  int ds = s.system_dim(k);
  GroupElement e = s.group().identity();
  auto samples = sample_orientations(s.group(), 8);
  double iso = 0, trip = 0, inrange = 0, proj = 0, pcov = 0, cov = 0;
  CVector red_e = schrodinger_reduce(s, c.ps, k, e, c.psi);
  CMatrix pi_e = system_projector(s, c.ps, k, e);
  for (const auto& g : samples) {
    CMatrix r = schrodinger_matrix(s, c.ps, k, g);
    iso = std::max(iso, max_abs(r.adjoint() * r - CMatrix::Identity(c.ps.dim(), c.ps.dim())));
    CVector red = schrodinger_reduce(s, c.ps, k, g, c.psi);
    trip = std::max(trip, (schrodinger_inverse(s, c.ps, k, g, red) - c.psi).norm());
    CMatrix pi = system_projector(s, c.ps, k, g);
    inrange = std::max(inrange, (pi * red - red).norm());
    proj = std::max({proj, max_abs(pi * pi - pi), max_abs(pi - pi.adjoint())});
    CMatrix u = rs.evaluate(g);
    pcov = std::max(pcov, max_abs(pi - u * pi_e * u.adjoint()));
    cov = std::max(cov, (red - u * red_e).norm());
  }
  ch.residual("reduction is an isometry", iso, c.ctol);
  ch.residual("inverse reduction recovers the state", trip, c.ctol);
  ch.residual("reduced state lies in the physical system space", inrange, c.ctol);
  ch.residual("system projector is an orthogonal projector", proj, c.ctol);
  ch.residual("system projector is covariant", pcov, c.ctol);
  ch.residual("reduced states are covariant", cov, c.ctol);

  CVector chi = c.ps.space.basis * random_state(c.ps.dim(), c.rng);
  InnerProductReport ip = conditional_inner_product_check(s, c.ps, k, c.psi, chi, c.ctol);
  ch.residual("conditional inner product equals the physical one", ip.residual, c.ctol);

  // observable reduction in the Schroedinger picture
  CMatrix fs = random_observable(ds, c.rng);
  GroupElement g1 = samples[std::min<size_t>(1, samples.size() - 1)];
  CMatrix fphys = restrict_to_physical(c.ps, relational_observable(s, k, g1, fs).matrix);
  CMatrix r1 = schrodinger_matrix(s, c.ps, k, g1);
  CMatrix pi1 = system_projector(s, c.ps, k, g1);
  ch.residual("reduced relational observable is the projected observable",
              max_abs(r1 * fphys * r1.adjoint() - pi1 * fs * pi1), c.ctol);

  json res;
  res["frame"] = f.name;
  res["volume"] = f.volume;
  res["system_dim"] = ds;
  CVector cond = conditional_state(s, k, e, c.psi);
  res["conditional_state"] = amplitudes(cond, system_reps(s, k));
  Subspace span = physical_system_span(s, c.ps, k);
  res["physical_system_span_dim"] = span.dim();
  IndependenceReport ind = orientation_independent(s, c.ps, k);
  res["orientation_independent"] = {{"independent", ind.independent}, {"residual", ind.residual}};
  auto sys = s.system_subsystems(k);
  if (sys.size() >= 2) {
    int d0 = s.subsystems()[sys[0]].rep.dim();
    res["projector_factorization_residual"] = product_residual(pi_e, d0, ds / d0);
  }
  if (s.group().is_lie() || ds <= 64) {
    json support = json::array();
    for (const auto& blk : rs.decomposition().blocks) {
      CMatrix coef = blk.coefficients(cond);
      std::vector<double> copies;
      json overlaps = json::array();
      for (int cc = 0; cc < blk.multiplicity; ++cc) {
        copies.push_back(coef.col(cc).norm());
        overlaps.push_back(complex_json(coef(0, cc)));
      }
      support.push_back({{"label", blk.label}, {"copy_norms", copies}, {"hw_overlap", overlaps}});
    }
    res["isotypic_support"] = support;
  }

  ThetaResult theta = solve_theta(f, std::nullopt, s.tol());
  json th = {{"found", theta.found}, {"residual", theta.residual}};
  if (!theta.note.empty()) th["note"] = theta.note;
  if (theta.found && s.group().kind() == GroupKind::u1) th["fourier_k"] = theta.fourier_k;
  res["theta"] = th;
  json heis;
  if (theta.found && s.group().kind() != GroupKind::su2) {
    Disentangler t = disentangler(s, k, theta);
    DisentanglerReport dr = check_disentangler(s, c.ps, k, theta, t);
    ch.residual("disentangler splits off theta", dr.action, c.ctol);
    ch.residual("disentangler is isometric on physical states", dr.isometry, c.ctol);
    ch.residual("disentangled projector", dr.projector, c.ctol);
    ch.residual("theta norm equals the frame volume", dr.theta_norm, c.ctol);
    double rh = 0;
    for (const auto& g : samples) {
      CVector h = heisenberg_reduce(s, c.ps, k, theta, t, g, c.psi);
      CVector target = rs.evaluate(g).adjoint() * schrodinger_reduce(s, c.ps, k, g, c.psi);
      rh = std::max(rh, (h - target).norm());
    }
    ch.residual("Heisenberg reduction equals U_S^dagger R_S", rh, c.ctol);
    CMatrix re = schrodinger_matrix(s, c.ps, k, e);
    ch.residual("Heisenberg observable", max_abs(re * fphys * re.adjoint() - heisenberg_observable(s, c.ps, k, g1, fs)), c.ctol);
    heis = {{"available", true}, {"quadrature_points", t.quadrature_points}};
  } else {
    heis = {{"available", false}, {"message", kHeisenbergUnavailable}};
    heis["reason"] = theta.found ? "disentangler is not supported for SU(2)" : theta.note;
  }
  res["heisenberg"] = heis;
  return {{"task", "reduce"}, {"frame", f.name}, {"results", res}, {"checks", ch.list}};
}

json task_probabilities(Ctx& c, int k, const json& task) {
  Checks ch;
  const Scenario& s = c.s;
  int ds = s.system_dim(k);
  GroupElement g = task_orientation(c, task, "orientation", 1);
  CMatrix fs = task_observable(c, task, ds);
  Eigh e = eigh(fs);
  json outcomes = json::array();
  double total = 0, worst = 0;
  int start = 0;
  for (int i = 1; i <= ds; ++i) {
    if (i == ds || e.values(i) - e.values(i - 1) > 1e-8) {
      CMatrix v = e.vectors.middleCols(start, i - start);
      ProbabilityReport p = conditional_probability(s, c.ps, k, g, v * v.adjoint(), c.psi);
      total += p.reduced;
      worst = std::max(worst, std::abs(p.reduced - p.invariant));
      outcomes.push_back({{"eigenvalue", e.values(start)}, {"p_reduced", p.reduced}, {"p_invariant", p.invariant}});
      start = i;
    }
  }
  ch.residual("reduced and invariant probabilities agree", worst, c.ctol);
  ch.residual("probabilities sum to one", std::abs(total - 1.0), c.ctol);
  json res = {{"frame", s.frame(k).name}, {"orientation", element_json(s.group(), g)}, {"outcomes", outcomes}};
  auto sys = s.system_subsystems(k);
  if (sys.size() >= 2) {
    int d0 = s.subsystems()[sys[0]].rep.dim(), d1 = s.subsystems()[sys[1]].rep.dim();
    double jt = 0, jw = 0;
    json joint = json::array();
    for (int a = 0; a < d0; ++a)
      for (int b = 0; b < d1; ++b) {
        CMatrix pa = CMatrix::Zero(d0, d0), pb = CMatrix::Zero(d1, d1);
        pa(a, a) = 1;
        pb(b, b) = 1;
        ProbabilityReport p = multi_event_probability(s, c.ps, k, g, {{0, pa}, {1, pb}}, c.psi);
        jt += p.reduced;
        jw = std::max(jw, std::abs(p.reduced - p.invariant));
        joint.push_back({{"outcome", {a, b}}, {"p", p.reduced}});
      }
    ch.residual("joint probabilities agree", jw, c.ctol);
    ch.residual("joint probabilities sum to one", std::abs(jt - 1.0), c.ctol);
    res["joint"] = joint;
  }
  return {{"task", "probabilities"}, {"frame", s.frame(k).name}, {"results", res}, {"checks", ch.list}};
}

json task_frame_change(Ctx& c, int i, int j, const json& task) {
  Checks ch;
  const Scenario& s = c.s;
  GroupElement gi = task_orientation(c, task, "g_from", 1);
  GroupElement gj = task_orientation(c, task, "g_to", 2);
  FrameChange fc = frame_change(s, c.ps, i, gi, j, gj);
  ch.residual("change is an isometry on the source physical system space", fc.isometry_from, c.ctol);
  ch.residual("change is onto the target physical system space", fc.isometry_to, c.ctol);
  CVector ri = schrodinger_reduce(s, c.ps, i, gi, c.psi);
  CVector rj = schrodinger_reduce(s, c.ps, j, gj, c.psi);
  ch.residual("change maps reduced states to reduced states", (fc.matrix * ri - rj).norm(), c.ctol);
  json res = {{"from", s.frame(i).name}, {"to", s.frame(j).name},
              {"g_from", element_json(s.group(), gi)}, {"g_to", element_json(s.group(), gj)},
              {"shape", {fc.matrix.rows(), fc.matrix.cols()}}};
  if (i == j) {
    const UnitaryRep& rs = s.system_rep(i);
    CMatrix expect = rs.evaluate(s.group().mul(gj, s.group().inv(gi))) * system_projector(s, c.ps, i, gi);
    ch.residual("same-frame change is a system rotation", max_abs(fc.matrix - expect), c.ctol);
  } else if (is_regular_frame(s.frame(i)) && is_regular_frame(s.frame(j))) {
    CMatrix kern = regular_frame_change_kernel(s, i, gi, j, gj);
    ch.residual("change equals the regular-frame kernel", max_abs(fc.matrix - kern), c.ctol);
  }
  return {{"task", "frame_change"}, {"results", res}, {"checks", ch.list}};
}

json task_reorient(Ctx& c, int k) {
  Checks ch;
  const Scenario& s = c.s;
  const Frame& f = s.frame(k);
  json res = {{"frame", f.name}};
  if (!f.lr) {
    res["skipped"] = "frame has no right action";
    return {{"task", "reorient"}, {"frame", f.name}, {"results", res}, {"checks", ch.list}};
  }
  const Group& grp = s.group();
  int ds = s.system_dim(k);
  auto samples = sample_orientations(grp, 4);
  GroupElement g1 = samples[1 % samples.size()], k1 = samples[2 % samples.size()],
               k2 = samples[3 % samples.size()];
  CMatrix fs = random_observable(ds, c.rng);
  RelObs obs = relational_observable(s, k, g1, fs);
  RelObs moved = reorient(s, k, k1, obs);
  RelObs expect = relational_observable(s, k, grp.mul(g1, grp.inv(k1)), fs);
  ch.residual("reorientation moves the orientation", max_abs(moved.matrix - expect.matrix), c.ctol);
  RelObs twice = reorient(s, k, k2, moved);
  RelObs once = reorient(s, k, grp.mul(k2, k1), obs);
  ch.residual("reorientations compose", max_abs(twice.matrix - once.matrix), c.ctol);
  CMatrix w = s.embed(k, f.lr->evaluate(k1), CMatrix::Identity(ds, ds));
  ch.residual("reorientation commutes with the gauge group", gauge_commutator(s, w), c.ctol);
  CMatrix brute = w * obs.matrix * w.adjoint();
  ch.residual("block conjugation agrees with the dense product", max_abs(brute - moved.matrix), c.ctol);

  // relation-conditional reorientation towards another regular frame
  int other = -1;
  if (is_regular_frame(f))
    for (int j = 0; j < s.num_frames(); ++j)
      if (j != k && is_regular_frame(s.frame(j)) && s.num_subsystems() >= 3) {
        other = j;
        break;
      }
  if (other >= 0) {
    const FiniteGroup& fg = grp.finite_group();
    int r1 = s.frame_subsystem(k), r2 = s.frame_subsystem(other);
    std::vector<int> rest;
    for (int q = 0; q < s.num_subsystems(); ++q)
      if (q != r1 && q != r2) rest.push_back(q);
    int drest = 1;
    for (int q : rest) drest *= s.subsystems()[q].rep.dim();
    GroupElement a1 = GroupElement::finite(fg.order() > 1 ? 1 : 0);
    GroupElement a2 = GroupElement::finite(fg.order() > 2 ? 2 : 0);
    CMatrix fr = random_observable(drest, c.rng);
    RelObs on_s = relational_observable(s, k, a1, place_operator(s, s.system_subsystems(k), rest, fr));
    CMatrix target_s = relational_observable(s, other, a2, place_operator(s, s.system_subsystems(other), rest, fr)).matrix;
    RelObs mod_s = relation_conditional_reorient(s, k, a1, other, a2, on_s, RelCondMode::modified);
    RelObs uni_s = relation_conditional_reorient(s, k, a1, other, a2, on_s, RelCondMode::unital);
    ch.residual("relation-conditional: system observable moves to the other frame", max_abs(mod_s.matrix - target_s), c.ctol);
    ch.residual("relation-conditional: unital form agrees on system observables", max_abs(uni_s.matrix - target_s), c.ctol);

    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    CVector q2(fg.order()), q1(fg.order());
    for (int a = 0; a < fg.order(); ++a) {
      q2(a) = ud(c.rng);
      q1(a) = ud(c.rng);
    }
    CMatrix q2m = q2.asDiagonal();
    RelObs on_r2 = relational_observable(s, k, a1, place_operator(s, s.system_subsystems(k), {r2}, q2m));
    RelObs mod_r2 = relation_conditional_reorient(s, k, a1, other, a2, on_r2, RelCondMode::modified);
    CMatrix id = CMatrix::Identity(s.kin_dim(), s.kin_dim());
    ch.residual("relation-conditional: other frame observable becomes its value",
                max_abs(mod_r2.matrix - q2(a2.index) * id), c.ctol);

    CMatrix q1m = q1.asDiagonal();
    RelObs taut = relational_observable(s, k, a1, CMatrix::Identity(ds, ds), q1m);
    ch.residual("tautological observable is a multiple of the identity", max_abs(taut.matrix - q1(a1.index) * id), c.ctol);
    RelObs mod_t = relation_conditional_reorient(s, k, a1, other, a2, taut, RelCondMode::modified);
    CMatrix target_t = relational_observable(s, other, a2, place_operator(s, s.system_subsystems(other), {r1}, q1m)).matrix;
    ch.residual("relation-conditional: tautological observable moves to the other frame", max_abs(mod_t.matrix - target_t), c.ctol);
    RelObs uni_t = relation_conditional_reorient(s, k, a1, other, a2, taut, RelCondMode::unital);
    res["unital_tautological_residual"] = max_abs(uni_t.matrix - target_t);

    double comm = 0;
    for (int a = 0; a < fg.order(); ++a) {
      CMatrix v = f.lr->evaluate(GroupElement::finite(a));
      comm = std::max({comm, max_abs(s.conjugate_frame(k, v, mod_s.matrix) - mod_s.matrix),
                       max_abs(s.conjugate_frame(k, v, mod_r2.matrix) - mod_r2.matrix)});
    }
    ch.residual("relation-conditional output on R2 S observables commutes with the frame's right action", comm, c.ctol);

    SubsystemRelativityReport rel = subsystem_relativity_report(s, c.ps, k, other);
    ch.residual("A_{R2|R1} commutes with A_{S|R1}", rel.commutator_residual, c.ctol);
    ch.flag("A_{S|R1} differs from A_{S|R2}", !rel.coincide);
    res["relation_conditional"] = {{"to", s.frame(other).name}};
    res["subsystem_relativity"] = {{"dim_S_given_R1", rel.dim_s_r1},
                                   {"dim_S_given_R2", rel.dim_s_r2},
                                   {"dim_R2_given_R1", rel.dim_r2_r1},
                                   {"overlap_dim", rel.overlap_dim},
                                   {"coincide", rel.coincide}};
  }
  return {{"task", "reorient"}, {"frame", f.name}, {"results", res}, {"checks", ch.list}};
}

json run_task(Ctx& c, const json& task, std::vector<json>& out) {
  std::string type = task.at("type").get<std::string>();
  auto frames = frame_list(c, task);
  if (type == "phys_space") {
    out.push_back(task_phys_space(c));
  } else if (type == "lr_classify") {
    for (int k : frames) out.push_back(task_lr_classify(c, k));
  } else if (type == "rel_obs") {
    for (int k : frames) out.push_back(task_rel_obs(c, k, task));
  } else if (type == "reduce") {
    for (int k : frames) out.push_back(task_reduce(c, k));
  } else if (type == "probabilities") {
    for (int k : frames) out.push_back(task_probabilities(c, k, task));
  } else if (type == "frame_change") {
    if (task.contains("from") || task.contains("to")) {
      int i = c.s.frame_index(task.value("from", c.s.frame(0).name));
      int j = c.s.frame_index(task.value("to", c.s.frame(0).name));
      out.push_back(task_frame_change(c, i, j, task));
    } else {
      for (int i = 0; i < c.s.num_frames(); ++i)
        for (int j = 0; j < c.s.num_frames(); ++j) out.push_back(task_frame_change(c, i, j, task));
    }
  } else if (type == "reorient") {
    for (int k : frames) out.push_back(task_reorient(c, k));
  } else if (type == "full_report") {
    for (const char* t : {"phys_space", "lr_classify", "rel_obs", "reduce", "probabilities", "frame_change", "reorient"})
      run_task(c, json{{"type", t}}, out);
  }
  return {};
}

json error_task(const std::string& name, const std::string& msg, Checks& ch) {
  ch.flag(name, false, msg);
  return {{"task", name}, {"error", msg}, {"checks", ch.list}};
}

}  // namespace

CVector seed_vector(const Group& g, const UnitaryRep& rep, const json& spec) {
  int d = rep.dim();
  if (spec.is_string()) {
    std::string s = spec.get<std::string>();
    if (s == "uniform") return CVector::Ones(d) / std::sqrt(static_cast<double>(d));
    if (s == "identity") {
      CVector v = CVector::Zero(d);
      int at = (g.is_finite() && d == g.finite_group().order()) ? g.finite_group().identity() : 0;
      v(at) = 1.0;
      return v;
    }
    if (s == "lr") return build_lr_seed(rep);
    throw ConfigError("unknown seed '" + s + "'");
  }
  CVector v = parse_vector(spec);
  if (v.size() != d) throw ConfigError("seed has dimension " + std::to_string(v.size()) + ", frame needs " + std::to_string(d));
  return v;
}

Scenario build_scenario(const ScenarioConfig& cfg, const Tolerance& tol) {
  std::vector<FrameSlot> slots;
  for (const auto& spec : cfg.frames) {
    const UnitaryRep& r = cfg.subsystems[spec.subsystem].rep;
    slots.push_back({make_frame(r, seed_vector(cfg.group, r, spec.seed), spec.name, tol), spec.subsystem});
  }
  return Scenario(cfg.name, cfg.group, cfg.subsystems, slots, tol);
}

Report run(const ScenarioConfig& cfg, const RunOptions& opts) {
  Report rep;
  json& doc = rep.doc;
  doc["qrf_report"] = 1;
  doc["scenario"] = cfg.name;
  doc["group"] = cfg.group.name();
  doc["seed"] = opts.seed;
  doc["tolerance"] = opts.tol.abs_tol;
  doc["config"] = cfg.raw;
  json tasks = json::array();
  auto finish = [&]() {
    int total = 0, failed = 0;
    for (const auto& t : tasks)
      for (const auto& ch : t.at("checks")) {
        ++total;
        if (!ch.at("pass").get<bool>()) ++failed;
      }
    doc["tasks"] = tasks;
    doc["summary"] = {{"checks", total}, {"passed", total - failed}, {"failed", failed}, {"pass", failed == 0}};
    rep.checks = total;
    rep.failures = failed;
    return rep;
  };

  std::vector<FrameSlot> slots;
  for (const auto& spec : cfg.frames) {
    try {
      const UnitaryRep& r = cfg.subsystems[spec.subsystem].rep;
      CVector seed = seed_vector(cfg.group, r, spec.seed);
      slots.push_back({make_frame(r, seed, spec.name, opts.tol), spec.subsystem});
    } catch (const ResolutionFails& e) {
      Checks ch;
      json diag = json::array();
      for (const auto& b : e.report.blocks)
        diag.push_back({{"label", b.label}, {"dim_M", b.dim_m}, {"dim_N", b.dim_n}, {"ok", b.ok}, {"message", b.message}});
      ch.flag("frame " + spec.name + " resolves the identity", false, e.what());
      tasks.push_back({{"task", "setup"}, {"frame", spec.name}, {"error", e.what()}, {"diagnosis", diag}, {"checks", ch.list}});
      return finish();
    } catch (const std::exception& e) {
      Checks ch;
      tasks.push_back(error_task("setup", "frame " + spec.name + ": " + e.what(), ch));
      return finish();
    }
  }
  std::optional<Ctx> ctx;
  try {
    ctx.emplace(Ctx{cfg, opts, Scenario(cfg.name, cfg.group, cfg.subsystems, slots, opts.tol), {}, {}, std::mt19937_64(opts.seed)});
    Ctx& c = *ctx;
    c.ctol = std::max(1e-8, 10 * opts.tol.abs_tol);
    c.wtol = std::max(1e-7, 100 * opts.tol.abs_tol);
    c.ps = physical_space(c.s);
    if (cfg.state.is_object() && cfg.state.contains("phys_coeffs")) {
      CVector coeffs = parse_vector(cfg.state.at("phys_coeffs"));
      if (coeffs.size() != c.ps.dim()) throw ConfigError("state: phys_coeffs needs " + std::to_string(c.ps.dim()) + " entries");
      c.psi = c.ps.space.basis * coeffs;
    } else if (cfg.state.is_object() && cfg.state.contains("kin")) {
      c.psi = parse_vector(cfg.state.at("kin"));
      if (c.psi.size() != c.s.kin_dim() || c.ps.space.distance(c.psi) > 1e-8 * c.psi.norm())
        throw ConfigError("state: kinematical vector is not physical");
    } else {
      c.psi = c.ps.space.basis * random_state(c.ps.dim(), c.rng);
    }
    if (c.psi.norm() < 1e-12) throw ConfigError("state is zero");
    c.psi.normalize();
    doc["kin_dim"] = c.s.kin_dim();
    doc["phys_dim"] = c.ps.dim();
  } catch (const std::exception& e) {
    Checks ch;
    tasks.push_back(error_task("setup", e.what(), ch));
    return finish();
  }
  for (const auto& task : cfg.tasks) {
    std::vector<json> out;
    try {
      run_task(*ctx, task, out);
    } catch (const std::exception& e) {
      Checks ch;
      out.push_back(error_task(task.at("type").get<std::string>(), e.what(), ch));
    }
    for (auto& t : out) tasks.push_back(std::move(t));
  }
  return finish();
}

}  // namespace qrf
