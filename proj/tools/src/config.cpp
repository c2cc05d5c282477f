#include "qrf/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qrf {

namespace {

const std::vector<std::string> kTaskTypes = {"phys_space", "rel_obs",  "reduce",
                                             "probabilities", "frame_change", "reorient",
                                             "lr_classify", "full_report"};

Group parse_group(const json& j) {
  if (j.is_string()) {
    std::string n = j.get<std::string>();
    if (n == "U1" || n == "U(1)") return Group::u1();
    if (n == "SU2" || n == "SU(2)") return Group::su2();
    try {
      return Group::finite(builtin_finite_group(n));
    } catch (const GroupError& e) {
      throw ConfigError(std::string("group: ") + e.what());
    }
  }
  if (j.is_object()) {
    std::vector<std::vector<int>> table;
    std::string name = j.value("name", "custom");
    if (j.contains("table")) {
      table = j.at("table").get<std::vector<std::vector<int>>>();
    } else if (j.contains("table_file")) {
      std::ifstream in(j.at("table_file").get<std::string>());
      if (!in) throw ConfigError("group: cannot open table_file");
      json t = json::parse(in, nullptr, false);
      if (t.is_discarded()) throw ConfigError("group: table_file is not valid JSON");
      table = (t.is_object() ? t.at("table") : t).get<std::vector<std::vector<int>>>();
    } else {
      throw ConfigError("group: object form needs 'table' or 'table_file'");
    }
    try {
      return Group::finite(FiniteGroup::from_table(table, name));
    } catch (const GroupError& e) {
      throw ConfigError(std::string("group: ") + e.what());
    }
  }
  throw ConfigError("group must be a name or a table object");
}

UnitaryRep parse_rep(const Group& g, const json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1)
    throw ConfigError(where + ": representation must be an object with one key");
  auto it = j.begin();
  const std::string& kind = it.key();
  const json& v = it.value();
  try {
    if (kind == "trivial") return rep_trivial(g, v.get<int>());
    if (kind == "charges") return rep_charges(g, v.get<std::vector<int>>());
    if (kind == "spin") {
      if (g.kind() != GroupKind::su2) throw ConfigError(where + ": spin needs SU2");
      return rep_spin(v.get<double>());
    }
    if (kind == "regular") {
      bool right = v.is_string() && v.get<std::string>() == "right";
      return regular_rep(g, right ? RegularSide::right : RegularSide::left);
    }
    if (kind == "irrep") return rep_irrep(g, v.get<int>());
    if (kind == "tensor") {
      std::vector<UnitaryRep> parts;
      for (const auto& p : v) parts.push_back(parse_rep(g, p, where));
      return tensor(parts);
    }
    if (kind == "matrices") {
      std::vector<CMatrix> mats;
      for (const auto& m : v) mats.push_back(parse_matrix(m));
      return UnitaryRep::from_matrices(g, std::move(mats));
    }
    if (kind == "generators") {
      std::vector<CMatrix> gens;
      for (const auto& m : v) gens.push_back(parse_matrix(m));
      return UnitaryRep::from_generators(g, std::move(gens));
    }
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const RepError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const GroupError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown representation kind '" + kind + "'");
}

}  // namespace

cplx parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("complex number must be a number or [re, im]");
}

CVector parse_vector(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("vector must be a non-empty array");
  CVector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = parse_complex(j[i]);
  return v;
}

CMatrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ConfigError("matrix must be an array of rows");
  size_t cols = j[0].size();
  CMatrix m(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ConfigError("matrix rows differ in length");
    for (size_t c = 0; c < cols; ++c) m(r, c) = parse_complex(j[r][c]);
  }
  return m;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

GroupElement parse_element(const Group& g, const json& j) {
  try {
    if (g.is_finite()) {
      int idx = j.is_object() ? j.at("index").get<int>() : j.get<int>();
      if (idx < 0 || idx >= g.finite_group().order()) throw ConfigError("group element index out of range");
      return GroupElement::finite(idx);
    }
    if (g.kind() == GroupKind::u1) {
      double t = j.is_object() ? j.at("theta").get<double>() : j.get<double>();
      return lie_element(g, {t});
    }
    auto c = (j.is_object() ? j.at("coords") : j).get<std::vector<double>>();
    return lie_element(g, c);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("group element: ") + e.what());
  } catch (const GroupError& e) {
    throw ConfigError(std::string("group element: ") + e.what());
  }
}

ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const char* key : {"group", "subsystems", "frames"})
    if (!j.contains(key)) throw ConfigError(std::string("config is missing '") + key + "'");
  ScenarioConfig cfg;
  cfg.raw = j;
  cfg.name = j.value("name", "unnamed");
  cfg.group = parse_group(j.at("group"));
  const json& subs = j.at("subsystems");
  if (!subs.is_array() || subs.empty()) throw ConfigError("subsystems must be a non-empty array");
  for (size_t k = 0; k < subs.size(); ++k) {
    const json& s = subs[k];
    std::string name = s.value("name", "S" + std::to_string(k));
    for (const auto& prev : cfg.subsystems)
      if (prev.name == name) throw ConfigError("duplicate subsystem name '" + name + "'");
    if (!s.contains("rep")) throw ConfigError("subsystem " + name + " has no 'rep'");
    cfg.subsystems.push_back({name, parse_rep(cfg.group, s.at("rep"), "subsystem " + name)});
  }
  const json& frames = j.at("frames");
  if (!frames.is_array() || frames.empty()) throw ConfigError("frames must be a non-empty array");
  for (const auto& f : frames) {
    FrameSpec spec;
    std::string sub = f.value("subsystem", "");
    spec.name = f.value("name", sub);
    int idx = -1;
    for (size_t k = 0; k < cfg.subsystems.size(); ++k)
      if (cfg.subsystems[k].name == sub) idx = static_cast<int>(k);
    if (idx < 0) throw ConfigError("frame " + spec.name + " names an unknown subsystem '" + sub + "'");
    for (const auto& prev : cfg.frames)
      if (prev.name == spec.name) throw ConfigError("duplicate frame name '" + spec.name + "'");
    spec.subsystem = idx;
    spec.seed = f.value("seed", json("uniform"));
    cfg.frames.push_back(std::move(spec));
  }
  cfg.state = j.value("state", json("random"));
  if (j.contains("tasks")) {
    if (!j.at("tasks").is_array()) throw ConfigError("tasks must be an array");
    for (const auto& t : j.at("tasks")) {
      json task = t.is_string() ? json{{"type", t}} : t;
      std::string type = task.value("type", "");
      if (std::find(kTaskTypes.begin(), kTaskTypes.end(), type) == kTaskTypes.end())
        throw ConfigError("unknown task type '" + type + "'");
      cfg.tasks.push_back(task);
    }
  }
  if (cfg.tasks.empty()) cfg.tasks.push_back(json{{"type", "full_report"}});
  return cfg;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  return parse_config(j);
}

ScenarioConfig load_config(const std::string& path_or_builtin) {
  if (is_builtin(path_or_builtin)) return parse_config(builtin_config(path_or_builtin));
  std::ifstream in(path_or_builtin);
  if (!in) throw ConfigError("cannot open config '" + path_or_builtin + "' (and it is not a builtin)");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace qrf
