#include "qrf/cli.hpp"

namespace qrf {

namespace {

const std::vector<std::string> kFiniteNames = {"Z2", "Z3", "S3", "D4", "Q8"};

json spin1() { return json{{"spin", 1}}; }

json finite_regular(const std::string& g) {
  return json{{"name", "finite-regular:" + g},
              {"group", g},
              {"subsystems",
               {{{"name", "R1"}, {"rep", {{"regular", "left"}}}},
                {{"name", "R2"}, {"rep", {{"regular", "left"}}}},
                {{"name", "S"}, {"rep", {{"regular", "left"}}}}}},
              {"frames",
               {{{"name", "R1"}, {"subsystem", "R1"}, {"seed", "identity"}},
                {{"name", "R2"}, {"subsystem", "R2"}, {"seed", "identity"}}}},
              {"tasks", {"full_report"}}};
}

json finite_mixed(const std::string& g) {
  // regular frame R1 next to a non-ideal frame R2 on a two-dimensional representation
  json small;
  if (g[0] == 'Z')
    small = json{{"charges", {0, 1}}};
  else {
    const auto& cat = finite_irreps(builtin_finite_group(g));
    int k = 0;
    while (cat[k].dim < 2) ++k;
    small = json{{"irrep", k}};
  }
  return json{{"name", "finite-mixed:" + g},
              {"group", g},
              {"subsystems",
               {{{"name", "R1"}, {"rep", {{"regular", "left"}}}},
                {{"name", "R2"}, {"rep", small}},
                {{"name", "S"}, {"rep", small}}}},
              {"frames",
               {{{"name", "R1"}, {"subsystem", "R1"}, {"seed", "identity"}},
                {{"name", "R2"}, {"subsystem", "R2"}, {"seed", "uniform"}}}},
              {"tasks", {"full_report"}}};
}

}  // namespace

std::vector<BuiltinInfo> list_builtins() {
  std::vector<BuiltinInfo> out = {
      {"u1-qubit-qubit-qutrit", "U(1): qubits A, B and qutrit C, frames A and C", true},
      {"su2-three-spin1", "SU(2): three spin-1 systems, frame A", true},
      {"su2-four-spin1", "SU(2): four spin-1 systems, frame A", true},
      {"su2-lr-spinhalf", "SU(2): spin-1/2 (x) C^2 frame with a right action, spin-1/2 system", true},
      {"u1-broken-multiplicity2", "U(1): frame with a charge of multiplicity 2 (fails resolution)", false},
  };
  for (const auto& g : kFiniteNames)
    out.push_back({"finite-regular:" + g, g + ": three regular subsystems, regular frames R1 and R2", true});
  for (const auto& g : kFiniteNames)
    out.push_back({"finite-mixed:" + g, g + ": regular frame R1, non-ideal frame R2 and system S", true});
  return out;
}

bool is_builtin(const std::string& name) {
  for (const auto& b : list_builtins())
    if (b.name == name) return true;
  return false;
}

json builtin_config(const std::string& name) {
  if (name == "u1-qubit-qubit-qutrit")
    return json{{"name", name},
                {"group", "U1"},
                {"subsystems",
                 {{{"name", "A"}, {"rep", {{"charges", {1, -1}}}}},
                  {{"name", "B"}, {"rep", {{"charges", {1, -1}}}}},
                  {{"name", "C"}, {"rep", {{"charges", {2, 0, -2}}}}}}},
                {"frames",
                 {{{"name", "A"}, {"subsystem", "A"}, {"seed", "uniform"}},
                  {{"name", "C"}, {"subsystem", "C"}, {"seed", "uniform"}}}},
                {"tasks", {"full_report"}}};
  if (name == "su2-three-spin1" || name == "su2-four-spin1") {
    int n = name == "su2-three-spin1" ? 3 : 4;
    json subs = json::array();
    const char* names[] = {"A", "B", "C", "D"};
    for (int k = 0; k < n; ++k) subs.push_back({{"name", names[k]}, {"rep", spin1()}});
    return json{{"name", name},
                {"group", "SU2"},
                {"subsystems", subs},
                {"frames", {{{"name", "A"}, {"subsystem", "A"}, {"seed", "uniform"}}}},
                {"tasks", {"full_report"}}};
  }
  if (name == "su2-lr-spinhalf")
    return json{{"name", name},
                {"group", "SU2"},
                {"subsystems",
                 {{{"name", "R"}, {"rep", {{"tensor", {{{"spin", 0.5}}, {{"trivial", 2}}}}}}},
                  {{"name", "S"}, {"rep", {{"spin", 0.5}}}}}},
                {"frames", {{{"name", "R"}, {"subsystem", "R"}, {"seed", "lr"}}}},
                {"tasks", {"full_report"}}};
  if (name == "u1-broken-multiplicity2")
    return json{{"name", name},
                {"group", "U1"},
                {"subsystems",
                 {{{"name", "R"}, {"rep", {{"charges", {1, 1}}}}},
                  {{"name", "S"}, {"rep", {{"charges", {1, -1}}}}}}},
                {"frames", {{{"name", "R"}, {"subsystem", "R"}, {"seed", "uniform"}}}},
                {"tasks", {"full_report"}}};
  for (const auto& g : kFiniteNames) {
    if (name == "finite-regular:" + g) return finite_regular(g);
    if (name == "finite-mixed:" + g) return finite_mixed(g);
  }
  throw ConfigError("unknown builtin scenario '" + name + "'");
}

}  // namespace qrf
