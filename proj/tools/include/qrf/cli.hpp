#pragma once

#include "qrf/framechange.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qrf {

using json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FrameSpec {
  std::string name;
  int subsystem = 0;
  json seed;
};

struct ScenarioConfig {
  std::string name;
  json raw;  // normalized echo of the input
  Group group;
  std::vector<Subsystem> subsystems;
  std::vector<FrameSpec> frames;
  json state;
  std::vector<json> tasks;
};

ScenarioConfig parse_config(const json& j);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::string& path_or_builtin);

struct BuiltinInfo {
  std::string name;
  std::string description;
  bool expect_pass = true;
};
std::vector<BuiltinInfo> list_builtins();
bool is_builtin(const std::string& name);
json builtin_config(const std::string& name);

struct RunOptions {
  std::uint64_t seed = 20240601;
  Tolerance tol;
};

struct Report {
  json doc;
  int checks = 0;
  int failures = 0;
  bool ok() const { return failures == 0; }
};

// "uniform", "identity", "lr" or an explicit vector
CVector seed_vector(const Group& g, const UnitaryRep& rep, const json& spec);
// frames and scenario for a parsed config; throws ResolutionFails or ConfigError
Scenario build_scenario(const ScenarioConfig& cfg, const Tolerance& tol = {});

// builds every frame and the scenario, failing with a report instead of throwing
Report run(const ScenarioConfig& cfg, const RunOptions& opts);

enum class Format { json, table };
std::string emit(const Report& r, Format f);

// decoding helpers shared with tests
cplx parse_complex(const json& j);
CVector parse_vector(const json& j);
CMatrix parse_matrix(const json& j);
json complex_json(cplx z);
GroupElement parse_element(const Group& g, const json& j);

}  // namespace qrf
