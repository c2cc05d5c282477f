#include "qrf/cli.hpp"

#include <cstdio>
#include <set>
#include <sstream>

namespace qrf {

namespace {

const std::set<std::string> kComplexKeys = {"amp", "hw_overlap", "value", "phase"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool is_complex_pair(const json& v) {
  return v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number();
}

std::string scalar(const std::string& key, const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    bool sci = key.find("residual") != std::string::npos || key.find("tol") != std::string::npos;
    return fmt(sci ? "%.3e" : "%.6f", v.get<double>());
  }
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

bool flat(const json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (x.is_structured() && !is_complex_pair(x)) return false;
  return true;
}

std::string inline_value(const std::string& key, const json& v) {
  if (is_complex_pair(v) && kComplexKeys.count(key))
    return format_complex({v[0].get<double>(), v[1].get<double>()}, 6);
  if (v.is_array()) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + inline_value(key, v[i]);
    return out + "]";
  }
  return scalar(key, v);
}

void render(std::ostream& os, const json& v, int indent) {
  std::string pad(indent, ' ');
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      const json& x = it.value();
      if (x.is_object() || (x.is_array() && !flat(x))) {
        os << pad << it.key() << ":\n";
        render(os, x, indent + 2);
      } else {
        os << pad << it.key() << ": " << inline_value(it.key(), x) << "\n";
      }
    }
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (x.is_object()) {
        // one line for small records of scalars
        bool simple = x.size() <= 4;
        for (auto it = x.begin(); it != x.end() && simple; ++it)
          simple = !it.value().is_structured() || is_complex_pair(it.value()) || flat(it.value());
        if (simple) {
          os << pad << "-";
          for (auto it = x.begin(); it != x.end(); ++it) os << " " << it.key() << "=" << inline_value(it.key(), it.value());
          os << "\n";
        } else {
          os << pad << "-\n";
          render(os, x, indent + 2);
        }
      } else if (x.is_array() && !flat(x)) {
        os << pad << "-\n";
        render(os, x, indent + 2);
      } else {
        os << pad << "- " << inline_value("", x) << "\n";
      }
    }
  } else {
    os << pad << scalar("", v) << "\n";
  }
}

std::string table(const json& doc) {
  std::ostringstream os;
  os << "qrf report  scenario=" << doc.value("scenario", "") << "  group=" << doc.value("group", "");
  if (doc.contains("kin_dim")) os << "  kin_dim=" << doc["kin_dim"].get<int>();
  if (doc.contains("phys_dim")) os << "  phys_dim=" << doc["phys_dim"].get<int>();
  os << "  seed=" << doc["seed"].get<std::uint64_t>() << "  tol=" << fmt("%.1e", doc["tolerance"].get<double>()) << "\n";
  for (const auto& t : doc.at("tasks")) {
    os << "\n[" << t.at("task").get<std::string>();
    if (t.contains("frame")) os << " " << t["frame"].get<std::string>();
    os << "]\n";
    if (t.contains("error")) os << "  error: " << t["error"].get<std::string>() << "\n";
    if (t.contains("diagnosis")) render(os, json{{"diagnosis", t["diagnosis"]}}, 2);
    if (t.contains("results")) render(os, t["results"], 2);
    for (const auto& c : t.at("checks")) {
      std::string name = c.at("name").get<std::string>();
      if (name.size() < 60) name.resize(60, ' ');
      os << "  " << (c.at("pass").get<bool>() ? "PASS" : "FAIL") << "  " << name;
      if (c.contains("residual"))
        os << "  residual=" << fmt("%.3e", c["residual"].get<double>()) << "  tol=" << fmt("%.1e", c["tolerance"].get<double>());
      if (c.contains("detail")) os << "  " << c["detail"].get<std::string>();
      os << "\n";
    }
  }
  const json& s = doc.at("summary");
  os << "\nsummary: " << s["passed"].get<int>() << "/" << s["checks"].get<int>() << " checks passed, "
     << s["failed"].get<int>() << " failed\n";
  return os.str();
}

}  // namespace

std::string emit(const Report& r, Format f) {
  if (f == Format::json) return r.doc.dump(2) + "\n";
  return table(r.doc);
}

}  // namespace qrf
