#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "torsionlab/document.hpp"

namespace torsionlab {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

enum class RunStatus { pass, failed, input_error };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::pass: return "PASS";
    case RunStatus::failed: return "FAILED";
    case RunStatus::input_error: return "INPUT ERROR";
  }
  return "FAILED";
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

struct RunReport {
  std::vector<std::string> command;
  ToleranceConfig tolerances;
  Json results = Json::object();
  Json conventions = Json::object();
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  std::string error;
  bool input_error = false;

  /// Records `value <= tolerance`.
  void check(const std::string& name, double value, double tolerance) {
    checks.push_back({name, value, tolerance, value <= tolerance});
  }

  RunStatus status() const {
    if (input_error) return RunStatus::input_error;
    if (!error.empty()) return RunStatus::failed;
    for (const auto& c : checks) {
      if (!c.passed) return RunStatus::failed;
    }
    return RunStatus::pass;
  }

  int exit_code() const {
    switch (status()) {
      case RunStatus::pass: return 0;
      case RunStatus::failed: return 1;
      case RunStatus::input_error: return 2;
    }
    return 1;
  }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["status"] = to_string(status());
    j["tolerances"] = {{"rank_tol", tolerances.rank_tol},
                       {"cluster_tol", tolerances.cluster_tol},
                       {"check_tol", tolerances.check_tol}};
    j["conventions"] = conventions;
    j["results"] = results;
    Json cs = Json::array();
    for (const auto& c : checks) {
      cs.push_back({{"name", c.name},
                    {"value", c.value},
                    {"tolerance", c.tolerance},
                    {"passed", c.passed}});
    }
    j["checks"] = std::move(cs);
    j["warnings"] = warnings;
    if (!error.empty()) j["error"] = error;
    return j;
  }

  std::string to_text() const {
    std::ostringstream out;
    std::string cmd;
    for (const auto& c : command) cmd += (cmd.empty() ? "" : " ") + c;
    out << "command      " << cmd << "\n";
    out << "status       " << to_string(status()) << "\n";
    for (const auto& [k, v] : conventions.items()) out << pad(k) << render(v) << "\n";
    for (const auto& [k, v] : results.items()) out << pad(k) << render(v) << "\n";
    for (const auto& c : checks) {
      out << "check        " << c.name << ": " << format_number(c.value)
          << " <= " << format_number(c.tolerance) << "  " << (c.passed ? "ok" : "FAILED")
          << "\n";
    }
    for (const auto& w : warnings) out << "warning      " << w << "\n";
    if (!error.empty()) out << "error        " << error << "\n";
    return out.str();
  }

 private:
  static std::string pad(const std::string& k) {
    return k.size() >= 13 ? k + " " : k + std::string(13 - k.size(), ' ');
  }

  static std::string render(const Json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      std::string s = "[";
      for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + render(v[i]);
      return s + "]";
    }
    if (v.is_object()) {
      std::string s = "{";
      bool first = true;
      for (const auto& [k, x] : v.items()) {
        s += (first ? "" : ", ") + k + ": " + render(x);
        first = false;
      }
      return s + "}";
    }
    return v.dump();
  }
};

}  // namespace torsionlab
