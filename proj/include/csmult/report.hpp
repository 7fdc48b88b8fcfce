#pragma once

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csmult {

using ordered_json = nlohmann::ordered_json;

enum class Verdict { pass, fail, not_asserted };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_asserted: return "not-asserted";
  }
  return "unknown";
}

/// One named numeric check. expected/tol are absent for observational rows.
struct CheckRecord {
  std::string check;
  std::string name;
  double value = 0.0;
  std::optional<double> expected;
  std::optional<double> tol;
  Verdict verdict = Verdict::not_asserted;
  double wall_time_ms = 0.0;
  ordered_json details = ordered_json::object();
};

struct RunReport {
  ordered_json config_echo = ordered_json::object();
  std::vector<CheckRecord> checks;

  bool any_fail() const {
    for (const CheckRecord& c : checks)
      if (c.verdict == Verdict::fail) return true;
    return false;
  }
};

/// Deterministic shortest-roundtrip-ish formatting shared by CSV and console.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline ordered_json to_json(const CheckRecord& r) {
  ordered_json j;
  j["check"] = r.check;
  j["name"] = r.name;
  j["value"] = r.value;
  if (r.expected) j["expected"] = *r.expected;
  if (r.tol) j["tol"] = *r.tol;
  j["verdict"] = to_string(r.verdict);
  j["wall_time_ms"] = r.wall_time_ms;
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

inline ordered_json to_json(const RunReport& rep) {
  ordered_json j;
  j["config"] = rep.config_echo;
  ordered_json arr = ordered_json::array();
  for (const CheckRecord& c : rep.checks) arr.push_back(to_json(c));
  j["checks"] = arr;
  j["any_fail"] = rep.any_fail();
  return j;
}

inline std::string to_csv(const RunReport& rep) {
  std::string out = "check,name,value,expected,tol,verdict,wall_time_ms\n";
  for (const CheckRecord& c : rep.checks) {
    out += c.check;
    out += ',';
    out += c.name;
    out += ',';
    out += format_double(c.value);
    out += ',';
    if (c.expected) out += format_double(*c.expected);
    out += ',';
    if (c.tol) out += format_double(*c.tol);
    out += ',';
    out += to_string(c.verdict);
    out += ',';
    out += format_double(c.wall_time_ms);
    out += '\n';
  }
  return out;
}

inline void write_report_files(const RunReport& rep, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream js(out_dir / "report.json");
    if (!js) throw std::runtime_error("write_report_files: cannot open report.json");
    js << to_json(rep).dump(2) << "\n";
  }
  {
    std::ofstream cs(out_dir / "summary.csv");
    if (!cs) throw std::runtime_error("write_report_files: cannot open summary.csv");
    cs << to_csv(rep);
  }
}

}  // namespace csmult
