#pragma once

// Verification reports: one case per check, JSON with a versioned schema.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace acx {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "acx-report/1";

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Residuals are printed with fixed precision so reports diff cleanly.
inline Json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return std::stod(buf);
}

struct CaseResult {
  std::string id;
  std::string inputs_digest;
  Json expected;
  Json observed;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::string suite;
  Json config = Json::object();
  std::vector<CaseResult> cases;
  double timing_ms = 0.0;

  /// Records a case; pass iff residual ≤ tol.
  CaseResult& add(std::string id, const std::string& inputs, Json expected, Json observed, double residual,
                  double tol) {
    CaseResult c{std::move(id), fnv1a_hex(inputs), std::move(expected), std::move(observed), residual, tol,
                 residual <= tol};
    cases.push_back(std::move(c));
    return cases.back();
  }

  int passed() const {
    int n = 0;
    for (const auto& c : cases) n += c.pass ? 1 : 0;
    return n;
  }
  int failed() const { return static_cast<int>(cases.size()) - passed(); }
  bool ok() const { return failed() == 0 && !cases.empty(); }

  double max_residual() const {
    double m = 0.0;
    for (const auto& c : cases) m = std::max(m, c.residual);
    return m;
  }

  Json to_json(bool with_timing = true) const {
    Json j;
    j["schema"] = kReportSchema;
    j["suite"] = suite;
    j["config"] = config;
    Json cs = Json::array();
    for (const auto& c : cases) {
      cs.push_back({{"id", c.id},
                    {"inputs_digest", c.inputs_digest},
                    {"expected", c.expected},
                    {"observed", c.observed},
                    {"residual", json_number(c.residual)},
                    {"tolerance", json_number(c.tolerance)},
                    {"pass", c.pass}});
    }
    j["cases"] = cs;
    j["summary"] = {{"passed", passed()}, {"failed", failed()}};
    if (with_timing) j["timing_ms"] = json_number(timing_ms);
    return j;
  }
};

}  // namespace acx
