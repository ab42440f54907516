#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "parafol/assembly.hpp"

namespace parafol {

struct Tolerances {
  double integrability = 1e-10;
  double ke = 1e-6;
  double ke_fd = 1e-4;
  double spd = 1e-6;  // floor for the minimum eigenvalue
  double frame = 1e-9;
  double alpha_frame = 1e-10;
  double core = 1e-10;
  double stage = 1e-10;
  double interface_value = 1e-10;
  double interface_derivative = 1e-6;
  double interface_form = 1e-10;

  // Throws kParameter for an unknown name or a non-positive value.
  void set(const std::string& name, double value);
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  std::string scenario;
  std::string braid = "n=2: s1 s1 s1";
  std::string surgery = "1,2,1,3";
  int n = 2;                   // turbularization strings
  std::string side = "left";   // transposition
  std::array<int, 3> grid{48, 48, 48};
  Tolerances tol;
  int threads = 0;  // 0: hardware concurrency
  bool corrupt_alpha = false;  // adds 0.1 r^2 dphi to polar charts
  std::uint64_t seed = 1;      // interp-block pairs
  bool finite_difference = true;
};

// A scenario's charts and interfaces plus model-specific hooks.
struct Scenario {
  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  Atlas atlas;
  std::vector<InterpolationBlock> blocks;      // interp-block
  std::optional<Transposition> transposition;  // transposition
};

Scenario build_scenario(const SuiteOptions& opts);

struct CheckResult {
  std::string name;
  std::string sense = "max_below";  // "min_above", or "report_only" (never gates)
  double value = 0.0;  // max |x|, or the minimum for min_above
  double mean_abs = 0.0;
  Point argmax{};
  double tolerance = 0.0;
  bool pass = true;
};

struct ChartReport {
  std::string chart;
  std::array<int, 3> grid{};
  std::size_t points = 0;
  std::vector<CheckResult> checks;  // sorted by name
};

struct VerificationReport {
  std::string scenario;
  nlohmann::json parameters;
  std::vector<ChartReport> charts;  // sorted by chart name
  std::vector<InterfaceCheck> interfaces;
  InterfaceTolerances interface_tolerances;
  std::vector<CheckResult> global_checks;
  std::vector<std::string> deviations;
  bool pass = true;
  double wall_seconds = 0.0;
};

inline constexpr std::size_t kMaxGridPoints = 100'000'000;

VerificationReport run_suite(const SuiteOptions& opts);

// Sorted keys and %.12g doubles, so equal reports serialise to equal bytes.
std::string canonical_dump(const nlohmann::json& j);
nlohmann::json report_to_json(const VerificationReport& r, bool include_timing = false);
void emit_report(const VerificationReport& r, const std::string& path, bool include_timing = false);

// CSV over a 2-D slice such as "t=0" of one chart. Fields: Ke, H, k1, k2,
// min_eig, frobenius.
std::string sample_field(const SuiteOptions& opts, const std::string& chart, const std::string& field,
                         const std::string& slice, int resolution);

}  // namespace parafol
