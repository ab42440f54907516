#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "parafol/error.hpp"
#include "parafol/verify.hpp"

using namespace parafol;

namespace {

SuiteOptions opts(const std::string& scenario, int grid) {
  SuiteOptions o;
  o.scenario = scenario;
  o.grid = {grid, grid, grid};
  return o;
}

const CheckResult& find(const ChartReport& c, const std::string& name) {
  for (const auto& k : c.checks)
    if (k.name == name) return k;
  throw std::runtime_error("no check " + name);
}

std::vector<std::vector<double>> csv_rows(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("tolerance overrides") {
    Tolerances t;
    t.set("ke", 1e-3);
    CHECK(t.ke == 1e-3);
    CHECK_THROWS_AS(t.set("nope", 1.0), Error);
    CHECK_THROWS_AS(t.set("ke", -1.0), Error);
    CHECK_THROWS_AS(t.set("ke", std::nan("")), Error);
  }

  TEST_CASE("scenario errors") {
    try {
      build_scenario(opts("klein-bottle", 4));
      FAIL("unknown scenario accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnknownScenario);
    }
    SuiteOptions o = opts("transposition", 4);
    o.side = "up";
    CHECK_THROWS_AS(build_scenario(o), Error);
    SuiteOptions b = opts("knot", 4);
    b.braid = "n=2: q1";
    try {
      build_scenario(b);
      FAIL("malformed braid accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
    }
  }

  TEST_CASE("resource guard") {
    SuiteOptions o = opts("sphere", 400);
    try {
      run_suite(o);
      FAIL("oversized grid accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kResource);
    }
  }

  TEST_CASE("parabolic torus passes; Reeb reports Ke without gating") {
    const VerificationReport r = run_suite(opts("parabolic-torus", 16));
    CHECK(r.pass);
    REQUIRE(r.charts.size() == 1);
    CHECK(r.charts[0].points > 0);
    CHECK(find(r.charts[0], "ke_analytic").value < 1e-6);
    CHECK(find(r.charts[0], "core_regularity").value < 1e-10);

    const VerificationReport reeb = run_suite(opts("reeb", 16));
    CHECK(reeb.pass);
    CHECK(find(reeb.charts[0], "ke_analytic").sense == "report_only");
  }

  TEST_CASE("corrupted form fails integrability") {
    SuiteOptions o = opts("reeb", 32);
    o.corrupt_alpha = true;
    const VerificationReport r = run_suite(o);
    CHECK_FALSE(r.pass);
    const CheckResult& f = find(r.charts[0], "frobenius");
    CHECK_FALSE(f.pass);
    CHECK(f.value > 1e-3);
    CHECK(f.argmax[0] > 0.0);
    CHECK(find(r.charts[0], "spd_min_eig").pass);
  }

  TEST_CASE("reports are identical across worker counts") {
    SuiteOptions a = opts("turbularization", 12);
    a.threads = 1;
    SuiteOptions b = a;
    b.threads = 5;
    const std::string ja = canonical_dump(report_to_json(run_suite(a)));
    const std::string jb = canonical_dump(report_to_json(run_suite(b)));
    CHECK(ja == jb);
    CHECK(ja.find("wall_seconds") == std::string::npos);
    CHECK(canonical_dump(report_to_json(run_suite(a), true)).find("wall_seconds") != std::string::npos);
  }

  TEST_CASE("emit_report writes identical bytes for identical runs") {
    const std::string p1 = "verify_test_report_1.json", p2 = "verify_test_report_2.json";
    emit_report(run_suite(opts("torus-cylinder", 10)), p1);
    emit_report(run_suite(opts("torus-cylinder", 10)), p2);
    const std::string a = slurp(p1);
    CHECK(!a.empty());
    CHECK(a == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
    CHECK_THROWS_AS(emit_report(run_suite(opts("torus-cylinder", 4)), "/nonexistent/dir/x.json"), Error);
  }

  TEST_CASE("canonical dump") {
    const nlohmann::json j = {{"b", 0.1}, {"a", {1, 2.5}}, {"c", {{"z", true}, {"y", nullptr}}}};
    const std::string s = canonical_dump(j);
    CHECK(s.find("\"a\"") < s.find("\"b\""));
    CHECK(s.find("0.1") != std::string::npos);
    CHECK(s.find("0.10000") == std::string::npos);
    CHECK(canonical_dump(nlohmann::json(1.0 / 3.0)) == "0.333333333333\n");
  }

  TEST_CASE("deviations are reported for the repaired cylinder table") {
    const VerificationReport r = run_suite(opts("torus-cylinder", 4));
    CHECK(r.deviations.size() == 3);
  }

  TEST_CASE("surgery with the identity leaves shared chart residuals unchanged") {
    SuiteOptions k = opts("knot", 10);
    k.braid = "n=2: s1";
    k.finite_difference = false;
    SuiteOptions s = k;
    s.scenario = "surgery";
    s.surgery = "1,0,0,1";
    const VerificationReport rk = run_suite(k);
    const VerificationReport rs = run_suite(s);
    std::size_t shared = 0;
    for (const auto& a : rk.charts)
      for (const auto& b : rs.charts)
        if (a.chart == b.chart) {
          ++shared;
          REQUIRE(a.checks.size() == b.checks.size());
          for (std::size_t i = 0; i < a.checks.size(); ++i)
            CHECK(std::fabs(a.checks[i].value - b.checks[i].value) <= 1e-12);
        }
    CHECK(shared == rk.charts.size());
    CHECK(rs.pass);
  }

  TEST_CASE("field samples") {
    SuiteOptions o = opts("parabolic-torus", 4);
    const auto ke = csv_rows(sample_field(o, "parabolic_solid_torus", "Ke", "t=0", 40));
    CHECK(ke.size() == 1600);
    for (const auto& r : ke)
      if (!std::isnan(r[2])) CHECK(std::fabs(r[2]) < 1e-6);

    const auto fr = csv_rows(sample_field(opts("thick-reeb", 4), "thick_reeb", "frobenius", "phi=1", 30));
    for (const auto& r : fr)
      if (!std::isnan(r[2])) CHECK(std::fabs(r[2]) < 1e-12);

    const auto h = csv_rows(sample_field(opts("transposition", 4), "transposition", "H", "r=0.3", 30));
    double hmax = 0.0;
    for (const auto& r : h)
      if (!std::isnan(r[2])) hmax = std::fmax(hmax, std::fabs(r[2]));
    CHECK(hmax > 1e-3);

    CHECK_THROWS_AS(sample_field(o, "parabolic_solid_torus", "volume", "t=0", 4), Error);
    CHECK_THROWS_AS(sample_field(o, "nope", "Ke", "t=0", 4), Error);
    CHECK_THROWS_AS(sample_field(o, "parabolic_solid_torus", "Ke", "q=0", 4), Error);
    CHECK_THROWS_AS(sample_field(o, "parabolic_solid_torus", "Ke", "t", 4), Error);
  }
}
