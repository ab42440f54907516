#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "parafol/assembly.hpp"
#include "parafol/error.hpp"

using namespace parafol;

namespace {

void check_all_interfaces(const Atlas& a) {
  REQUIRE(!a.interfaces.empty());
  for (const auto& i : a.interfaces) {
    const InterfaceCheck c = check_interface(a, i);
    CAPTURE(i.chart_a);
    CAPTURE(i.chart_b);
    CHECK(c.samples > 0);
    CHECK(c.value_residual < 1e-10);
    CHECK(c.derivative_residual < 1e-6);
    CHECK(c.form_residual < 1e-10);
    CHECK(c.pass);
  }
}

}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("surgery boundary metric examples") {
    const IntMat2 id = surgery_boundary_metric_exact({1, 0, 0, 1});
    CHECK(id == IntMat2{{{1, 0}, {0, 1}}});
    CHECK(surgery_boundary_metric_exact({0, 1, -1, 0}) == IntMat2{{{1, 0}, {0, 1}}});
    const GluingMatrix m{1, 2, 1, 3};
    CHECK(surgery_boundary_metric_exact(m) == IntMat2{{{2, 5}, {5, 13}}});
    CHECK(printed_surgery_metric(m)[0][1] == 7);
    const Mat2 g = surgery_boundary_metric(m);
    CHECK(g[0][1] == 5.0);
  }

  TEST_CASE("surgery metric equals the integer pullback oracle") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
      const GluingMatrix m = oracle::random_unimodular(rng);
      REQUIRE(m.det() == 1);
      const IntMat2 e = surgery_boundary_metric_exact(m);
      CHECK(e == oracle::integer_pullback(m.a, m.b, m.c, m.d));
      CHECK(e[0][1] == e[1][0]);
      CHECK(e[0][0] * e[1][1] - e[0][1] * e[1][0] == 1);
      CHECK(e[0][0] > 0);
    }
  }

  TEST_CASE("gluing matrix parsing") {
    const GluingMatrix m = GluingMatrix::parse(" 1, 2 ,1,3");
    CHECK(m.d == 3);
    try {
      GluingMatrix::parse("1,2,3,4");
      FAIL("det -2 accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParameter);
    }
    try {
      GluingMatrix::parse("0,1,1,0");
      FAIL("det -1 accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParameter);
    }
    try {
      GluingMatrix::parse("1,2,x,3");
      FAIL("malformed accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
    }
  }

  TEST_CASE("sphere from two solid tori") {
    const Atlas a = sphere_two_tori();
    CHECK(a.has_chart("torus0"));
    CHECK(a.has_chart("torus1"));
    // boundary metric of each side is d phi^2 + dt^2
    const Mat3 g = a.chart("torus0").metric.value({1.0, 0.4, 0.2});
    CHECK(g[1][1] == 1.0);
    CHECK(g[2][2] == 1.0);
    check_all_interfaces(a);
  }

  TEST_CASE("trivial turbularization atlas") {
    const Atlas a = turbularization_atlas(3);
    CHECK(a.has_chart("tube2"));
    check_all_interfaces(a);
  }

  TEST_CASE("knot atlas for the unknot") {
    const Atlas a = turbularize_along_knot(parse_braid_word("n=2: s1"));
    for (const char* n : {"torus0", "torus1", "tube0", "tube1", "xpose0"}) CHECK(a.has_chart(n));
    CHECK(a.charts.size() == 5);
    REQUIRE(a.knot);
    CHECK(a.knot->blocks.size() == 1);
    CHECK(a.knot->blocks[0].lambda == doctest::Approx(3 * a.knot->presentation.crossings[0].radius));
    check_all_interfaces(a);
    const auto j = a.to_json();
    CHECK(j.contains("charts"));
    CHECK(j.contains("interfaces"));
    CHECK(j.contains("deviations"));
  }

  TEST_CASE("knot atlas stacks one block per letter") {
    const Atlas a = turbularize_along_knot(parse_braid_word("n=2: s1 s1^-1 s1"));
    CHECK(a.has_chart("xpose2"));
    REQUIRE(a.knot);
    CHECK(a.knot->blocks[1].crossing.generator.sign == -1);
  }

  TEST_CASE("links cannot be turbularized") {
    CHECK_THROWS_AS(turbularize_along_knot(parse_braid_word("n=2: s1 s1")), Error);
  }

  TEST_CASE("surgery on the unknot") {
    const Atlas base = turbularize_along_knot(parse_braid_word("n=2: s1"));
    for (const GluingMatrix m : {GluingMatrix{1, 0, 0, 1}, GluingMatrix{0, 1, -1, 0}}) {
      const Atlas s = dehn_surgery(base, m);
      CHECK(s.has_chart("collar"));
      CHECK(s.has_chart("surgery_torus"));
      check_all_interfaces(s);
      const auto& exact = s.construction["surgery"]["boundary_metric"];
      CHECK(exact[0][0] == 1);
      CHECK(exact[0][1] == 0);
    }
  }

  TEST_CASE("surgery metric deviation is recorded when the printed table differs") {
    const Atlas base = turbularize_along_knot(parse_braid_word("n=2: s1"));
    const Atlas s = dehn_surgery(base, {1, 2, 1, 3});
    const auto& sur = s.construction["surgery"];
    CHECK(sur.contains("printed_boundary_metric"));
    bool logged = false;
    for (const auto& d : s.deviations) logged = logged || d.find("m^T m") != std::string::npos;
    CHECK(logged);
  }

  TEST_CASE("knot boundary metric is diagonal") {
    const Atlas a = turbularize_along_knot(parse_braid_word("n=2: s1 s1 s1"));
    const Mat2 h = knot_boundary_metric(*a.knot);
    CHECK(h[0][1] == 0.0);
    CHECK(h[1][1] > 0.0);
  }
}
