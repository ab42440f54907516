#include <cmath>
#include <random>

#include "doctest.h"
#include "parafol/error.hpp"
#include "parafol/models.hpp"

using namespace parafol;

namespace {

Point random_point(const ChartBox& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.02, 0.98);
  Point p;
  for (int k = 0; k < 3; ++k) p[k] = b.lo[k] + U(rng) * (b.hi[k] - b.lo[k]);
  if (b.excluded_core_radius) p[b.radial_axis] = std::fmax(p[b.radial_axis], *b.excluded_core_radius);
  return p;
}

double max_abs_B(const CurvatureSample& s) {
  return std::fmax(std::fabs(s.B[0][0]), std::fmax(std::fabs(s.B[0][1]), std::fabs(s.B[1][1])));
}

// Constant H = I input with a bump-supported perturbation of G.
InterpolationInput perturbed(double amp) {
  InterpolationInput in;
  const SmoothProfile phi = make_piecewise({Segment::constant(0.0, 0.2, 0.0), Segment::transition(0.2, 0.4),
                                            Segment::constant(0.4, 0.6, 1.0), Segment::transition(0.6, 0.8),
                                            Segment::constant(0.8, 1.0, 0.0)});
  in.G = [phi, amp](const Vec2D& p) {
    const Dual w = phi(p[0]) * phi(p[1]);
    return Mat2D{{{1.0 + 0.5 * w, amp * w}, {amp * w, 1.0 + 0.25 * w}}};
  };
  in.frame = [](const Vec2D&) { return Mat2D{{{Dual(1.0), Dual(0.0)}, {Dual(0.0), Dual(1.0)}}}; };
  in.cutoff = collar_cutoff(in.domain, 0.1);
  return in;
}

}  // namespace

TEST_SUITE("local_models") {
  TEST_CASE("parabolic solid torus: flat leaves and totally geodesic zones") {
    const FoliatedChart fc = parabolic_solid_torus();
    std::mt19937_64 rng(1);
    for (int i = 0; i < 300; ++i) {
      const Point p = random_point(fc.box, rng);
      const CurvatureSample s = second_fundamental_form(fc, p);
      CHECK(std::fabs(s.Ke) < 1e-12);
      if (p[0] < 1.0 / 3.0 || p[0] > 2.0 / 3.0) CHECK(max_abs_B(s) < 1e-12);
      CHECK(integrability_residual(fc.alpha, p) == 0.0);
    }
  }

  TEST_CASE("torus cylinder is parabolic and logs its repairs") {
    const FoliatedChart fc = parabolic_torus_cylinder();
    CHECK(fc.box.names[2] == "r");
    std::mt19937_64 rng(2);
    for (int i = 0; i < 300; ++i) {
      const Point p = random_point(fc.box, rng);
      CHECK(std::fabs(second_fundamental_form(fc, p).Ke) < 1e-12);
    }
    REQUIRE(fc.descriptor.contains("deviations"));
    CHECK(fc.descriptor["deviations"].size() == 3);
  }

  TEST_CASE("thick Reeb torus") {
    const FoliatedChart fc = thick_reeb_torus();
    const Vec3 a = fc.alpha.value({1.0, 0.3, 0.2});
    CHECK(a[1] == 0.0);
    CHECK(a[2] == 0.0);
    CHECK(a[0] != 0.0);
    const auto p = thick_reeb_profiles();
    CHECK(p.f(0.0) == 0.0);
    CHECK(p.f(1.0) == 1.0);
    CHECK(p.f(1.999) == 0.0);
    for (double r = 0.11; r < 0.99; r += 0.01) CHECK(p.f.eval_with_derivs(r, 1)[1] > 0.0);
    for (double r = 1.01; r < 1.89; r += 0.01) CHECK(p.f.eval_with_derivs(r, 1)[1] < 0.0);
  }

  TEST_CASE("Reeb component") {
    const FoliatedChart fc = reeb_solid_torus();
    const Vec3 core = fc.alpha.value({0.01, 0.0, 0.0});
    CHECK(core[0] == 0.0);
    CHECK(core[2] == 1.0);
    const Vec3 edge = fc.alpha.value({1.0, 0.0, 0.0});
    CHECK(edge[0] == 1.0);
    CHECK(edge[2] == 0.0);
    CHECK(fc.descriptor["parabolic"] == false);
  }

  TEST_CASE("tube chart") {
    const double eps = 0.0625;
    const FoliatedChart fc = tube_chart("tube0", eps);
    CHECK(fc.box.hi[0] == eps);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) CHECK(std::fabs(second_fundamental_form(fc, random_point(fc.box, rng)).Ke) < 1e-9);
    const auto p = tube_profiles(eps);
    CHECK(p.G(eps) == doctest::Approx(eps * eps).epsilon(1e-15));
    CHECK(p.G(eps / 2) == doctest::Approx(eps * eps / 36).epsilon(1e-15));
    CHECK(p.f(eps / 2) == 1.0);
    CHECK(p.f(eps) == 0.0);
  }

  TEST_CASE("interpolation block: endpoints, stages and curvature identities") {
    const InterpolationBlock blk = interpolation_block(perturbed(0.2), InterpolationConfig{});
    CHECK(blk.stage(0.1) == 1);
    CHECK(blk.stage(0.5) == 3);
    CHECK(blk.stage(0.9) == 5);
    const FoliatedChart& fc = blk.chart;
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) {
      const Point p = random_point(fc.box, rng);
      const CurvatureSample s = second_fundamental_form(fc, p);
      CHECK(std::fabs(s.Ke) < 1e-12);
      const Mat2D m = blk.frame_block(seed(p));
      // B = -1/2 d/dt of the block in the frame
      CHECK(s.B[0][0] == doctest::Approx(-0.5 * m[0][0].d[2]).epsilon(1e-9).scale(1.0));
      CHECK(s.B[0][1] == doctest::Approx(-0.5 * m[0][1].d[2]).epsilon(1e-9).scale(1.0));
      CHECK(s.B[1][1] == doctest::Approx(-0.5 * m[1][1].d[2]).epsilon(1e-9).scale(1.0));
      const double det = m[0][0].d[2] * m[1][1].d[2] - m[0][1].d[2] * m[0][1].d[2];
      CHECK(std::fabs(det) < 1e-12);
    }
    const auto abc = blk.coefficients({0.5, 0.5});
    const Mat2D start = blk.frame_block(lift({0.5, 0.5, 0.0}));
    CHECK(start[0][0].v == abc[0]);
    CHECK(start[0][1].v == abc[1]);
    const Mat2D end = blk.frame_block(lift({0.5, 0.5, 1.0}));
    CHECK(end[0][0].v == 1.0);
    CHECK(end[0][1].v == 0.0);
    CHECK(end[1][1].v == 1.0);
  }

  TEST_CASE("interpolation block: Ke formula on a non-staged family") {
    // a = c = 1 + t, b = 0 realised as a chart: Ke = 1/4 at t = 0.
    FoliatedChart fc;
    fc.metric.eval = [](const PointD& q) { return diag3<Dual>(1.0 + q[2], 1.0 + q[2], Dual(1.0)); };
    fc.alpha.eval = [](const PointD&) { return Vec3T<Dual>{Dual(0.0), Dual(0.0), Dual(1.0)}; };
    CHECK(second_fundamental_form(fc, {0.5, 0.5, 0.0}).Ke == doctest::Approx(0.25));
  }

  TEST_CASE("interpolation block: errors") {
    InterpolationConfig low;
    low.D = 0.05;
    try {
      interpolation_block(perturbed(0.2), low);
      FAIL("expected a positive-definiteness failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kPositiveDefinite);
      const std::string msg = e.what();
      CHECK(msg.find("stage") != std::string::npos);
      CHECK(msg.find(" at (") != std::string::npos);
    }
    InterpolationInput bad = perturbed(0.2);
    bad.cutoff = [](const Vec2D&) { return Dual(0.0); };
    CHECK_THROWS_AS(interpolation_block(bad, InterpolationConfig{}), Error);
    InterpolationConfig order;
    order.t = {0.2, 0.1, 0.6, 0.8, 1.0};
    CHECK_THROWS_AS(interpolation_block(perturbed(0.2), order), Error);
  }

  TEST_CASE("trivial turbularization layout") {
    CHECK(epsilon_rule(1) == 0.0625);
    const Turbularization t = trivial_turbularization(4);
    CHECK(t.tubes.size() == 4);
    CHECK(t.tubes[3].name == "tube3");
    CHECK(t.layout.epsilon == doctest::Approx(0.25 * t.layout.min_vertex_distance));
    for (const auto& v : polygon_vertices(5)) CHECK(std::hypot(v[0], v[1]) == doctest::Approx(kPolygonRadius));
    try {
      trivial_turbularization(2, 0.2);
      FAIL("expected a layout failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kLayout);
    }
    CHECK_THROWS_AS(trivial_turbularization(0), Error);
  }

  TEST_CASE("parabolic transposition") {
    for (TwistSide side : {TwistSide::kLeft, TwistSide::kRight}) {
      const Transposition tr = parabolic_transposition(default_transposition(side));
      const SmoothProfile& f = tr.config.twist_profile;
      const double plateau = side == TwistSide::kLeft ? kPi : -kPi;
      CHECK(f(0.1) == plateau);
      CHECK(f(kTranspositionRadius) == 0.0);
      CHECK(tr.config.time_profile(0.0) == 0.0);
      CHECK(tr.config.time_profile(1.0) == 1.0);
      std::mt19937_64 rng(side == TwistSide::kLeft ? 7 : 8);
      double worst = 0.0;
      for (int i = 0; i < 400; ++i) {
        const Point p = random_point(tr.chart.box, rng);
        worst = std::fmax(worst, std::fabs(second_fundamental_form(tr.chart, p).Ke));
        CHECK(std::fabs(integrability_residual(tr.chart.alpha, p)) < 1e-10);
      }
      CHECK(worst < 1e-6);
      // Once the twist completes, the strings have swapped: a rotation by +-pi.
      const Vec3T<Dual> x0 = tr.to_physical(lift({0.125, 0.0, 0.0}));
      const PointD moved = tr.twist(lift({0.125, 0.0, 1.0}));
      CHECK(std::fabs(std::cos(moved[1].v) + 1.0) < 1e-12);
      CHECK(x0[0].v == doctest::Approx(0.125));
    }
    TranspositionConfig wide = default_transposition(TwistSide::kLeft);
    wide.string_offset = 0.3;
    CHECK_THROWS_AS(parabolic_transposition(wide), Error);
  }
}
