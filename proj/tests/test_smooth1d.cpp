#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "parafol/error.hpp"
#include "parafol/models.hpp"
#include "parafol/smooth1d.hpp"

using namespace parafol;

namespace {

std::vector<std::pair<std::string, SmoothProfile>> all_profiles() {
  std::vector<std::pair<std::string, SmoothProfile>> out;
  out.emplace_back("bump", make_bump(0.0, 1.0, 0.0, 1.0, 0.1));
  out.emplace_back("bump_down", make_bump(-1.0, 2.0, 3.0, -1.0, 0.4));
  for (auto [name, p] : {std::pair{"solid_torus", solid_torus_profiles()}, std::pair{"cylinder", torus_cylinder_profiles()},
                         std::pair{"tube", tube_profiles(0.0625)}, std::pair{"reeb", reeb_profiles()},
                         std::pair{"thick_reeb", thick_reeb_profiles()}}) {
    out.emplace_back(std::string(name) + ".f", p.f);
    out.emplace_back(std::string(name) + ".G", p.G);
  }
  out.emplace_back("twist_left", twist_profile(TwistSide::kLeft, 0.02));
  out.emplace_back("twist_right", twist_profile(TwistSide::kRight, 0.02));
  out.emplace_back("stage", stage_bump(0.2, 0.4));
  return out;
}

}  // namespace

TEST_SUITE("smooth1d") {
  TEST_CASE("bump examples") {
    const SmoothProfile b = make_bump(0.0, 1.0, 0.0, 1.0, 0.1);
    CHECK(b(0.05) == 0.0);
    CHECK(b(0.95) == 1.0);
    CHECK(b(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    const auto d = b.eval_with_derivs(0.05, 1);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
  }

  TEST_CASE("step kernel is symmetric and flat at the ends") {
    for (double x : {0.0, 0.1, 0.3, 0.5, 0.77, 1.0}) {
      const auto a = smooth_step(x);
      const auto b = smooth_step(1.0 - x);
      CHECK(a[0] + b[0] == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-12));
    }
    CHECK(smooth_step(0.0)[1] == 0.0);
    CHECK(smooth_step(1.0)[2] == 0.0);
  }

  TEST_CASE("piecewise table examples") {
    const SmoothProfile G = solid_torus_profiles().G;
    CHECK(G(0.1) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(G(0.9) == 1.0);
    const SmoothProfile one = make_piecewise({Segment::constant(0.0, 1.0, 1.0)});
    for (double t : {0.0, 0.3, 1.0}) CHECK(one(t) == 1.0);
    const SmoothProfile sq = make_piecewise({Segment::square(0.0, 1.0)});
    const auto d = sq.eval_with_derivs(0.2, 2);
    CHECK(d[0] == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(d[2] == 2.0);
    const auto c = one.eval_with_derivs(0.7, 2);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == 0.0);
    CHECK(c[2] == 0.0);
  }

  TEST_CASE("construction errors") {
    CHECK_THROWS_AS(make_bump(1.0, 0.0, 0.0, 1.0, 0.1), Error);
    CHECK_THROWS_AS(make_bump(0.0, 1.0, 0.0, 1.0, 0.6), Error);
    CHECK_THROWS_AS(make_bump(0.0, 1.0, 0.0, 1.0, 0.0), Error);
    // gap
    CHECK_THROWS_AS(make_piecewise({Segment::constant(0.0, 0.4, 0.0), Segment::constant(0.5, 1.0, 0.0)}), Error);
    // overlap
    CHECK_THROWS_AS(make_piecewise({Segment::constant(0.0, 0.6, 0.0), Segment::constant(0.5, 1.0, 0.0)}), Error);
    // value jump without a transition
    CHECK_THROWS_AS(make_piecewise({Segment::constant(0.0, 0.5, 0.0), Segment::constant(0.5, 1.0, 1.0)}), Error);
    const SmoothProfile b = make_bump(0.0, 1.0, 0.0, 1.0, 0.1);
    try {
      b(1.5);
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDomain);
    }
  }

  TEST_CASE("analytic derivative matches extrapolated central differences") {
    for (const auto& [name, p] : all_profiles()) {
      CAPTURE(name);
      const double lo = p.domain_lo(), hi = p.domain_hi();
      const double h = 1e-5;
      // Richardson-extrapolated central difference, O(h^4).
      auto diff = [h](const std::function<double(double)>& f, double t) {
        const double d1 = (f(t + h) - f(t - h)) / (2 * h);
        const double d2 = (f(t + h / 2) - f(t - h / 2)) / h;
        return (4 * d2 - d1) / 3;
      };
      const std::function<double(double)> f0 = [&p](double t) { return p(t); };
      const std::function<double(double)> f1 = [&p](double t) { return p.eval_with_derivs(t, 1)[1]; };
      double worst = 0.0, worst2 = 0.0, scale = 1.0, scale2 = 1.0;
      for (int i = 0; i < 1000; ++i) {
        const double t = lo + 2 * h + (hi - lo - 4 * h) * (i + 0.5) / 1000.0;
        const auto d = p.eval_with_derivs(t, 2);
        scale = std::fmax(scale, std::fabs(d[1]));
        scale2 = std::fmax(scale2, std::fabs(d[2]));
        worst = std::fmax(worst, std::fabs(diff(f0, t) - d[1]));
        worst2 = std::fmax(worst2, std::fabs(diff(f1, t) - d[2]));
      }
      CHECK(worst / scale < 1e-6);
      CHECK(worst2 / scale2 < 1e-4);
    }
  }

  TEST_CASE("junctions are C2") {
    for (const auto& [name, p] : all_profiles()) {
      CAPTURE(name);
      for (const auto& s : p.segments()) {
        if (s.lo <= p.domain_lo()) continue;
        const auto l = p.eval_with_derivs(std::nextafter(s.lo, -1e9), 2);
        const auto r = p.eval_with_derivs(s.lo, 2);
        for (int k = 0; k < 3; ++k) CHECK(std::fabs(l[k] - r[k]) < 1e-9 * (1.0 + std::fabs(r[k])) + 1e-9);
      }
    }
  }

  TEST_CASE("transitions are monotone, bounded and flat on their margins") {
    for (const auto& [name, p] : all_profiles()) {
      CAPTURE(name);
      const auto& segs = p.segments();
      for (std::size_t i = 0; i < segs.size(); ++i) {
        const Segment& s = segs[i];
        if (s.kind != Segment::Kind::kTransition) continue;
        const double w = s.hi - s.lo;
        const double m0 = s.margin_lo >= 0 ? s.margin_lo : 0.1 * w;
        const double m1 = s.margin_hi >= 0 ? s.margin_hi : 0.1 * w;
        const double v0 = p(s.lo), v1 = p(std::nextafter(s.hi, s.lo));
        const bool constant_ends = (i == 0 || segs[i - 1].kind == Segment::Kind::kConstant) &&
                                   (i + 1 == segs.size() || segs[i + 1].kind == Segment::Kind::kConstant);
        int sign = 0;
        for (int k = 0; k <= 400; ++k) {
          const double t = s.lo + w * k / 400.0;
          if (t >= s.hi) break;
          const auto d = p.eval_with_derivs(t, 2);
          if (constant_ends) {
            CHECK(d[0] >= std::fmin(v0, v1) - 1e-15);
            CHECK(d[0] <= std::fmax(v0, v1) + 1e-15);
            const int sg = d[1] > 0 ? 1 : d[1] < 0 ? -1 : 0;
            if (sg) {
              if (!sign) sign = sg;
              CHECK(sg == sign);
            }
            if (t < s.lo + m0 || t > s.hi - m1) {
              CHECK(d[1] == 0.0);
              CHECK(d[2] == 0.0);
            }
          }
        }
      }
    }
  }

  TEST_CASE("profiles serialise their segment tables") {
    const auto j = solid_torus_profiles().G.to_json();
    CHECK(j.dump().find("square") != std::string::npos);
  }
}
