#include <algorithm>
#include <optional>

#include "parafol/error.hpp"
#include "parafol/models.hpp"

namespace parafol {

namespace {

Segment transition_to(double lo, double hi, Formula to) {
  Segment s = Segment::transition(lo, hi);
  s.to = to;
  return s;
}

enum class Layout { kRadialFirst, kRadialLast };

// Charts whose data depend on one radial coordinate only.
FoliatedChart radial_chart(const std::string& name, const RadialProfiles& p, Layout layout,
                           std::optional<double> core, nlohmann::json descriptor, double euclidean_core = 0.1) {
  FoliatedChart fc;
  fc.name = name;
  const double lo = p.f.domain_lo();
  const double hi = p.f.domain_hi();
  const SmoothProfile f = p.f;
  const SmoothProfile G = p.G;
  descriptor["profiles"] = {{"f", f.to_json()}, {"G", G.to_json()}};
  fc.descriptor = std::move(descriptor);

  if (layout == Layout::kRadialFirst) {
    // (r, phi, t), metric diag(1, G(r), 1)
    fc.box.names = {"r", "phi", "t"};
    fc.box.lo = {lo, 0.0, 0.0};
    fc.box.hi = {hi, kTwoPi, kTwoPi};
    fc.box.periodic = {false, true, true};
    fc.box.radial_axis = 0;
    fc.box.excluded_core_radius = core;
    // Radius below which G = r^2, so the metric is euclidean in Cartesian (x, y, t).
    if (core) fc.descriptor["euclidean_core_radius"] = std::min(0.1, euclidean_core);
    fc.metric.eval = [G](const PointD& q) { return diag3<Dual>(Dual(1.0), G(q[0]), Dual(1.0)); };
    fc.alpha.eval = [f](const PointD& q) {
      const Dual fr = f(q[0]);
      return Vec3T<Dual>{fr, Dual(0.0), 1.0 - fr};
    };
    fc.leaf_frame = [f](const Point& q) {
      const double fr = f(q[0]);
      return std::array<Vec3, 2>{Vec3{0.0, 1.0, 0.0}, Vec3{1.0 - fr, 0.0, -fr}};
    };
  } else {
    // (phi, t, r), metric diag(G(r), 1, 1)
    fc.box.names = {"phi", "t", "r"};
    fc.box.lo = {0.0, 0.0, lo};
    fc.box.hi = {kTwoPi, kTwoPi, hi};
    fc.box.periodic = {true, true, false};
    fc.box.radial_axis = 2;
    fc.metric.eval = [G](const PointD& q) { return diag3<Dual>(G(q[2]), Dual(1.0), Dual(1.0)); };
    fc.alpha.eval = [f](const PointD& q) {
      const Dual fr = f(q[2]);
      return Vec3T<Dual>{Dual(0.0), 1.0 - fr, fr};
    };
    fc.leaf_frame = [f](const Point& q) {
      const double fr = f(q[2]);
      return std::array<Vec3, 2>{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, -fr, 1.0 - fr}};
    };
  }
  fc.box.validate();
  return fc;
}

}  // namespace

RadialProfiles reeb_profiles() {
  return {make_bump(0.0, 1.0, 0.0, 1.0, 0.1), make_piecewise({Segment::square(0.0, 1.0)})};
}

RadialProfiles thick_reeb_profiles() {
  // No flat zone at r = 1, so the torus {r = 1} is the only compact leaf.
  Segment up = Segment::transition(0.0, 1.0, 0.0, 1.0);
  up.margin_lo = 0.1;
  up.margin_hi = 0.0;
  Segment down = Segment::transition(1.0, 2.0, 1.0, 0.0);
  down.margin_lo = 0.0;
  down.margin_hi = 0.1;
  return {make_piecewise({up, down}), make_piecewise({Segment::square(0.0, 2.0)})};
}

RadialProfiles solid_torus_profiles() {
  const double third = 1.0 / 3.0;
  SmoothProfile f = make_piecewise({Segment::constant(0.0, third, 0.0), Segment::transition(third, 2.0 * third),
                                    Segment::constant(2.0 * third, 1.0, 1.0)});
  SmoothProfile G = make_piecewise(
      {Segment::square(0.0, 0.25), Segment::transition(0.25, third), Segment::constant(third, 1.0, 1.0)});
  return {std::move(f), std::move(G)};
}

RadialProfiles torus_cylinder_profiles() {
  const double third = 1.0 / 3.0;
  SmoothProfile f = make_piecewise({Segment::constant(0.0, third, 1.0), Segment::transition(third, 2.0 * third),
                                    Segment::constant(2.0 * third, 1.0, 0.0)});
  // Dip from 1 down to 1/2, then up into r^2 at r = 4/5.
  SmoothProfile G = make_piecewise({Segment::constant(0.0, 2.0 * third, 1.0),
                                    transition_to(2.0 * third, 0.75, Formula::constant(0.5)),
                                    Segment::transition(0.75, 0.8), Segment::square(0.8, 1.0)});
  return {std::move(f), std::move(G)};
}

RadialProfiles tube_profiles(double e) {
  if (!(e > 0.0)) throw Error(ErrorCode::kParameter, "tube radius must be positive");
  SmoothProfile f = make_piecewise({Segment::constant(0.0, e / 6.0, 0.0), Segment::transition(e / 6.0, e / 3.0),
                                    Segment::constant(e / 3.0, 2.0 * e / 3.0, 1.0),
                                    Segment::transition(2.0 * e / 3.0, 5.0 * e / 6.0),
                                    Segment::constant(5.0 * e / 6.0, e, 0.0)});
  const double c0 = (e / 6.0) * (e / 6.0);
  SmoothProfile G = make_piecewise({Segment::square(0.0, e / 8.0), Segment::transition(e / 8.0, e / 6.0),
                                    Segment::constant(e / 6.0, 5.0 * e / 6.0, c0),
                                    Segment::transition(5.0 * e / 6.0, 6.0 * e / 7.0),
                                    Segment::square(6.0 * e / 7.0, e)});
  return {std::move(f), std::move(G)};
}

FoliatedChart reeb_solid_torus() {
  return radial_chart("reeb", reeb_profiles(), Layout::kRadialFirst, 0.02, {{"model", "reeb"}, {"parabolic", false}});
}

FoliatedChart thick_reeb_torus() {
  return radial_chart("thick_reeb", thick_reeb_profiles(), Layout::kRadialFirst, 0.02, {{"model", "thick_reeb"}, {"parabolic", false}});
}

FoliatedChart parabolic_solid_torus(const std::string& name) {
  return radial_chart(name, solid_torus_profiles(), Layout::kRadialFirst, 0.02, {{"model", "parabolic_solid_torus"}});
}

FoliatedChart parabolic_torus_cylinder() {
  nlohmann::json d = {{"model", "parabolic_torus_cylinder"}};
  d["deviations"] = {
      "radial coordinate taken on [0, 1]; the profiles are only defined there",
      "metric entry g_rr taken as 1; a zero entry would make the metric degenerate",
      "G dips from 1 to 1/2 on [2/3, 3/4) and rises into r^2 at r = 4/5 (value 0.64)",
  };
  return radial_chart("torus_cylinder", torus_cylinder_profiles(), Layout::kRadialLast, std::nullopt, d);
}

FoliatedChart tube_chart(const std::string& name, double epsilon) {
  nlohmann::json d = {{"model", "thick_reeb_tube"}, {"epsilon", epsilon}};
  d["deviations"] = {
      "G = r^2 on [0, eps/8) instead of 0, keeping the metric regular at the core",
      "constant middle value of G is (eps/6)^2 so the tube joins r^2 monotonically",
  };
  FoliatedChart fc = radial_chart(name, tube_profiles(epsilon), Layout::kRadialFirst, 0.02 * epsilon, d, epsilon / 8.0);
  fc.box.names = {"rho", "theta", "t"};
  return fc;
}

}  // namespace parafol
