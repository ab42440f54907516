#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "parafol/geometry.hpp"
#include "parafol/smooth1d.hpp"

namespace parafol {

// Radial models use the one-form f(r) dr + (1 - f(r)) dt and, for the
// parabolic variants, a metric with a single profile G(r) on the diagonal.
struct RadialProfiles {
  SmoothProfile f;
  SmoothProfile G;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.14159265358979323846264338327950;

RadialProfiles reeb_profiles();
RadialProfiles thick_reeb_profiles();
RadialProfiles solid_torus_profiles();     // f: 0 | up | 1 on thirds; G: r^2 | up | 1
RadialProfiles torus_cylinder_profiles();  // f: 1 | down | 0; G: 1 | dip | r^2
RadialProfiles tube_profiles(double epsilon);

// Reeb component on D^2 x S^1 with the default polar metric diag(1, r^2, 1).
FoliatedChart reeb_solid_torus();
// Turbularization profile on r in [0, 2] with one compact leaf at r = 1.
FoliatedChart thick_reeb_torus();
// Parabolic thick Reeb component: totally geodesic disks near the core and
// totally geodesic tori near the boundary.
FoliatedChart parabolic_solid_torus(const std::string& name = "parabolic_solid_torus");
// T^2 x [0, 1] in coordinates (phi, t, r).
FoliatedChart parabolic_torus_cylinder();
// One thick Reeb tube of radius epsilon, coordinates (rho, theta, t).
FoliatedChart tube_chart(const std::string& name, double epsilon);

// ---------------------------------------------------------------------------
// Staged interpolation between two surface metrics on Sigma x [0, 1].

struct SurfaceDomain {
  std::array<std::string, 2> names{"u", "v"};
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
  std::array<bool, 2> periodic{false, false};
};

using SurfaceTensor = std::function<Mat2D(const Vec2D&)>;
using SurfaceScalar = std::function<Dual(const Vec2D&)>;

struct InterpolationInput {
  SurfaceDomain domain;
  SurfaceTensor G;      // coordinate components of the metric at t = 0
  SurfaceTensor frame;  // columns X0, Y0: an H-orthonormal frame
  SurfaceScalar cutoff;  // 1 where G != H, 0 near the boundary
};

struct InterpolationConfig {
  double D = 0.0;  // <= 0: 1 + max over sampled Sigma of (a + |b|, c + |b|)
  std::array<double, 5> t{0.2, 0.4, 0.6, 0.8, 1.0};
  double collar_width = 0.1;
  double time_scale = 1.0;  // g_tt of the block
  int check_samples = 24;   // per surface axis for the positive-definite sweep
};

struct InterpolationBlock {
  FoliatedChart chart;  // coordinates (u, v, t)
  double D = 0.0;
  std::array<double, 5> t{};
  // Surface metric in the H-orthonormal frame at (u, v, t).
  std::function<Mat2D(const PointD&)> frame_block;
  // (a, b, c) of G in the frame at (u, v).
  std::function<std::array<double, 3>(const Vec2&)> coefficients;

  // 1..5 for the stage containing t, 6 past the last stage.
  int stage(double time) const;
};

InterpolationBlock interpolation_block(const InterpolationInput& in, const InterpolationConfig& cfg);

// Cutoff equal to 0 within `width / 2` of every non-periodic edge and 1 at
// distance >= width.
SurfaceScalar collar_cutoff(const SurfaceDomain& domain, double width);

// Increasing bump that is 0 before [lo, hi] and 1 after, on [0, 1].
SmoothProfile stage_bump(double lo, double hi);

// ---------------------------------------------------------------------------
// Trivial turbularization: thick Reeb tubes around vertical circles through
// the vertices of a regular polygon.

inline constexpr double kPolygonRadius = 0.125;

struct TurbularizationLayout {
  int n = 0;
  std::vector<Vec2> vertices;
  double epsilon = 0.0;
  double min_vertex_distance = 0.0;
};

double epsilon_rule(int n);
std::vector<Vec2> polygon_vertices(int n);

struct Turbularization {
  TurbularizationLayout layout;
  std::vector<FoliatedChart> tubes;  // named tube0 .. tube<n-1>
};

Turbularization trivial_turbularization(int n);
Turbularization trivial_turbularization(int n, double epsilon);

// Physical metric (Cartesian spatial block, unit dT^2) and defining form of
// a disk region containing thick Reeb tubes at the given centres.
struct TubedDisk {
  std::vector<Vec2> centers;
  double epsilon = 0.0;
  RadialProfiles profiles;

  Mat2D spatial_metric(const Dual& x, const Dual& y) const;
  Vec3T<Dual> form(const Dual& x, const Dual& y) const;  // (dx, dy, dT) components
};
TubedDisk make_tubed_disk(std::vector<Vec2> centers, double epsilon);

// ---------------------------------------------------------------------------
// Parabolic transposition of two strings on D^2(1/3) x [0, 1].

enum class TwistSide { kLeft, kRight };

inline constexpr double kTwistPlateau = 0.25;
inline constexpr double kTranspositionRadius = 1.0 / 3.0;

struct TranspositionConfig {
  TwistSide side = TwistSide::kLeft;
  double delta = 0.02;
  SmoothProfile twist_profile;  // +-pi on [0, 1/4], 0 on (1/3 - delta, 1/3]
  SmoothProfile time_profile;   // increasing bump on [0, 1]
  // Physical placement: disk radius = spatial_scale / 3, duration = time_scale.
  double spatial_scale = 1.0;
  double time_scale = 2.0;
  double string_offset = kPolygonRadius;
  double tube_radius = 0.0625;
};

TranspositionConfig default_transposition(TwistSide side);
SmoothProfile twist_profile(TwistSide side, double delta);

struct Transposition {
  FoliatedChart chart;             // composite in (r, phi, t)
  FoliatedChart untwisted;         // product of the two-string disk, same coordinates
  TranspositionConfig config;
  InterpolationBlock annulus;      // staged block on the twisted annulus
  // Phi(r, phi, t) = (r, phi + h(t) f(r), t) on the twisted half.
  std::function<PointD(const PointD&)> twist;
  // Physical offset (x, y) from the disk centre and time fraction for a chart point.
  std::function<Vec3T<Dual>(const PointD&)> to_physical;
};

Transposition parabolic_transposition(const TranspositionConfig& cfg);

}  // namespace parafol
