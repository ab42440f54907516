#include <algorithm>
#include <limits>
#include <memory>
#include <cmath>
#include <sstream>

#include "parafol/error.hpp"
#include "parafol/models.hpp"

namespace parafol {

double epsilon_rule(int n) {
  if (n < 1) throw Error(ErrorCode::kParameter, "number of strings must be positive");
  if (n == 1) return 0.0625;
  return 0.25 * 2.0 * kPolygonRadius * std::sin(kPi / n);
}

std::vector<Vec2> polygon_vertices(int n) {
  if (n < 1) throw Error(ErrorCode::kParameter, "number of strings must be positive");
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = kTwoPi * k / n;
    out.push_back({kPolygonRadius * std::cos(a), kPolygonRadius * std::sin(a)});
  }
  return out;
}

Turbularization trivial_turbularization(int n) { return trivial_turbularization(n, epsilon_rule(n)); }

Turbularization trivial_turbularization(int n, double epsilon) {
  Turbularization out;
  out.layout.n = n;
  out.layout.vertices = polygon_vertices(n);
  out.layout.epsilon = epsilon;
  double dmin = n == 1 ? 2.0 * kPolygonRadius : std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& a = out.layout.vertices[static_cast<std::size_t>(i)];
      const auto& b = out.layout.vertices[static_cast<std::size_t>(j)];
      dmin = std::min(dmin, std::hypot(a[0] - b[0], a[1] - b[1]));
    }
  out.layout.min_vertex_distance = dmin;
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kParameter, "tube radius must be positive");
  if (2.0 * epsilon >= dmin) {
    std::ostringstream os;
    os << "tubes of radius " << epsilon << " overlap (minimum vertex distance " << dmin << ")";
    throw Error(ErrorCode::kLayout, os.str());
  }
  // The ambient metric is euclidean only where G = r^2, i.e. r <= 1/4.
  if (kPolygonRadius + epsilon > kTwistPlateau) {
    throw Error(ErrorCode::kLayout, "tubes leave the euclidean core of the solid torus");
  }
  for (int k = 0; k < n; ++k) out.tubes.push_back(tube_chart("tube" + std::to_string(k), epsilon));
  return out;
}

Mat2D TubedDisk::spatial_metric(const Dual& x, const Dual& y) const {
  Mat2D g{{{Dual(1.0), Dual(0.0)}, {Dual(0.0), Dual(1.0)}}};
  for (const auto& c : centers) {
    const Dual dx = x - c[0];
    const Dual dy = y - c[1];
    const double rho_v = std::hypot(dx.v, dy.v);
    if (rho_v >= epsilon || rho_v < 0.9 * epsilon / 8.0) continue;  // G = rho^2 below eps/8
    const Dual rho2 = dx * dx + dy * dy;
    const Dual rho = sqrt(rho2);
    // (G - rho^2) dtheta^2 with dtheta = (-dy dx + dx dy) / rho^2
    const Dual w = (profiles.G(rho) - rho2) / (rho2 * rho2);
    g[0][0] += w * dy * dy;
    g[0][1] -= w * dx * dy;
    g[1][0] -= w * dx * dy;
    g[1][1] += w * dx * dx;
  }
  return g;
}

Vec3T<Dual> TubedDisk::form(const Dual& x, const Dual& y) const {
  for (const auto& c : centers) {
    const Dual dx = x - c[0];
    const Dual dy = y - c[1];
    const double rho_v = std::hypot(dx.v, dy.v);
    if (rho_v >= epsilon || rho_v < 0.9 * epsilon / 6.0) continue;  // f = 0 below eps/6
    const Dual rho = sqrt(dx * dx + dy * dy);
    const Dual f = profiles.f(rho);
    return {f * dx / rho, f * dy / rho, 1.0 - f};
  }
  return {Dual(0.0), Dual(0.0), Dual(1.0)};
}

TubedDisk make_tubed_disk(std::vector<Vec2> centers, double epsilon) {
  TubedDisk d;
  d.centers = std::move(centers);
  d.epsilon = epsilon;
  d.profiles = tube_profiles(epsilon);
  return d;
}

SmoothProfile twist_profile(TwistSide side, double delta) {
  const double outer = kTranspositionRadius - delta;
  if (!(delta > 0.0 && outer > kTwistPlateau))
    throw Error(ErrorCode::kParameter, "delta must lie in (0, 1/12)");
  const double plateau = side == TwistSide::kLeft ? kPi : -kPi;
  return make_piecewise({Segment::constant(0.0, kTwistPlateau, plateau), Segment::transition(kTwistPlateau, outer),
                         Segment::constant(outer, kTranspositionRadius, 0.0)});
}

TranspositionConfig default_transposition(TwistSide side) {
  TranspositionConfig cfg;
  cfg.side = side;
  cfg.twist_profile = twist_profile(side, cfg.delta);
  cfg.time_profile = make_bump(0.0, 1.0, 0.0, 1.0, 0.1);
  return cfg;
}

namespace {

struct TwistedEmbedding {
  TubedDisk disk;
  SmoothProfile f;
  SmoothProfile h;
  double lambda;
  double ts;

  // Pull-back of the physical data through
  // (r, phi, t) -> (lambda r cos psi, lambda r sin psi, ts t), psi = phi - k f(r),
  // with k = h(2t) while twisting and k = 1 once the twist is complete.
  std::pair<Mat3D, Vec3T<Dual>> pull_back(const PointD& q, bool frozen) const {
    const Dual& r = q[0];
    const Dual s = 2.0 * q[2];
    const Dual k = frozen ? Dual(1.0) : h(s);
    const Dual dk = frozen ? Dual(0.0) : h.derivative(s);
    const Dual fr = f(r);
    const Dual psi = q[1] - k * fr;
    const Dual psi_r = -k * f.derivative(r);
    const Dual psi_t = -2.0 * dk * fr;
    const Dual c = cos(psi);
    const Dual sn = sin(psi);
    const Dual x = lambda * r * c;
    const Dual y = lambda * r * sn;

    Mat3D J = zero3<Dual>();
    J[0][0] = lambda * c - lambda * r * sn * psi_r;
    J[0][1] = -lambda * r * sn;
    J[0][2] = -lambda * r * sn * psi_t;
    J[1][0] = lambda * sn + lambda * r * c * psi_r;
    J[1][1] = lambda * r * c;
    J[1][2] = lambda * r * c * psi_t;
    J[2][2] = Dual(ts);

    const Mat2D gs = disk.spatial_metric(x, y);
    Mat3D G = zero3<Dual>();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) G[i][j] = gs[i][j];
    G[2][2] = Dual(1.0);
    return {congruence(J, G), transpose_apply(J, disk.form(x, y))};
  }
};

}  // namespace

Transposition parabolic_transposition(const TranspositionConfig& cfg) {
  if (!(cfg.spatial_scale > 0.0 && cfg.time_scale > 0.0 && cfg.tube_radius > 0.0 && cfg.string_offset > 0.0))
    throw Error(ErrorCode::kParameter, "transposition scales must be positive");
  const double lambda = cfg.spatial_scale;
  const double reach = (cfg.string_offset + 6.0 * cfg.tube_radius / 7.0) / lambda;
  if (reach > kTwistPlateau + 1e-12) {
    std::ostringstream os;
    os << "strings reach normalised radius " << reach << " beyond the twist plateau 1/4";
    throw Error(ErrorCode::kLayout, os.str());
  }
  if (cfg.tube_radius >= cfg.string_offset)
    throw Error(ErrorCode::kLayout, "the two string tubes overlap");
  if (cfg.twist_profile.domain_lo() != 0.0 || std::fabs(cfg.twist_profile.domain_hi() - kTranspositionRadius) > 1e-12)
    throw Error(ErrorCode::kParameter, "twist profile must be defined on [0, 1/3]");

  Transposition out;
  out.config = cfg;
  const double outer = kTranspositionRadius - cfg.delta;

  auto emb = std::make_shared<TwistedEmbedding>(
      TwistedEmbedding{make_tubed_disk({{cfg.string_offset, 0.0}, {-cfg.string_offset, 0.0}}, cfg.tube_radius),
                       cfg.twist_profile, cfg.time_profile, lambda, cfg.time_scale});

  // Staged block on the twisted annulus, in the frame dual to (lambda dr, lambda r dphi).
  InterpolationInput in;
  in.domain.names = {"r", "phi"};
  in.domain.lo = {kTwistPlateau, 0.0};
  in.domain.hi = {outer, kTwoPi};
  in.domain.periodic = {false, true};
  const SmoothProfile f = cfg.twist_profile;
  in.G = [f, lambda](const Vec2D& p) {
    const Dual& r = p[0];
    const Dual fp = f.derivative(r);
    const Dual l2 = Dual(lambda * lambda);
    return Mat2D{{{l2 * (1.0 + r * r * fp * fp), -l2 * r * r * fp}, {-l2 * r * r * fp, l2 * r * r}}};
  };
  in.frame = [lambda](const Vec2D& p) {
    return Mat2D{{{Dual(1.0 / lambda), Dual(0.0)}, {Dual(0.0), 1.0 / (lambda * p[0])}}};
  };
  in.cutoff = collar_cutoff(in.domain, 0.1 * (outer - kTwistPlateau));
  InterpolationConfig icfg;
  icfg.time_scale = cfg.time_scale;
  out.annulus = interpolation_block(in, icfg);
  out.annulus.chart.name = "xpose_annulus";

  const auto block = out.annulus.frame_block;
  const double ts = cfg.time_scale;
  auto in_annulus = [outer](double r) { return r > kTwistPlateau && r < outer; };

  auto metric = [emb, block, lambda, ts, in_annulus](const PointD& q) {
    if (q[2].v <= 0.5) return emb->pull_back(q, false).first;
    if (!in_annulus(q[0].v)) return emb->pull_back(q, true).first;
    const Mat2D m = block({q[0], q[1], 2.0 * q[2] - 1.0});
    const Dual sr = lambda * q[0];
    Mat3D g = zero3<Dual>();
    g[0][0] = lambda * lambda * m[0][0];
    g[0][1] = g[1][0] = lambda * sr * m[0][1];
    g[1][1] = sr * sr * m[1][1];
    g[2][2] = Dual(ts * ts);
    return g;
  };
  auto form = [emb, ts, in_annulus](const PointD& q) {
    if (q[2].v <= 0.5) return emb->pull_back(q, false).second;
    if (!in_annulus(q[0].v)) return emb->pull_back(q, true).second;
    return Vec3T<Dual>{Dual(0.0), Dual(0.0), Dual(ts)};
  };

  auto make_box = [] {
    ChartBox b;
    b.names = {"r", "phi", "t"};
    b.lo = {0.0, 0.0, 0.0};
    b.hi = {kTranspositionRadius, kTwoPi, 1.0};
    b.periodic = {false, true, false};
    b.radial_axis = 0;
    b.excluded_core_radius = 0.02;
    return b;
  };

  nlohmann::json desc = {{"model", "parabolic_transposition"},
                         {"side", cfg.side == TwistSide::kLeft ? "left" : "right"},
                         {"delta", cfg.delta},
                         {"spatial_scale", lambda},
                         {"time_scale", ts},
                         {"string_offset", cfg.string_offset},
                         {"tube_radius", cfg.tube_radius},
                         {"interpolation_D", out.annulus.D},
                         {"twist_profile", cfg.twist_profile.to_json()},
                         {"time_profile", cfg.time_profile.to_json()}};

  FoliatedChart& fc = out.chart;
  fc.name = "transposition";
  fc.box = make_box();
  fc.metric.eval = metric;
  fc.alpha.eval = form;
  fc.descriptor = desc;

  FoliatedChart& un = out.untwisted;
  un.name = "two_string_disk";
  un.box = make_box();
  auto untw = [emb](const PointD& q) {
    PointD p = q;
    p[2] = Dual(0.0);  // h(0) = 0 and t enters only through h
    auto res = emb->pull_back(p, false);
    return res;
  };
  un.metric.eval = [untw](const PointD& q) { return untw(q).first; };
  un.alpha.eval = [untw](const PointD& q) { return untw(q).second; };
  un.descriptor = {{"model", "two_string_disk"}, {"spatial_scale", lambda}, {"time_scale", ts}};

  const SmoothProfile h = cfg.time_profile;
  out.twist = [f, h](const PointD& q) {
    const Dual s = 2.0 * q[2];
    const Dual k = s.v >= 1.0 ? Dual(1.0) : h(s);
    return PointD{q[0], q[1] + k * f(q[0]), q[2]};
  };
  out.to_physical = [lambda](const PointD& q) {
    return Vec3T<Dual>{lambda * q[0] * cos(q[1]), lambda * q[0] * sin(q[1]), q[2]};
  };
  return out;
}

}  // namespace parafol
