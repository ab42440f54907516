#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "assembly_internal.hpp"
#include "parafol/error.hpp"

namespace parafol {

using detail::spread;

Vec3T<Dual> KnotLayout::untwisted_to_background(std::size_t j, const PointD& q) const {
  const CrossingBlock& b = blocks.at(j);
  const Dual ang = q[1] + b.crossing.edge_angle;
  return {b.crossing.center[0] + b.lambda * q[0] * cos(ang), b.crossing.center[1] + b.lambda * q[0] * sin(ang),
          b.time_start + b.duration * q[2]};
}

Mat2 knot_boundary_metric(const KnotLayout& k) {
  const double c0 = (k.epsilon / 6.0) * (k.epsilon / 6.0);
  const double n = k.presentation.n;
  return {{{c0, 0.0}, {0.0, n * n}}};
}

namespace {

constexpr double kRouteMargin = 2e-4;

struct Route {
  std::string chart;
  PointD point;
};

// Background point (x, y, T) of crossing chart j routed to torus0 or to the
// tube containing it; empty chart name when the point sits too close to a
// routing boundary or a coordinate singularity.
Route route_background(const KnotLayout& k, const Vec3T<Dual>& X) {
  const double eps = k.epsilon;
  const auto& vs = k.presentation.vertices;
  for (std::size_t v = 0; v < vs.size(); ++v) {
    const Dual dx = X[0] - vs[v][0];
    const Dual dy = X[1] - vs[v][1];
    const double rho = std::hypot(dx.v, dy.v);
    if (std::fabs(rho - eps) < kRouteMargin) return {};
    if (rho < eps) {
      if (rho < 0.05 * eps) return {};
      return {"tube" + std::to_string(v), PointD{sqrt(dx * dx + dy * dy), atan2(dy, dx), X[2]}};
    }
  }
  const double r = std::hypot(X[0].v, X[1].v);
  if (r < 0.02) return {};
  return {"torus0", PointD{sqrt(X[0] * X[0] + X[1] * X[1]), atan2(X[1], X[0]), X[2]}};
}

void add_crossing_interfaces(Atlas& a, const std::shared_ptr<const KnotLayout>& k, std::size_t j) {
  const std::string name = k->blocks[j].chart;
  std::vector<Point> samples;
  for (double r : spread(0.316, 0.3323, 3, false))
    for (double phi : spread(0.0, kTwoPi, 24, true))
      for (double t : spread(0.002, 0.998, 10, false)) samples.push_back({r, phi, t});
  for (double t : {0.004, 0.02, 0.044, 0.9915, 0.995, 0.998})
    for (double r : spread(0.02, 0.332, 16, false))
      for (double phi : spread(0.0, kTwoPi, 16, true)) samples.push_back({r, phi, t});

  std::map<std::string, Interface> by_target;
  for (const Point& p : samples) {
    const Route rt = route_background(*k, k->untwisted_to_background(j, lift(p)));
    if (rt.chart.empty()) continue;
    auto [it, fresh] = by_target.try_emplace(rt.chart);
    Interface& i = it->second;
    if (fresh) {
      i.chart_a = name;
      i.chart_b = rt.chart;
      i.description = "untwisted crossing coordinates: x = c_j + 3 r_j r (cos, sin)(phi + angle_j), T = start_j + d_j t";
      const std::string target = rt.chart;
      i.map = [k, j, target](const PointD& q) {
        const Route r = route_background(*k, k->untwisted_to_background(j, q));
        if (r.chart != target) throw Error(ErrorCode::kInternal, "interface sample left its routing cell");
        return r.point;
      };
    }
    i.samples.push_back(p);
  }
  for (auto& [_, i] : by_target) a.interfaces.push_back(std::move(i));
}

}  // namespace

Atlas turbularize_along_knot(const BraidWord& w) {
  auto layout = std::make_shared<KnotLayout>();
  layout->presentation = standard_presentation(w);
  const StandardPresentation& P = layout->presentation;
  layout->epsilon = P.epsilon;

  Atlas a = sphere_two_tori();
  a.name = "knot";
  Turbularization tub = trivial_turbularization(P.n, P.epsilon);
  for (auto& c : tub.tubes) a.charts.push_back(std::move(c));

  for (const Crossing& c : P.crossings) {
    TranspositionConfig cfg = default_transposition(c.generator.sign > 0 ? TwistSide::kLeft : TwistSide::kRight);
    cfg.spatial_scale = 3.0 * c.radius;
    cfg.time_scale = kTwoPi * (c.interval[1] - c.interval[0]);
    cfg.string_offset = 0.5 * c.edge_length;
    cfg.tube_radius = P.epsilon;
    Transposition tr = parabolic_transposition(cfg);

    CrossingBlock b;
    b.crossing = c;
    b.chart = "xpose" + std::to_string(c.letter);
    b.lambda = cfg.spatial_scale;
    b.time_start = kTwoPi * c.interval[0];
    b.duration = cfg.time_scale;
    b.twist = cfg.twist_profile;
    b.time_bump = cfg.time_profile;
    b.offset = cfg.string_offset;
    layout->blocks.push_back(b);

    tr.chart.name = b.chart;
    tr.chart.descriptor["crossing"] = {{"letter", c.letter},
                                       {"center", c.center},
                                       {"radius", c.radius},
                                       {"interval", c.interval},
                                       {"edge_angle", c.edge_angle}};
    a.charts.push_back(std::move(tr.chart));
  }
  a.knot = layout;

  auto inside_ball = [layout](int v, double T) {
    for (const auto& b : layout->blocks) {
      if (v != b.crossing.vertex_a && v != b.crossing.vertex_b) continue;
      if (T >= b.time_start && T <= b.time_start + b.duration) return true;
    }
    return false;
  };
  detail::add_tube_interfaces(a, P.vertices, P.epsilon, inside_ball);
  for (std::size_t j = 0; j < layout->blocks.size(); ++j) add_crossing_interfaces(a, layout, j);

  a.deviations = {"tube profile G = r^2 on [0, eps/8) instead of 0",
                  "tube profile constant middle value (eps/6)^2",
                  "crossing blocks placed by the affine map r -> 3 r_j r, t -> start_j + d_j t "
                  "(inverse of the printed scaling map)",
                  "crossing disks also kept inside the euclidean core r <= 1/4 of torus0"};
  a.construction["presentation"] = P.to_json();
  return a;
}

namespace {

struct CollarRoute {
  std::string chart;
  PointD point;
};

// Collar point (u, v, s) to the base chart holding the mirrored point at
// rho = eps/2 + (1 - s) on the knot's tube. v parametrises the whole knot:
// background time n v, lap after lap, with strands moving between vertices
// at crossings.
CollarRoute route_collar(const KnotLayout& k, const PointD& q) {
  const int n = k.presentation.n;
  const double eps = k.epsilon;
  const Dual rho = 0.5 * eps + (1.0 - q[2]);
  const Dual tau = static_cast<double>(n) * q[1];
  const int lap = static_cast<int>(std::floor(tau.v / kTwoPi));
  const Dual T = tau - kTwoPi * lap;
  if (T.v < kRouteMargin || T.v > kTwoPi - kRouteMargin) return {};

  int pos = 0;
  double rot = 0.0;
  for (int l = 0; l <= lap; ++l) {
    for (std::size_t j = 0; j < k.blocks.size(); ++j) {
      const CrossingBlock& b = k.blocks[j];
      const bool involved = pos == b.crossing.vertex_a || pos == b.crossing.vertex_b;
      if (!involved) continue;
      const double end = b.time_start + b.duration;
      if (l == lap && T.v < end + kRouteMargin) {
        if (T.v < b.time_start - kRouteMargin) break;
        if (T.v <= b.time_start + kRouteMargin || T.v >= end - kRouteMargin) return {};
        // Inside the crossing ball: local physical position relative to the disk centre.
        const double side = pos == b.crossing.vertex_a ? -b.offset : b.offset;
        const Dual th = q[0] + rot - b.crossing.edge_angle;
        const Dual px = side + rho * cos(th);
        const Dual py = rho * sin(th);
        const Dual r = sqrt(px * px + py * py) / b.lambda;
        const Dual t = (T - b.time_start) / b.duration;
        const Dual kk = t.v <= 0.5 ? b.time_bump(2.0 * t) : Dual(1.0);
        return {b.chart, PointD{r, atan2(py, px) + kk * b.twist(r), t}};
      }
      rot += b.crossing.generator.sign * kPi;
      pos = pos == b.crossing.vertex_a ? b.crossing.vertex_b : b.crossing.vertex_a;
    }
  }
  return {"tube" + std::to_string(pos), PointD{rho, q[0] + rot, T}};
}

}  // namespace

Atlas dehn_surgery(const Atlas& base, const GluingMatrix& m) {
  m.validate();
  if (!base.knot) throw Error(ErrorCode::kParameter, "surgery needs an atlas turbularized along a knot");
  const auto knot = base.knot;
  Atlas a = base;
  a.name = "surgery";

  const Mat2 G = surgery_boundary_metric(m);
  const Mat2 H = knot_boundary_metric(*knot);

  InterpolationInput in;
  in.domain.names = {"u", "v"};
  in.domain.lo = {0.0, 0.0};
  in.domain.hi = {kTwoPi, kTwoPi};
  in.domain.periodic = {true, true};
  in.G = [G](const Vec2D&) { return Mat2D{{{Dual(G[0][0]), Dual(G[0][1])}, {Dual(G[1][0]), Dual(G[1][1])}}}; };
  const double fu = 1.0 / std::sqrt(H[0][0]), fv = 1.0 / std::sqrt(H[1][1]);
  in.frame = [fu, fv](const Vec2D&) { return Mat2D{{{Dual(fu), Dual(0.0)}, {Dual(0.0), Dual(fv)}}}; };
  in.cutoff = [](const Vec2D&) { return Dual(1.0); };
  InterpolationConfig cfg;
  cfg.check_samples = 8;  // constant in (u, v)
  InterpolationBlock block = interpolation_block(in, cfg);
  FoliatedChart collar = block.chart;
  collar.name = "collar";
  collar.box.names = {"u", "v", "s"};
  collar.descriptor["model"] = "surgery_collar";
  collar.descriptor["G"] = G;
  collar.descriptor["H"] = H;
  a.charts.push_back(std::move(collar));
  a.charts.push_back(parabolic_solid_torus("surgery_torus"));

  // Collar s = 0 against the new solid torus: (t, phi) = m (u, v), r = 1 - s.
  Interface inner;
  inner.chart_a = "collar";
  inner.chart_b = "surgery_torus";
  inner.description = "r = 1 - s mirrored; t = a u + b v, phi = c u + d v";
  inner.reflect_axis = 2;
  const double ma = static_cast<double>(m.a), mb = static_cast<double>(m.b), mc = static_cast<double>(m.c),
               md = static_cast<double>(m.d);
  for (double s : {0.002, 0.008, 0.015})
    for (double u : spread(0.0, kTwoPi, 12, true))
      for (double v : spread(0.0, kTwoPi, 12, true)) inner.samples.push_back({u, v, s});
  // The mirror keeps depth: s below the face s = 0 maps to 1 - s below r = 1.
  inner.map = [ma, mb, mc, md](const PointD& q) {
    return PointD{1.0 - q[2], mc * q[0] + md * q[1], ma * q[0] + mb * q[1]};
  };
  a.interfaces.push_back(std::move(inner));

  // Collar s = 1 against the knot's boundary torus rho = eps / 2.
  const double depth = std::min(0.009, 0.15 * knot->epsilon);
  std::map<std::string, Interface> by_target;
  for (double s : {1.0 - 0.9 * depth, 1.0 - 0.5 * depth, 1.0 - 0.1 * depth})
    for (double u : spread(0.0, kTwoPi, 8, true))
      for (double v : spread(0.0, kTwoPi, 96, true)) {
        const Point p{u, v, s};
        const CollarRoute rt = route_collar(*knot, lift(p));
        if (rt.chart.empty()) continue;
        auto [it, fresh] = by_target.try_emplace(rt.chart);
        Interface& i = it->second;
        if (fresh) {
          i.chart_a = "collar";
          i.chart_b = rt.chart;
          i.description = "rho = eps/2 + (1 - s) mirrored; theta = u + accumulated half turns; T = n v along the knot";
          i.reflect_axis = 2;
          const std::string target = rt.chart;
          i.map = [knot, target](const PointD& q) {
            const CollarRoute r = route_collar(*knot, q);
            if (r.chart != target) throw Error(ErrorCode::kInternal, "interface sample left its routing cell");
            return r.point;
          };
        }
        i.samples.push_back(p);
      }
  for (auto& [_, i] : by_target) a.interfaces.push_back(std::move(i));

  const IntMat2 exact = surgery_boundary_metric_exact(m);
  const IntMat2 printed = printed_surgery_metric(m);
  nlohmann::json s = {{"matrix", m.to_json()},
                      {"boundary_metric", exact},
                      {"knot_boundary_metric", H},
                      {"interpolation_D", block.D}};
  if (printed != exact) {
    s["printed_boundary_metric"] = printed;
    a.deviations.push_back("surgery boundary metric taken as m^T m; the printed off-diagonal a c + b d differs here");
  }
  a.deviations.push_back("collar target metric is the knot boundary torus metric diag(c0, n^2), not the identity");
  a.construction["surgery"] = s;
  return a;
}

}  // namespace parafol
