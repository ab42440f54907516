#include <algorithm>
#include <cmath>
#include <sstream>

#include "parafol/error.hpp"
#include "parafol/models.hpp"

namespace parafol {

namespace {

Mat2D mul(const Mat2D& a, const Mat2D& b) {
  Mat2D r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return r;
}

Mat2D transpose2(const Mat2D& a) { return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}}; }

Mat2D inverse2(const Mat2D& a) {
  const Dual det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
}

double min_eig2(double a, double b, double c) {
  return 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
}

std::vector<double> axis_samples(double lo, double hi, bool periodic, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double step = (hi - lo) / n;
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + (periodic ? i : i + 0.5) * step;
  return xs;
}

}  // namespace

SmoothProfile stage_bump(double lo, double hi) {
  if (!(0.0 <= lo && lo < hi && hi <= 1.0)) throw Error(ErrorCode::kParameter, "stage interval must lie in [0, 1]");
  std::vector<Segment> segs;
  if (lo > 0.0) segs.push_back(Segment::constant(0.0, lo, 0.0));
  segs.push_back(Segment::transition(lo, hi, 0.0, 1.0));
  if (hi < 1.0) segs.push_back(Segment::constant(hi, 1.0, 1.0));
  return make_piecewise(std::move(segs));
}

SurfaceScalar collar_cutoff(const SurfaceDomain& domain, double width) {
  std::array<std::optional<SmoothProfile>, 2> edge;
  for (int k = 0; k < 2; ++k) {
    if (domain.periodic[k]) continue;
    const double half = 0.5 * (domain.hi[k] - domain.lo[k]);
    if (!(width > 0.0 && width <= half)) throw Error(ErrorCode::kParameter, "collar width does not fit the surface");
    std::vector<Segment> segs{Segment::constant(0.0, 0.5 * width, 0.0), Segment::transition(0.5 * width, width)};
    if (width < half) segs.push_back(Segment::constant(width, half, 1.0));
    else segs.back().to = Formula::constant(1.0);
    edge[k] = make_piecewise(std::move(segs));
  }
  return [domain, edge](const Vec2D& p) {
    Dual h(1.0);
    for (int k = 0; k < 2; ++k) {
      if (!edge[k]) continue;
      const Dual lo = p[k] - domain.lo[k];
      const Dual hi = domain.hi[k] - p[k];
      h *= (*edge[k])(lo.v <= hi.v ? lo : hi);
    }
    return h;
  };
}

int InterpolationBlock::stage(double time) const {
  for (int i = 0; i < 5; ++i)
    if (time <= t[static_cast<std::size_t>(i)]) return i + 1;
  return 6;
}

InterpolationBlock interpolation_block(const InterpolationInput& in, const InterpolationConfig& cfg) {
  const auto& ts = cfg.t;
  if (!(ts[0] > 0.0 && ts[4] <= 1.0)) throw Error(ErrorCode::kParameter, "subdivision must lie in (0, 1]");
  for (int i = 1; i < 5; ++i)
    if (!(ts[i - 1] < ts[i])) throw Error(ErrorCode::kParameter, "subdivision must be strictly increasing");
  if (!in.G || !in.frame || !in.cutoff) throw Error(ErrorCode::kParameter, "interpolation input is incomplete");

  std::array<SmoothProfile, 5> beta{stage_bump(0.0, ts[0]), stage_bump(ts[0], ts[1]), stage_bump(ts[1], ts[2]),
                                    stage_bump(ts[2], ts[3]), stage_bump(ts[3], ts[4])};

  const SurfaceTensor G = in.G;
  const SurfaceTensor frame = in.frame;
  const SurfaceScalar cutoff = in.cutoff;
  auto abc = [G, frame](const Vec2D& p) {
    const Mat2D F = frame(p);
    const Mat2D m = mul(transpose2(F), mul(G(p), F));
    return std::array<Dual, 3>{m[0][0], m[0][1], m[1][1]};
  };

  // Sweep Sigma: collar precondition and the automatic value of D.
  const auto us = axis_samples(in.domain.lo[0], in.domain.hi[0], in.domain.periodic[0], cfg.check_samples);
  const auto vs = axis_samples(in.domain.lo[1], in.domain.hi[1], in.domain.periodic[1], cfg.check_samples);
  double bound = 0.0;
  for (double u : us)
    for (double v : vs) {
      const Vec2D p{Dual(u), Dual(v)};
      const auto c = abc(p);
      const double a = c[0].v, b = c[1].v, cc = c[2].v;
      bound = std::max({bound, a + std::fabs(b), cc + std::fabs(b)});
      if (cutoff(p).v < 1.0 && (std::fabs(a - 1.0) > 1e-10 || std::fabs(b) > 1e-10 || std::fabs(cc - 1.0) > 1e-10)) {
        std::ostringstream os;
        os << "metrics differ at (" << u << ", " << v << ") where the cutoff is below 1";
        throw Error(ErrorCode::kParameter, os.str());
      }
    }
  const double D = cfg.D > 0.0 ? cfg.D : 1.0 + bound;

  auto block = [abc, cutoff, beta, D](const PointD& q) {
    const Vec2D p{q[0], q[1]};
    const auto c = abc(p);
    const Dual& a = c[0];
    const Dual& b = c[1];
    const Dual& cc = c[2];
    const Dual h = cutoff(p);
    const Dual b1 = beta[0](q[2]), b2 = beta[1](q[2]), b3 = beta[2](q[2]), b4 = beta[3](q[2]), b5 = beta[4](q[2]);
    // Raise a, raise c, trade b onto the diagonal, lower a, lower c.
    const Dual a1 = a + h * b1 * (D - a);
    const Dual c1 = cc + h * b2 * (D - cc);
    Mat2D m;
    m[0][0] = (1.0 - b4) * (a1 + b3 * b) + b4;
    m[0][1] = m[1][0] = b * (1.0 - b3);
    m[1][1] = (1.0 - b5) * (c1 + b3 * b) + b5;
    return m;
  };

  // Positive-definite sweep, stage by stage.
  for (double u : us)
    for (double v : vs)
      for (int s = 0; s < 5; ++s) {
        const double t0 = s == 0 ? 0.0 : ts[static_cast<std::size_t>(s - 1)];
        const double t1 = ts[static_cast<std::size_t>(s)];
        for (int k = 0; k <= 8; ++k) {
          const double t = t0 + (t1 - t0) * k / 8.0;
          const Mat2D m = block({Dual(u), Dual(v), Dual(t)});
          const double lam = min_eig2(m[0][0].v, m[0][1].v, m[1][1].v);
          if (!(lam > 0.0)) {
            std::ostringstream os;
            os << "interpolation metric not positive-definite in stage " << s + 1 << " at (" << u << ", " << v
               << ", " << t << "): min eigenvalue " << lam << " with D = " << D;
            throw Error(ErrorCode::kPositiveDefinite, os.str());
          }
        }
      }

  InterpolationBlock out;
  out.D = D;
  out.t = ts;
  out.frame_block = block;
  out.coefficients = [abc](const Vec2& p) {
    const auto c = abc({Dual(p[0]), Dual(p[1])});
    return std::array<double, 3>{c[0].v, c[1].v, c[2].v};
  };

  FoliatedChart& fc = out.chart;
  fc.name = "interp_block";
  fc.box.names = {in.domain.names[0], in.domain.names[1], "t"};
  fc.box.lo = {in.domain.lo[0], in.domain.lo[1], 0.0};
  fc.box.hi = {in.domain.hi[0], in.domain.hi[1], 1.0};
  fc.box.periodic = {in.domain.periodic[0], in.domain.periodic[1], false};
  const double tt = cfg.time_scale * cfg.time_scale;
  fc.metric.eval = [block, frame, tt](const PointD& q) {
    const Mat2D finv = inverse2(frame({q[0], q[1]}));
    const Mat2D g2 = mul(transpose2(finv), mul(block(q), finv));
    Mat3D g = zero3<Dual>();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g[i][j] = g2[i][j];
    g[2][2] = Dual(tt);
    return g;
  };
  fc.alpha.eval = [](const PointD&) { return Vec3T<Dual>{Dual(0.0), Dual(0.0), Dual(1.0)}; };
  fc.leaf_frame = [frame](const Point& q) {
    const Mat2D F = frame({Dual(q[0]), Dual(q[1])});
    return std::array<Vec3, 2>{Vec3{F[0][0].v, F[1][0].v, 0.0}, Vec3{F[0][1].v, F[1][1].v, 0.0}};
  };
  fc.descriptor = {{"model", "interpolation_block"},
                   {"D", D},
                   {"subdivision", ts},
                   {"collar_width", cfg.collar_width},
                   {"time_scale", cfg.time_scale}};
  return out;
}

}  // namespace parafol
