#include "parafol/geometry.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "parafol/error.hpp"
#include "parafol/smooth1d.hpp"

namespace parafol {

double min_eigenvalue(const Mat3& a) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = a[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

bool ChartBox::contains(const Point& p, double slack) const {
  for (int i = 0; i < 3; ++i) {
    if (periodic[i]) continue;
    if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
  }
  return true;
}

void ChartBox::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(lo[i] < hi[i])) throw Error(ErrorCode::kParameter, "chart range for " + names[i] + " is empty");
  }
  if (excluded_core_radius) {
    const double r = *excluded_core_radius;
    if (!(r >= lo[radial_axis] && r <= hi[radial_axis]))
      throw Error(ErrorCode::kParameter, "excluded core radius outside the radial range");
  }
}

nlohmann::json ChartBox::to_json() const {
  nlohmann::json j;
  j["coordinates"] = names;
  j["lo"] = lo;
  j["hi"] = hi;
  j["periodic"] = periodic;
  if (excluded_core_radius) {
    j["excluded_core_radius"] = *excluded_core_radius;
    j["radial_axis"] = radial_axis;
  }
  return j;
}

std::array<Mat3, 3> MetricField::partials(const Point& p, PartialsMode mode, const ChartBox* box) const {
  std::array<Mat3, 3> out;
  if (mode == PartialsMode::kAnalytic) {
    const Mat3D g = eval(seed(p));
    for (int k = 0; k < 3; ++k) out[k] = partial(g, k);
    return out;
  }
  for (int k = 0; k < 3; ++k) {
    double h = kFiniteDifferenceStep;
    bool one_sided_up = false;
    bool one_sided_down = false;
    if (box != nullptr && !box->periodic[k]) {
      while (h > 1e-9 && (p[k] - h < box->lo[k] || p[k] + h > box->hi[k])) h *= 0.5;
      if (p[k] - h < box->lo[k]) {
        h = kFiniteDifferenceStep;
        one_sided_up = true;
      } else if (p[k] + h > box->hi[k]) {
        h = kFiniteDifferenceStep;
        one_sided_down = true;
      }
    }
    auto at = [&](double offset) {
      Point q = p;
      q[k] += offset;
      return value(q);
    };
    Mat3 d;
    if (one_sided_up || one_sided_down) {
      const double s = one_sided_up ? 1.0 : -1.0;
      const Mat3 g0 = value(p), g1 = at(s * h), g2 = at(2.0 * s * h);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d[i][j] = s * (-3.0 * g0[i][j] + 4.0 * g1[i][j] - g2[i][j]) / (2.0 * h);
    } else {
      const Mat3 gp = at(h), gm = at(-h);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d[i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
    }
    out[k] = d;
  }
  return out;
}

Vec3 OneFormField::value(const Point& p) const {
  const auto a = eval(lift(p));
  return {a[0].v, a[1].v, a[2].v};
}

Mat3 OneFormField::jacobian(const Point& p) const {
  const auto a = eval(seed(p));
  Mat3 j;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) j[i][k] = a[k].d[i];
  return j;
}

Mat3 OneFormField::exterior_derivative(const Point& p) const {
  const Mat3 j = jacobian(p);
  Mat3 d;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) d[i][k] = j[i][k] - j[k][i];
  return d;
}

std::array<Vec3, 2> kernel_frame(const Vec3& alpha) {
  int pivot = 0;
  for (int i = 1; i < 3; ++i)
    if (std::fabs(alpha[i]) > std::fabs(alpha[pivot])) pivot = i;
  std::array<Vec3, 2> out{};
  int slot = 0;
  for (int a = 0; a < 3; ++a) {
    if (a == pivot) continue;
    Vec3 v{0.0, 0.0, 0.0};
    v[a] = 1.0;
    v[pivot] = -alpha[a] / alpha[pivot];
    out[slot++] = v;
  }
  return out;
}

std::array<Vec3, 2> FoliatedChart::frame(const Point& p) const {
  if (leaf_frame) return leaf_frame(p);
  return kernel_frame(alpha.value(p));
}

Vec3 FoliatedChart::raw_normal(const Point& p) const {
  return mat_vec(inverse3(metric.value(p)), alpha.value(p));
}

namespace {

Mat3 checked_inverse(const Mat3& g) {
  const double lam = min_eigenvalue(g);
  if (!(lam > 0.0)) {
    std::ostringstream os;
    os << "metric is degenerate (min eigenvalue " << lam << ")";
    throw Error(ErrorCode::kDegenerate, os.str());
  }
  return inverse3(g);
}

}  // namespace

Christoffel christoffel(const MetricField& m, const Point& p, PartialsMode mode, const ChartBox* box) {
  const Mat3 ginv = checked_inverse(m.value(p));
  const auto dg = m.partials(p, mode, box);
  // Lowered symbols Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij).
  Christoffel lowered{};
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) lowered[l][i][j] = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
  Christoffel gamma{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += ginv[k][l] * lowered[l][i][j];
        gamma[k][i][j] = s;
      }
  return gamma;
}

Vec3 unit_normal(const FoliatedChart& fc, const Point& p) {
  const Mat3 ginv = checked_inverse(fc.metric.value(p));
  const Vec3 a = fc.alpha.value(p);
  const Vec3 n = mat_vec(ginv, a);
  const double norm2 = dot(a, n);
  if (!(norm2 > 0.0)) throw Error(ErrorCode::kDegenerate, "defining one-form vanishes");
  const double inv = 1.0 / std::sqrt(norm2);
  return {n[0] * inv, n[1] * inv, n[2] * inv};
}

// With nu = alpha/|alpha| and X, Y tangent to the leaves, nu(Y) = 0 gives
// g(nabla_X Y, n) = -(nabla_X nu)(Y); the d|alpha| term drops because it is
// multiplied by alpha(Y). This avoids differentiating the frame fields.
CurvatureSample second_fundamental_form(const FoliatedChart& fc, const Point& p, const CurvatureOptions& opts) {
  const Mat3 g = fc.metric.value(p);
  const Mat3 ginv = checked_inverse(g);
  const Christoffel gamma = christoffel(fc.metric, p, opts.mode, &fc.box);
  const Vec3 a = fc.alpha.value(p);
  const Mat3 ja = fc.alpha.jacobian(p);
  const double norm = std::sqrt(dot(a, mat_vec(ginv, a)));
  if (!(norm > 0.0)) throw Error(ErrorCode::kDegenerate, "defining one-form vanishes");

  Mat3 cov;  // (nabla alpha)_ij = d_i alpha_j - Gamma^k_ij alpha_k
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = ja[i][j];
      for (int k = 0; k < 3; ++k) s -= gamma[k][i][j] * a[k];
      cov[i][j] = s;
    }
  const auto fr = opts.frame ? *opts.frame : fc.frame(p);
  const double sign = opts.flip_normal ? 1.0 : -1.0;
  auto b = [&](const Vec3& u, const Vec3& v) { return sign * bilinear(cov, u, v) / norm; };

  CurvatureSample out;
  out.B[0][0] = b(fr[0], fr[0]);
  out.B[1][1] = b(fr[1], fr[1]);
  out.B[0][1] = out.B[1][0] = 0.5 * (b(fr[0], fr[1]) + b(fr[1], fr[0]));

  const double gxx = bilinear(g, fr[0], fr[0]);
  const double gxy = bilinear(g, fr[0], fr[1]);
  const double gyy = bilinear(g, fr[1], fr[1]);
  const double det_leaf = gxx * gyy - gxy * gxy;
  if (!(det_leaf >= 1e-12)) {
    std::ostringstream os;
    os << "induced leaf metric is degenerate (det " << det_leaf << ")";
    throw Error(ErrorCode::kDegenerate, os.str());
  }
  // A = g_leaf^{-1} B
  const double ia = gyy / det_leaf, ib = -gxy / det_leaf, ic = gxx / det_leaf;
  const double a00 = ia * out.B[0][0] + ib * out.B[1][0];
  const double a01 = ia * out.B[0][1] + ib * out.B[1][1];
  const double a10 = ib * out.B[0][0] + ic * out.B[1][0];
  const double a11 = ib * out.B[0][1] + ic * out.B[1][1];
  const double tr = a00 + a11;
  const double det = a00 * a11 - a01 * a10;
  const double disc = std::sqrt(std::fmax(0.25 * tr * tr - det, 0.0));
  out.k1 = 0.5 * tr + disc;
  out.k2 = 0.5 * tr - disc;
  out.Ke = det;
  out.H = 0.5 * tr;
  return out;
}

double integrability_residual(const OneFormField& form, const Point& p) {
  const Vec3 a = form.value(p);
  const Mat3 d = form.exterior_derivative(p);
  return a[0] * d[1][2] + a[1] * d[2][0] + a[2] * d[0][1];
}

Mat2 closed_form_B_solid_torus(const SmoothProfile& f, const SmoothProfile& G, double r) {
  const auto fv = f.eval_with_derivs(r, 1);
  const auto gv = G.eval_with_derivs(r, 1);
  const double w = 1.0 / (2.0 * fv[0] * fv[0] - 2.0 * fv[0] + 1.0);
  Mat2 b{};
  b[0][0] = -fv[0] * gv[1] * w;
  b[1][1] = -(1.0 - fv[0]) * fv[1] * w;
  return b;
}

}  // namespace parafol
