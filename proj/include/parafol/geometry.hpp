#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "parafol/tensor.hpp"

namespace parafol {

struct ChartBox {
  std::array<std::string, 3> names{"x", "y", "z"};
  Point lo{0.0, 0.0, 0.0};
  Point hi{1.0, 1.0, 1.0};
  std::array<bool, 3> periodic{false, false, false};
  // Polar charts exclude r < excluded_core_radius from grid checks.
  std::optional<double> excluded_core_radius;
  int radial_axis = 0;

  bool contains(const Point& p, double slack = 0.0) const;
  void validate() const;
  nlohmann::json to_json() const;
};

enum class PartialsMode { kAnalytic, kFiniteDifference };

inline constexpr double kFiniteDifferenceStep = 1e-4;

struct MetricField {
  std::function<Mat3D(const PointD&)> eval;

  Mat3 value(const Point& p) const { return values(eval(lift(p))); }
  // d_k g_ij for k = 0..2. The finite-difference route needs the chart box so
  // it never samples outside the chart.
  std::array<Mat3, 3> partials(const Point& p, PartialsMode mode, const ChartBox* box = nullptr) const;
};

struct OneFormField {
  std::function<Vec3T<Dual>(const PointD&)> eval;

  Vec3 value(const Point& p) const;
  // jacobian[i][j] = d_i alpha_j
  Mat3 jacobian(const Point& p) const;
  // (d alpha)_ij = d_i alpha_j - d_j alpha_i
  Mat3 exterior_derivative(const Point& p) const;
};

// Two tangent sections of Ker(alpha).
using LeafFrame = std::function<std::array<Vec3, 2>(const Point&)>;

struct FoliatedChart {
  std::string name;
  ChartBox box;
  MetricField metric;
  OneFormField alpha;
  LeafFrame leaf_frame;  // empty: frame derived from alpha
  // Serialised descriptor: model kind, parameters, profile tables.
  nlohmann::json descriptor = nlohmann::json::object();

  std::array<Vec3, 2> frame(const Point& p) const;
  Vec3 raw_normal(const Point& p) const;  // metric dual of alpha, not normalised
};

// Frame spanning Ker(alpha) built from coordinate axes.
std::array<Vec3, 2> kernel_frame(const Vec3& alpha);

struct CurvatureSample {
  Mat2 B{};
  double k1 = 0.0;
  double k2 = 0.0;
  double Ke = 0.0;
  double H = 0.0;
};

using Christoffel = std::array<Mat3, 3>;  // gamma[k][i][j] = Gamma^k_ij

Christoffel christoffel(const MetricField& m, const Point& p, PartialsMode mode = PartialsMode::kAnalytic,
                        const ChartBox* box = nullptr);

// Unit normal with alpha(n) > 0.
Vec3 unit_normal(const FoliatedChart& fc, const Point& p);

struct CurvatureOptions {
  PartialsMode mode = PartialsMode::kAnalytic;
  bool flip_normal = false;
  std::optional<std::array<Vec3, 2>> frame;  // override the chart's leaf frame
};

CurvatureSample second_fundamental_form(const FoliatedChart& fc, const Point& p, const CurvatureOptions& opts = {});

// rho with alpha ^ d alpha = rho dx^1 ^ dx^2 ^ dx^3.
double integrability_residual(const OneFormField& a, const Point& p);

class SmoothProfile;
// Reference second fundamental form of the radial thick-Reeb model with
// metric diag(1, G, 1): (1/(2f^2-2f+1)) diag(-f G', -(1-f) f').
Mat2 closed_form_B_solid_torus(const SmoothProfile& f, const SmoothProfile& G, double r);

}  // namespace parafol
