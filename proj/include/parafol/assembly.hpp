#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "parafol/braids.hpp"
#include "parafol/geometry.hpp"
#include "parafol/models.hpp"

namespace parafol {

struct GluingMatrix {
  long long a = 1, b = 0, c = 0, d = 1;

  long long det() const { return a * d - b * c; }
  // "a,b,c,d"; throws kParse on malformed text and kParameter when det != 1.
  static GluingMatrix parse(const std::string& text);
  void validate() const;
  nlohmann::json to_json() const { return {{"a", a}, {"b", b}, {"c", c}, {"d", d}}; }
};

using IntMat2 = std::array<std::array<long long, 2>, 2>;

// m^T m: the flat boundary metric pulled back through m, in integers.
IntMat2 surgery_boundary_metric_exact(const GluingMatrix& m);
Mat2 surgery_boundary_metric(const GluingMatrix& m);
// The table with off-diagonal a c + b d; differs from m^T m unless a = d or b = c.
IntMat2 printed_surgery_metric(const GluingMatrix& m);

using ChartMap = std::function<PointD(const PointD&)>;

// Identification of points of chart A with points of chart B.
//  - overlap: both charts cover the samples; map is the transition map.
//  - boundary: A and B meet along a face. The map sends a point at depth s
//    inside A to the mirrored point at depth s inside B; the true
//    continuation differs by negating the Jacobian column of reflect_axis.
struct Interface {
  std::string chart_a;
  std::string chart_b;
  std::string description;
  ChartMap map;
  std::optional<int> reflect_axis;
  std::vector<Point> samples;  // in chart A coordinates

  nlohmann::json to_json() const;
};

struct InterfaceTolerances {
  double value = 1e-10;
  double derivative = 1e-6;
  double form = 1e-10;
};

struct InterfaceCheck {
  std::string chart_a;
  std::string chart_b;
  std::size_t samples = 0;
  double value_residual = 0.0;
  double derivative_residual = 0.0;
  double form_residual = 0.0;
  Point value_argmax{};
  Point derivative_argmax{};
  Point form_argmax{};
  bool pass = true;
};

// One crossing ball of a knot, in background (torus0) units.
struct CrossingBlock {
  Crossing crossing;
  std::string chart;   // xpose<j>
  double lambda = 0.0;  // spatial scale: disk radius = lambda / 3
  double time_start = 0.0;  // background time 2 pi a_j
  double duration = 0.0;    // background time 2 pi d_j
  SmoothProfile twist;
  SmoothProfile time_bump;
  double offset = 0.0;  // half the edge length
};

struct KnotLayout {
  StandardPresentation presentation;
  double epsilon = 0.0;
  std::vector<CrossingBlock> blocks;

  // Background (x, y, T) of a point of crossing chart j given in its
  // untwisted coordinates (r, phi, t).
  Vec3T<Dual> untwisted_to_background(std::size_t j, const PointD& q) const;
};

struct Atlas {
  std::string name;
  std::vector<FoliatedChart> charts;
  std::vector<Interface> interfaces;
  std::vector<std::string> deviations;
  nlohmann::json construction = nlohmann::json::object();
  std::shared_ptr<const KnotLayout> knot;

  bool has_chart(const std::string& name) const;
  const FoliatedChart& chart(const std::string& name) const;
  nlohmann::json to_json() const;
};

InterfaceCheck check_interface(const Atlas& atlas, const Interface& iface, const InterfaceTolerances& tol = {});

Atlas sphere_two_tori();
Atlas turbularization_atlas(int n);
Atlas turbularize_along_knot(const BraidWord& w);
// Needs a base produced by turbularize_along_knot.
Atlas dehn_surgery(const Atlas& base, const GluingMatrix& m);

// Metric of the torus leaf bounding the removed knot neighbourhood, in the
// coordinates (u, v) of the surgery collar: diag(c0, n^2).
Mat2 knot_boundary_metric(const KnotLayout& k);

}  // namespace parafol
