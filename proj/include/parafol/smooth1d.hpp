#pragma once

#include <array>
#include <optional>
#include <vector>

#include "json.hpp"

#include "parafol/dual.hpp"

namespace parafol {

// A closed-form piece that a profile segment either is, or blends between.
struct Formula {
  enum class Kind { kConstant, kSquare };
  Kind kind = Kind::kConstant;
  double c = 0.0;

  static Formula constant(double value) { return {Kind::kConstant, value}; }
  static Formula square() { return {Kind::kSquare, 0.0}; }

  // (f, f', f'') at t.
  std::array<double, 3> eval(double t) const;
  bool operator==(const Formula&) const = default;
};

struct Segment {
  enum class Kind { kConstant, kSquare, kTransition };
  Kind kind = Kind::kConstant;
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;  // kConstant only
  // kTransition: endpoints default to the neighbouring segments' formulas.
  std::optional<Formula> from;
  std::optional<Formula> to;
  // Flat-zone widths at each end of a transition. Negative means "use the
  // default", one tenth of the segment width.
  double margin_lo = -1.0;
  double margin_hi = -1.0;

  static Segment constant(double lo, double hi, double value);
  static Segment square(double lo, double hi);
  static Segment transition(double lo, double hi);
  static Segment transition(double lo, double hi, double v0, double v1);
};

// C-infinity step on [0, 1]: exp(-1/x) / (exp(-1/x) + exp(-1/(1-x))).
// Returns (s, s', s'').
std::array<double, 3> smooth_step(double x);

// Immutable 1-D profile assembled from a tiling segment table.
class SmoothProfile {
 public:
  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }

  // (f, f', f''); entries above `order` are zero. Throws kDomain outside
  // [domain_lo, domain_hi].
  std::array<double, 3> eval_with_derivs(double t, int order = 2) const;
  double operator()(double t) const { return eval_with_derivs(t, 0)[0]; }
  Dual operator()(const Dual& t) const;
  // f' carried through with slope f''.
  Dual derivative(const Dual& t) const;

  const std::vector<Segment>& segments() const { return segments_; }
  nlohmann::json to_json() const;

 private:
  friend SmoothProfile make_piecewise(std::vector<Segment> parts);
  struct Resolved {
    Segment seg;
    Formula from;
    Formula to;
    double core_lo = 0.0;
    double core_hi = 0.0;
  };
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<Segment> segments_;
  std::vector<Resolved> resolved_;
};

// Monotone bump on [a, b]: f == f0 on [a, a+margin], f == f1 on [b-margin, b].
SmoothProfile make_bump(double a, double b, double f0, double f1, double margin);

// Builds a profile from an ordered segment list that tiles its domain.
SmoothProfile make_piecewise(std::vector<Segment> parts);

}  // namespace parafol
