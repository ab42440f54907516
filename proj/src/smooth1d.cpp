#include "parafol/smooth1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parafol/error.hpp"

namespace parafol {

namespace {

constexpr double kJunctionTol = 1e-12;

// sigma(x) = exp(-1/x) and its first two derivatives, zero for x <= 0.
std::array<double, 3> sigma(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  const double e = std::exp(-1.0 / x);
  const double x2 = x * x;
  return {e, e / x2, e * (1.0 - 2.0 * x) / (x2 * x2)};
}

std::string describe(const Segment& s) {
  std::ostringstream os;
  os << "[" << s.lo << ", " << s.hi << "]";
  return os.str();
}

Formula formula_of(const Segment& s) {
  return s.kind == Segment::Kind::kSquare ? Formula::square() : Formula::constant(s.value);
}

}  // namespace

std::array<double, 3> Formula::eval(double t) const {
  if (kind == Kind::kSquare) return {t * t, 2.0 * t, 2.0};
  return {c, 0.0, 0.0};
}

Segment Segment::constant(double lo, double hi, double value) {
  Segment s;
  s.kind = Kind::kConstant;
  s.lo = lo;
  s.hi = hi;
  s.value = value;
  return s;
}

Segment Segment::square(double lo, double hi) {
  Segment s;
  s.kind = Kind::kSquare;
  s.lo = lo;
  s.hi = hi;
  return s;
}

Segment Segment::transition(double lo, double hi) {
  Segment s;
  s.kind = Kind::kTransition;
  s.lo = lo;
  s.hi = hi;
  return s;
}

Segment Segment::transition(double lo, double hi, double v0, double v1) {
  Segment s = transition(lo, hi);
  s.from = Formula::constant(v0);
  s.to = Formula::constant(v1);
  return s;
}

std::array<double, 3> smooth_step(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  const auto a = sigma(x);
  const auto b0 = sigma(1.0 - x);
  // b(x) = sigma(1 - x): b' = -sigma'(1 - x), b'' = sigma''(1 - x).
  const std::array<double, 3> b{b0[0], -b0[1], b0[2]};
  const double den = a[0] + b[0];
  const double s = a[0] / den;
  const double num = a[1] * b[0] - a[0] * b[1];
  const double den2 = den * den;
  const double s1 = num / den2;
  const double num1 = a[2] * b[0] - a[0] * b[2];
  const double den2_1 = 2.0 * den * (a[1] + b[1]);
  const double s2 = (num1 * den2 - num * den2_1) / (den2 * den2);
  return {s, s1, s2};
}

std::array<double, 3> SmoothProfile::eval_with_derivs(double t, int order) const {
  const double slack = kJunctionTol * std::max(1.0, hi_ - lo_);
  if (!(t >= lo_ - slack && t <= hi_ + slack)) {
    std::ostringstream os;
    os << "profile evaluated at " << t << " outside [" << lo_ << ", " << hi_ << "]";
    throw Error(ErrorCode::kDomain, os.str());
  }
  if (order < 0 || order > 2) throw Error(ErrorCode::kParameter, "derivative order must be 0, 1 or 2");
  auto it = std::upper_bound(resolved_.begin(), resolved_.end(), t,
                             [](double x, const Resolved& r) { return x < r.seg.lo; });
  const Resolved& r = it == resolved_.begin() ? resolved_.front() : *std::prev(it);

  std::array<double, 3> out{0.0, 0.0, 0.0};
  switch (r.seg.kind) {
    case Segment::Kind::kConstant:
      out = {r.seg.value, 0.0, 0.0};
      break;
    case Segment::Kind::kSquare:
      out = Formula::square().eval(t);
      break;
    case Segment::Kind::kTransition: {
      const auto left = r.from.eval(t);
      const auto right = r.to.eval(t);
      const double width = r.core_hi - r.core_lo;
      const auto s = smooth_step((t - r.core_lo) / width);
      const double s1 = s[1] / width;
      const double s2 = s[2] / (width * width);
      out[0] = (1.0 - s[0]) * left[0] + s[0] * right[0];
      out[1] = (1.0 - s[0]) * left[1] + s[0] * right[1] + s1 * (right[0] - left[0]);
      out[2] = (1.0 - s[0]) * left[2] + s[0] * right[2] + 2.0 * s1 * (right[1] - left[1]) +
               s2 * (right[0] - left[0]);
      break;
    }
  }
  for (int k = order + 1; k < 3; ++k) out[k] = 0.0;
  return out;
}

Dual SmoothProfile::operator()(const Dual& t) const {
  const auto f = eval_with_derivs(t.v, 1);
  return chain(t, f[0], f[1]);
}

Dual SmoothProfile::derivative(const Dual& t) const {
  const auto f = eval_with_derivs(t.v, 2);
  return chain(t, f[1], f[2]);
}

nlohmann::json SmoothProfile::to_json() const {
  nlohmann::json segs = nlohmann::json::array();
  auto formula_json = [](const Formula& f) {
    return f.kind == Formula::Kind::kSquare ? nlohmann::json{{"kind", "square"}}
                                            : nlohmann::json{{"kind", "constant"}, {"value", f.c}};
  };
  for (const auto& r : resolved_) {
    nlohmann::json s;
    s["lo"] = r.seg.lo;
    s["hi"] = r.seg.hi;
    switch (r.seg.kind) {
      case Segment::Kind::kConstant:
        s["kind"] = "constant";
        s["value"] = r.seg.value;
        break;
      case Segment::Kind::kSquare:
        s["kind"] = "square";
        break;
      case Segment::Kind::kTransition:
        s["kind"] = "transition";
        s["from"] = formula_json(r.from);
        s["to"] = formula_json(r.to);
        s["core"] = {r.core_lo, r.core_hi};
        break;
    }
    segs.push_back(std::move(s));
  }
  return {{"domain", {lo_, hi_}}, {"segments", segs}};
}

SmoothProfile make_bump(double a, double b, double f0, double f1, double margin) {
  if (!(a < b)) throw Error(ErrorCode::kParameter, "bump interval must satisfy a < b");
  if (!(margin > 0.0 && margin < 0.5 * (b - a)))
    throw Error(ErrorCode::kParameter, "bump margin must lie in (0, (b-a)/2)");
  Segment s = Segment::transition(a, b, f0, f1);
  s.margin_lo = margin;
  s.margin_hi = margin;
  return make_piecewise({s});
}

SmoothProfile make_piecewise(std::vector<Segment> parts) {
  if (parts.empty()) throw Error(ErrorCode::kParameter, "profile needs at least one segment");
  for (const auto& s : parts) {
    if (!(s.lo < s.hi)) throw Error(ErrorCode::kParameter, "empty segment " + describe(s));
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const double gap = parts[i].lo - parts[i - 1].hi;
    if (std::fabs(gap) > kJunctionTol) {
      throw Error(ErrorCode::kParameter, (gap > 0 ? "gap" : "overlap") + std::string(" between ") +
                                             describe(parts[i - 1]) + " and " + describe(parts[i]));
    }
  }

  SmoothProfile p;
  p.lo_ = parts.front().lo;
  p.hi_ = parts.back().hi;
  p.segments_ = parts;

  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Segment& s = parts[i];
    SmoothProfile::Resolved r{s, Formula{}, Formula{}, s.lo, s.hi};
    if (s.kind != Segment::Kind::kTransition) {
      r.from = r.to = formula_of(s);
      if (i > 0 && parts[i - 1].kind != Segment::Kind::kTransition && !(formula_of(parts[i - 1]) == r.from)) {
        throw Error(ErrorCode::kParameter, "incompatible junction without a transition between " +
                                               describe(parts[i - 1]) + " and " + describe(s));
      }
      p.resolved_.push_back(r);
      continue;
    }
    // Transition: resolve endpoints against neighbours.
    std::optional<Formula> left = s.from;
    std::optional<Formula> right = s.to;
    if (i > 0) {
      const Formula prev = p.resolved_.back().to;
      if (left && !(*left == prev))
        throw Error(ErrorCode::kParameter, "transition " + describe(s) + " does not start where its neighbour ends");
      left = prev;
    }
    if (i + 1 < parts.size()) {
      const Segment& n = parts[i + 1];
      if (n.kind != Segment::Kind::kTransition) {
        const Formula next = formula_of(n);
        if (right && !(*right == next))
          throw Error(ErrorCode::kParameter, "transition " + describe(s) + " does not end where its neighbour starts");
        right = next;
      } else if (n.from) {
        if (right && !(*right == *n.from))
          throw Error(ErrorCode::kParameter, "consecutive transitions disagree at " + describe(s));
        right = n.from;
      }
    }
    if (!left || !right)
      throw Error(ErrorCode::kParameter, "transition " + describe(s) + " has an unresolved endpoint");
    const double width = s.hi - s.lo;
    const double mlo = s.margin_lo < 0.0 ? 0.1 * width : s.margin_lo;
    const double mhi = s.margin_hi < 0.0 ? 0.1 * width : s.margin_hi;
    if (mlo + mhi >= width)
      throw Error(ErrorCode::kParameter, "transition margins leave no core in " + describe(s));
    r.from = *left;
    r.to = *right;
    r.core_lo = s.lo + mlo;
    r.core_hi = s.hi - mhi;
    p.resolved_.push_back(r);
  }
  return p;
}

}  // namespace parafol
