#include "parafol/assembly.hpp"

#include <cmath>
#include <regex>
#include <sstream>

#include "assembly_internal.hpp"
#include "parafol/error.hpp"

namespace parafol {

GluingMatrix GluingMatrix::parse(const std::string& text) {
  static const std::regex re(R"(^\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw Error(ErrorCode::kParse, "gluing matrix must be 'a,b,c,d', got '" + text + "'");
  GluingMatrix g{std::stoll(m[1].str()), std::stoll(m[2].str()), std::stoll(m[3].str()), std::stoll(m[4].str())};
  g.validate();
  return g;
}

void GluingMatrix::validate() const {
  if (det() != 1) {
    std::ostringstream os;
    os << "gluing matrix (" << a << "," << b << ";" << c << "," << d << ") has determinant " << det()
       << ", expected 1";
    throw Error(ErrorCode::kParameter, os.str());
  }
}

IntMat2 surgery_boundary_metric_exact(const GluingMatrix& m) {
  // columns of m are the images of du and dv
  return {{{m.a * m.a + m.c * m.c, m.a * m.b + m.c * m.d}, {m.a * m.b + m.c * m.d, m.b * m.b + m.d * m.d}}};
}

Mat2 surgery_boundary_metric(const GluingMatrix& m) {
  m.validate();
  const IntMat2 e = surgery_boundary_metric_exact(m);
  return {{{static_cast<double>(e[0][0]), static_cast<double>(e[0][1])},
           {static_cast<double>(e[1][0]), static_cast<double>(e[1][1])}}};
}

IntMat2 printed_surgery_metric(const GluingMatrix& m) {
  const long long off = m.a * m.c + m.b * m.d;
  return {{{m.a * m.a + m.c * m.c, off}, {off, m.b * m.b + m.d * m.d}}};
}

nlohmann::json Interface::to_json() const {
  nlohmann::json j = {{"chart_a", chart_a},
                      {"chart_b", chart_b},
                      {"kind", reflect_axis ? "boundary" : "overlap"},
                      {"map", description},
                      {"samples", samples.size()}};
  if (reflect_axis) j["reflect_axis"] = *reflect_axis;
  return j;
}

bool Atlas::has_chart(const std::string& n) const {
  for (const auto& c : charts)
    if (c.name == n) return true;
  return false;
}

const FoliatedChart& Atlas::chart(const std::string& n) const {
  for (const auto& c : charts)
    if (c.name == n) return c;
  throw Error(ErrorCode::kParameter, "atlas '" + name + "' has no chart '" + n + "'");
}

nlohmann::json Atlas::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : charts) cs.push_back({{"name", c.name}, {"box", c.box.to_json()}, {"descriptor", c.descriptor}});
  nlohmann::json is = nlohmann::json::array();
  for (const auto& i : interfaces) is.push_back(i.to_json());
  nlohmann::json j = {{"name", name}, {"charts", cs}, {"interfaces", is}, {"deviations", deviations}};
  if (!construction.empty()) j["construction"] = construction;
  return j;
}

namespace {

constexpr double kInterfaceStep = 2e-6;

struct PulledBack {
  Mat3 g;
  Vec3 alpha;
};

PulledBack pull_back(const FoliatedChart& b, const Interface& iface, const Point& p) {
  const PointD q = iface.map(seed(p));
  Mat3 J;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) J[i][k] = q[i].d[k];
  if (iface.reflect_axis)
    for (int i = 0; i < 3; ++i) J[i][*iface.reflect_axis] = -J[i][*iface.reflect_axis];
  const Point qv = values(q);
  return {congruence(J, b.metric.value(qv)), transpose_apply(J, b.alpha.value(qv))};
}

}  // namespace

InterfaceCheck check_interface(const Atlas& atlas, const Interface& iface, const InterfaceTolerances& tol) {
  const FoliatedChart& A = atlas.chart(iface.chart_a);
  const FoliatedChart& B = atlas.chart(iface.chart_b);
  InterfaceCheck out;
  out.chart_a = iface.chart_a;
  out.chart_b = iface.chart_b;
  out.samples = iface.samples.size();
  for (const Point& p : iface.samples) {
    const Mat3D gA = A.metric.eval(seed(p));
    const PulledBack pb = pull_back(B, iface, p);
    const double dv = max_abs_diff(values(gA), pb.g);
    if (dv > out.value_residual) {
      out.value_residual = dv;
      out.value_argmax = p;
    }
    for (int k = 0; k < 3; ++k) {
      Point lo = p, hi = p;
      lo[k] -= kInterfaceStep;
      hi[k] += kInterfaceStep;
      const Mat3 gl = pull_back(B, iface, lo).g;
      const Mat3 gh = pull_back(B, iface, hi).g;
      Mat3 fd;
      const double flip = iface.reflect_axis && *iface.reflect_axis == k ? -1.0 : 1.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) fd[i][j] = flip * (gh[i][j] - gl[i][j]) / (2.0 * kInterfaceStep);
      const double dd = max_abs_diff(partial(gA, k), fd);
      if (dd > out.derivative_residual) {
        out.derivative_residual = dd;
        out.derivative_argmax = p;
      }
    }
    // Collinearity of the defining forms: normalised wedge product.
    const Vec3 a = A.alpha.value(p);
    const Vec3& b = pb.alpha;
    const double na = std::sqrt(dot(a, a)), nb = std::sqrt(dot(b, b));
    double w = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) w = std::fmax(w, std::fabs(a[i] * b[j] - a[j] * b[i]));
    const double df = (na > 0.0 && nb > 0.0) ? w / (na * nb) : 1.0;
    if (df > out.form_residual) {
      out.form_residual = df;
      out.form_argmax = p;
    }
  }
  out.pass = out.samples > 0 && out.value_residual < tol.value && out.derivative_residual < tol.derivative &&
             out.form_residual < tol.form;
  return out;
}

std::vector<double> detail::spread(double lo, double hi, int n, bool periodic) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(lo + (hi - lo) * (periodic ? i : i + 0.5) / n);
  return xs;
}

namespace {

using detail::spread;

// torus0 and torus1 meet along r = 1; the tangential coordinates are glued by
// h = (0 1; -1 0) acting on (t, phi).
Interface sphere_interface() {
  Interface i;
  i.chart_a = "torus0";
  i.chart_b = "torus1";
  i.description = "r' = r mirrored across r = 1; (t', phi') = (phi, -t)";
  i.reflect_axis = 0;
  i.map = [](const PointD& q) { return PointD{q[0], -q[2], q[1]}; };
  for (double r : spread(0.9, 0.999, 4, false))
    for (double phi : spread(0.0, kTwoPi, 12, true))
      for (double t : spread(0.0, kTwoPi, 12, true)) i.samples.push_back({r, phi, t});
  return i;
}

}  // namespace

Atlas sphere_two_tori() {
  Atlas a;
  a.name = "sphere";
  a.charts.push_back(parabolic_solid_torus("torus0"));
  a.charts.push_back(parabolic_solid_torus("torus1"));
  a.interfaces.push_back(sphere_interface());
  a.construction = {{"gluing", {{"a", 0}, {"b", 1}, {"c", -1}, {"d", 0}}}};
  return a;
}

namespace {

// Tube k in (rho, theta, t) as a piece of torus0 in (r, phi, t).
ChartMap tube_to_background(const Vec2& v) {
  return [v](const PointD& q) {
    const Dual x = v[0] + q[0] * cos(q[1]);
    const Dual y = v[1] + q[0] * sin(q[1]);
    return PointD{sqrt(x * x + y * y), atan2(y, x), q[2]};
  };
}

}  // namespace

void detail::add_tube_interfaces(Atlas& a, const std::vector<Vec2>& vertices, double eps,
                         const std::function<bool(int, double)>& inside_ball) {
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    Interface i;
    i.chart_a = "tube" + std::to_string(k);
    i.chart_b = "torus0";
    i.description = "x = v_k + rho (cos theta, sin theta), t' = t";
    i.map = tube_to_background(vertices[k]);
    for (double rho : spread(0.9 * eps, 0.998 * eps, 4, false))
      for (double th : spread(0.0, kTwoPi, 12, true))
        for (double t : spread(0.0, kTwoPi, 16, true))
          if (!inside_ball(static_cast<int>(k), t)) i.samples.push_back({rho, th, t});
    a.interfaces.push_back(std::move(i));
  }
}

Atlas turbularization_atlas(int n) {
  Atlas a = sphere_two_tori();
  a.name = "turbularization";
  Turbularization t = trivial_turbularization(n);
  for (auto& c : t.tubes) a.charts.push_back(std::move(c));
  detail::add_tube_interfaces(a, t.layout.vertices, t.layout.epsilon, [](int, double) { return false; });
  a.deviations = {"tube profile G = r^2 on [0, eps/8) instead of 0",
                  "tube profile constant middle value (eps/6)^2"};
  a.construction["turbularization"] = {{"n", n},
                                       {"epsilon", t.layout.epsilon},
                                       {"vertices", t.layout.vertices},
                                       {"min_vertex_distance", t.layout.min_vertex_distance}};
  return a;
}

}  // namespace parafol
