#include "parafol/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "parafol/error.hpp"

namespace parafol {

void Tolerances::set(const std::string& name, double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw Error(ErrorCode::kParameter, "tolerance '" + name + "' must be positive and finite");
  double* slot = nullptr;
  if (name == "integrability") slot = &integrability;
  else if (name == "ke") slot = &ke;
  else if (name == "ke_fd") slot = &ke_fd;
  else if (name == "spd") slot = &spd;
  else if (name == "frame") slot = &frame;
  else if (name == "alpha_frame") slot = &alpha_frame;
  else if (name == "core") slot = &core;
  else if (name == "stage") slot = &stage;
  else if (name == "interface_value") slot = &interface_value;
  else if (name == "interface_derivative") slot = &interface_derivative;
  else if (name == "interface_form") slot = &interface_form;
  if (!slot)
    throw Error(ErrorCode::kParameter,
                "unknown tolerance '" + name +
                    "' (known: integrability, ke, ke_fd, spd, frame, alpha_frame, core, stage, "
                    "interface_value, interface_derivative, interface_form)");
  *slot = value;
}

nlohmann::json Tolerances::to_json() const {
  return {{"integrability", integrability}, {"ke", ke},
          {"ke_fd", ke_fd},                 {"spd", spd},
          {"frame", frame},                 {"alpha_frame", alpha_frame},
          {"core", core},                   {"stage", stage},
          {"interface_value", interface_value}, {"interface_derivative", interface_derivative},
          {"interface_form", interface_form}};
}

namespace {

constexpr std::size_t kBlockSize = 2048;

enum Quantity { kMinEig, kFrob, kKe, kKeFd, kFrame, kAlphaFrame, kStageRank, kStageCancel, kCount };

struct Acc {
  double extreme = 0.0;
  Point where{};
  double sum = 0.0;
  std::size_t n = 0;
  bool any = false;

  // NaN is sticky so a broken point cannot hide behind a finite maximum.
  bool beats(double key, bool minimum) const {
    if (!any) return true;
    if (std::isnan(extreme)) return false;
    if (std::isnan(key)) return true;
    return minimum ? key < extreme : key > extreme;
  }
  void add(double v, const Point& p, bool minimum) {
    const double key = minimum ? v : std::fabs(v);
    if (beats(key, minimum)) {
      extreme = key;
      where = p;
    }
    any = true;
    sum += std::fabs(v);
    ++n;
  }
  void merge(const Acc& o, bool minimum) {
    if (!o.any) return;
    if (beats(o.extreme, minimum)) {
      extreme = o.extreme;
      where = o.where;
    }
    any = true;
    sum += o.sum;
    n += o.n;
  }
};

struct BlockResult {
  std::array<Acc, kCount> acc;
  std::size_t points = 0;
  std::size_t errors = 0;
  Point first_error{};
};

double axis_value(const ChartBox& b, int axis, int i, int n) {
  const double span = b.hi[axis] - b.lo[axis];
  return b.periodic[axis] ? b.lo[axis] + span * i / n : b.lo[axis] + span * (i + 0.5) / n;
}

Point grid_point(const ChartBox& b, const std::array<int, 3>& g, std::size_t idx) {
  const int i2 = static_cast<int>(idx % g[2]);
  const int i1 = static_cast<int>((idx / g[2]) % g[1]);
  const int i0 = static_cast<int>(idx / (static_cast<std::size_t>(g[2]) * g[1]));
  return {axis_value(b, 0, i0, g[0]), axis_value(b, 1, i1, g[1]), axis_value(b, 2, i2, g[2])};
}

bool excluded(const ChartBox& b, const Point& p) {
  return b.excluded_core_radius && p[b.radial_axis] < *b.excluded_core_radius;
}

double alpha_frame_residual(const FoliatedChart& fc, const Point& p) {
  const Vec3 a = fc.alpha.value(p);
  const auto fr = fc.frame(p);
  const double na = std::sqrt(dot(a, a));
  double r = 0.0;
  for (const Vec3& X : fr) {
    const double nx = std::sqrt(dot(X, X));
    if (na == 0.0 || nx == 0.0) return 1.0;
    r = std::fmax(r, std::fabs(dot(a, X)) / (na * nx));
  }
  return r;
}

struct ChartTask {
  const FoliatedChart* chart = nullptr;
  const InterpolationBlock* block = nullptr;
  std::size_t total = 0;
  std::size_t nblocks = 0;
  std::vector<BlockResult> results;
};

void evaluate_block(ChartTask& task, std::size_t bi, const SuiteOptions& o) {
  const FoliatedChart& fc = *task.chart;
  BlockResult& out = task.results[bi];
  const std::size_t end = std::min(task.total, (bi + 1) * kBlockSize);
  for (std::size_t idx = bi * kBlockSize; idx < end; ++idx) {
    const Point p = grid_point(fc.box, o.grid, idx);
    if (excluded(fc.box, p)) continue;
    ++out.points;
    try {
      out.acc[kMinEig].add(min_eigenvalue(fc.metric.value(p)), p, true);
      out.acc[kFrob].add(integrability_residual(fc.alpha, p), p, false);
      const CurvatureSample s = second_fundamental_form(fc, p);
      out.acc[kKe].add(s.Ke, p, false);
      if (o.finite_difference) {
        CurvatureOptions co;
        co.mode = PartialsMode::kFiniteDifference;
        out.acc[kKeFd].add(second_fundamental_form(fc, p, co).Ke, p, false);
      }
      const auto fr = fc.frame(p);
      CurvatureOptions alt;
      alt.frame = std::array<Vec3, 2>{Vec3{fr[0][0] + fr[1][0], fr[0][1] + fr[1][1], fr[0][2] + fr[1][2]}, fr[1]};
      const CurvatureSample sa = second_fundamental_form(fc, p, alt);
      // Rounding grows with |B| (H) and |B|^2 (Ke), so compare on those scales.
      const double kk = std::fabs(s.k1) + std::fabs(s.k2);
      out.acc[kFrame].add(std::fmax(std::fabs(sa.Ke - s.Ke) / (1.0 + kk * kk), std::fabs(sa.H - s.H) / (1.0 + kk)), p,
                          false);
      out.acc[kAlphaFrame].add(alpha_frame_residual(fc, p), p, false);
      if (task.block) {
        const Mat2D m = task.block->frame_block(seed(p));
        const double a = m[0][0].d[2], b = m[0][1].d[2], c = m[1][1].d[2];
        const double det = a * c - b * b;
        if (task.block->stage(p[2]) == 3) out.acc[kStageCancel].add(det, p, false);
        else out.acc[kStageRank].add(det, p, false);
      }
    } catch (const Error&) {
      if (out.errors++ == 0) out.first_error = p;
    }
  }
}

// |g - diag(1, 1, g_tt)| in Cartesian coordinates on the Euclidean core.
CheckResult core_regularity(const FoliatedChart& fc, double radius, double tol) {
  CheckResult c;
  c.name = "core_regularity";
  c.tolerance = tol;
  constexpr int kXY = 24, kT = 8;
  const double h = radius / std::sqrt(2.0);
  const int ta = 2;
  std::size_t n = 0;
  double sum = 0.0;
  for (int i = 0; i < kXY; ++i)
    for (int j = 0; j < kXY; ++j)
      for (int k = 0; k < kT; ++k) {
        const double x = -h + 2.0 * h * (i + 0.5) / kXY;
        const double y = -h + 2.0 * h * (j + 0.5) / kXY;
        const double t = axis_value(fc.box, ta, k, kT);
        const PointD c3 = seed({x, y, t});
        const PointD q{sqrt(c3[0] * c3[0] + c3[1] * c3[1]), atan2(c3[1], c3[0]), c3[2]};
        Mat3 J;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) J[a][b] = q[a].d[b];
        Point qp = values(q);
        if (qp[1] < fc.box.lo[1]) qp[1] += kTwoPi;
        const Mat3 g = congruence(J, fc.metric.value(qp));
        Mat3 ref = identity3();
        ref[2][2] = g[2][2];
        const double r = max_abs_diff(g, ref);
        sum += r;
        ++n;
        if (r > c.value) {
          c.value = r;
          c.argmax = {x, y, t};
        }
      }
  c.mean_abs = n ? sum / n : 0.0;
  c.pass = c.value <= tol;
  return c;
}

CheckResult from_acc(const std::string& name, const Acc& a, double tol, bool minimum) {
  CheckResult c;
  c.name = name;
  c.sense = minimum ? "min_above" : "max_below";
  c.value = a.extreme;
  c.argmax = a.where;
  c.mean_abs = a.n ? a.sum / a.n : 0.0;
  c.tolerance = tol;
  c.pass = minimum ? a.extreme >= tol : a.extreme <= tol;
  if (std::isnan(a.extreme)) c.pass = false;
  return c;
}

ChartReport finish_chart(const ChartTask& task, const SuiteOptions& o) {
  ChartReport r;
  r.chart = task.chart->name;
  r.grid = o.grid;
  BlockResult total;
  for (const auto& b : task.results) {
    for (int q = 0; q < kCount; ++q) total.acc[q].merge(b.acc[q], q == kMinEig);
    r.points += b.points;
    if (b.errors && !total.errors) total.first_error = b.first_error;
    total.errors += b.errors;
  }
  const Tolerances& t = o.tol;
  CheckResult err;
  err.name = "evaluation_errors";
  err.value = static_cast<double>(total.errors);
  err.mean_abs = r.points ? err.value / r.points : 0.0;
  err.argmax = total.first_error;
  err.tolerance = 0.0;
  err.pass = total.errors == 0;
  r.checks.push_back(err);
  r.checks.push_back(from_acc("spd_min_eig", total.acc[kMinEig], t.spd, true));
  r.checks.push_back(from_acc("frobenius", total.acc[kFrob], t.integrability, false));
  // Charts without a parabolicity claim still report Ke but do not gate on it.
  const bool parabolic = task.chart->descriptor.value("parabolic", true);
  auto ke_check = [parabolic](CheckResult c) {
    if (!parabolic) {
      c.sense = "report_only";
      c.pass = true;
    }
    return c;
  };
  r.checks.push_back(ke_check(from_acc("ke_analytic", total.acc[kKe], t.ke, false)));
  if (o.finite_difference) r.checks.push_back(ke_check(from_acc("ke_fd", total.acc[kKeFd], t.ke_fd, false)));
  r.checks.push_back(from_acc("frame_independence", total.acc[kFrame], t.frame, false));
  r.checks.push_back(from_acc("alpha_frame", total.acc[kAlphaFrame], t.alpha_frame, false));
  if (task.block) {
    r.checks.push_back(from_acc("stage_rank", total.acc[kStageRank], t.stage, false));
    r.checks.push_back(from_acc("stage_cancellation", total.acc[kStageCancel], t.stage, false));
  }
  const auto& d = task.chart->descriptor;
  if (d.contains("euclidean_core_radius"))
    r.checks.push_back(core_regularity(*task.chart, d["euclidean_core_radius"].get<double>(), t.core));
  std::sort(r.checks.begin(), r.checks.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return r;
}

std::optional<RadialProfiles> parabolic_profiles(const nlohmann::json& d) {
  const std::string model = d.value("model", "");
  if (model == "parabolic_solid_torus") return solid_torus_profiles();
  if (model == "parabolic_torus_cylinder") return torus_cylinder_profiles();
  if (model == "thick_reeb_tube") return tube_profiles(d["epsilon"].get<double>());
  return std::nullopt;
}

CheckResult disjoint_support(const std::string& chart, const RadialProfiles& p) {
  CheckResult c;
  c.name = "disjoint_support:" + chart;
  constexpr int kN = 10000;
  const double lo = p.f.domain_lo(), hi = p.f.domain_hi();
  double sum = 0.0;
  for (int i = 0; i <= kN; ++i) {
    const double r = lo + (hi - lo) * i / kN;
    const double v = std::fabs(p.f(r) * p.G.eval_with_derivs(r, 1)[1]);
    sum += v;
    if (v > c.value) {
      c.value = v;
      c.argmax = {r, 0.0, 0.0};
    }
  }
  c.mean_abs = sum / (kN + 1);
  c.pass = c.value <= 0.0;
  return c;
}

std::vector<CheckResult> transposition_checks(const Transposition& tr, const Tolerances& tol) {
  constexpr int kR = 24, kPhi = 24, kT = 24;
  const ChartBox& b = tr.chart.box;
  const double outer = kTranspositionRadius - tr.config.delta;
  CheckResult iso;
  iso.name = "pullback_isometry";
  iso.tolerance = tol.interface_value;
  CheckResult inv;
  inv.name = "boundary_invariant";
  inv.tolerance = tol.interface_value;
  std::size_t ni = 0, nb = 0;
  double si = 0.0, sb = 0.0;
  for (int i = 0; i < kR; ++i)
    for (int j = 0; j < kPhi; ++j)
      for (int k = 0; k < kT; ++k) {
        const Point p{axis_value(b, 0, i, kR), axis_value(b, 1, j, kPhi), axis_value(b, 2, k, kT)};
        if (excluded(b, p)) continue;
        const bool stage_region = p[2] > 0.5 && p[0] > kTwistPlateau && p[0] < outer;
        if (!stage_region) {
          // untwisted = twist^* chart
          const PointD q = tr.twist(seed(p));
          Mat3 J;
          for (int a = 0; a < 3; ++a)
            for (int c = 0; c < 3; ++c) J[a][c] = q[a].d[c];
          const Mat3 pulled = congruence(J, tr.chart.metric.value(values(q)));
          const double r = max_abs_diff(pulled, tr.untwisted.metric.value(p));
          si += r;
          ++ni;
          if (r > iso.value) {
            iso.value = r;
            iso.argmax = p;
          }
        }
      }
  // Outside the twisted annulus the data do not depend on t and match the
  // untwisted disk.
  for (double r : {outer + 0.25 * tr.config.delta, outer + 0.5 * tr.config.delta, kTranspositionRadius - 1e-9})
    for (int j = 0; j < kPhi; ++j)
      for (int k = 0; k < kT; ++k) {
        const Point p{r, axis_value(b, 1, j, kPhi), axis_value(b, 2, k, kT)};
        const double d1 = max_abs_diff(tr.chart.metric.value(p), tr.untwisted.metric.value(p));
        const Vec3 a0 = tr.chart.alpha.value(p), a1 = tr.untwisted.alpha.value(p);
        double d2 = 0.0;
        for (int c = 0; c < 3; ++c) d2 = std::fmax(d2, std::fabs(a0[c] - a1[c]));
        const double dd = std::fmax(d1, d2);
        sb += dd;
        ++nb;
        if (dd > inv.value) {
          inv.value = dd;
          inv.argmax = p;
        }
      }
  iso.mean_abs = ni ? si / ni : 0.0;
  inv.mean_abs = nb ? sb / nb : 0.0;
  iso.pass = iso.value <= iso.tolerance;
  inv.pass = inv.value <= inv.tolerance;
  return {inv, iso};
}

// The block equals the input metric on [0, first margin] and the identity at t = 1.
CheckResult collar_endpoints(const std::string& chart, const InterpolationBlock& blk) {
  CheckResult c;
  c.name = "collar_endpoints:" + chart;
  constexpr int kN = 16;
  std::size_t n = 0;
  double sum = 0.0;
  for (int i = 0; i < kN; ++i)
    for (int j = 0; j < kN; ++j) {
      const Vec2 uv{(i + 0.5) / kN, (j + 0.5) / kN};
      const auto abc = blk.coefficients(uv);
      for (double t : {0.0, 0.01, 1.0}) {
        const Mat2D m = blk.frame_block(lift({uv[0], uv[1], t}));
        const std::array<double, 3> want = t < 0.5 ? abc : std::array<double, 3>{1.0, 0.0, 1.0};
        const double r = std::fmax(std::fabs(m[0][0].v - want[0]),
                                   std::fmax(std::fabs(m[0][1].v - want[1]), std::fabs(m[1][1].v - want[2])));
        sum += r;
        ++n;
        if (r > c.value) {
          c.value = r;
          c.argmax = {uv[0], uv[1], t};
        }
      }
    }
  c.mean_abs = sum / n;
  c.pass = c.value <= 0.0;
  return c;
}

std::vector<CheckResult> global_checks(const Scenario& s, const SuiteOptions& o) {
  std::vector<CheckResult> out;
  for (const auto& c : s.atlas.charts)
    if (auto p = parabolic_profiles(c.descriptor)) out.push_back(disjoint_support(c.name, *p));
  if (s.transposition)
    for (auto& c : transposition_checks(*s.transposition, o.tol)) out.push_back(std::move(c));
  for (const auto& b : s.blocks) out.push_back(collar_endpoints(b.chart.name, b));
  if (s.atlas.construction.contains("surgery")) {
    const GluingMatrix m = GluingMatrix::parse(o.surgery);
    const IntMat2 e = surgery_boundary_metric_exact(m);
    CheckResult c;
    c.name = "surgery_metric_unimodular";
    c.value = static_cast<double>(std::llabs(e[0][0] * e[1][1] - e[0][1] * e[1][0] - 1));
    c.mean_abs = c.value;
    c.pass = c.value == 0.0 && e[0][0] > 0;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

nlohmann::json point_json(const Point& p) { return {p[0], p[1], p[2]}; }

nlohmann::json check_json(const CheckResult& c) {
  return {{"name", c.name},           {"sense", c.sense},  {"max_abs", c.value}, {"mean_abs", c.mean_abs},
          {"argmax", point_json(c.argmax)}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

void dump_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out += buf;
}

void dump(const nlohmann::json& j, std::string& out, int indent) {
  const std::string pad(indent + 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 2);
      }
      out += "\n" + std::string(indent, ' ') + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], out, indent + 2);
      }
      out += "\n" + std::string(indent, ' ') + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      dump_double(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

VerificationReport run_suite(const SuiteOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : o.grid)
    if (n < 1) throw Error(ErrorCode::kParameter, "grid resolution must be >= 1 on every axis");
  const std::size_t per_chart = static_cast<std::size_t>(o.grid[0]) * o.grid[1] * o.grid[2];

  Scenario s = build_scenario(o);
  const std::size_t total_points = per_chart * s.atlas.charts.size();
  if (total_points > kMaxGridPoints)
    throw Error(ErrorCode::kResource, "grid of " + std::to_string(total_points) + " points exceeds the limit of " +
                                          std::to_string(kMaxGridPoints));

  std::vector<const FoliatedChart*> charts;
  for (const auto& c : s.atlas.charts) charts.push_back(&c);
  std::sort(charts.begin(), charts.end(), [](auto* a, auto* b) { return a->name < b->name; });

  std::vector<ChartTask> tasks;
  for (const auto* c : charts) {
    ChartTask t;
    t.chart = c;
    for (const auto& b : s.blocks)
      if (b.chart.name == c->name) t.block = &b;
    t.total = per_chart;
    t.nblocks = (per_chart + kBlockSize - 1) / kBlockSize;
    t.results.resize(t.nblocks);
    tasks.push_back(std::move(t));
  }
  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    for (std::size_t b = 0; b < tasks[i].nblocks; ++b) work.emplace_back(i, b);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t w; (w = next.fetch_add(1)) < work.size();) evaluate_block(tasks[work[w].first], work[w].second, o);
  };
  const int nthreads = std::min<int>(resolve_threads(o.threads), static_cast<int>(std::max<std::size_t>(work.size(), 1)));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  VerificationReport r;
  r.scenario = s.name;
  r.parameters = s.parameters;
  r.parameters["grid"] = o.grid;
  r.parameters["tolerances"] = o.tol.to_json();
  r.parameters["finite_difference"] = o.finite_difference;
  for (const auto& t : tasks) r.charts.push_back(finish_chart(t, o));

  r.interface_tolerances = {o.tol.interface_value, o.tol.interface_derivative, o.tol.interface_form};
  for (const auto& i : s.atlas.interfaces) r.interfaces.push_back(check_interface(s.atlas, i, r.interface_tolerances));
  std::stable_sort(r.interfaces.begin(), r.interfaces.end(), [](const auto& a, const auto& b) {
    return std::tie(a.chart_a, a.chart_b) < std::tie(b.chart_a, b.chart_b);
  });

  r.global_checks = global_checks(s, o);
  r.deviations = s.atlas.deviations;
  for (const auto& c : s.atlas.charts)
    if (c.descriptor.contains("deviations"))
      for (const auto& d : c.descriptor["deviations"]) {
        const auto text = d.get<std::string>();
        if (std::find(r.deviations.begin(), r.deviations.end(), text) == r.deviations.end()) r.deviations.push_back(text);
      }

  r.pass = true;
  for (const auto& c : r.charts)
    for (const auto& k : c.checks) r.pass = r.pass && k.pass;
  for (const auto& i : r.interfaces) r.pass = r.pass && i.pass;
  for (const auto& g : r.global_checks) r.pass = r.pass && g.pass;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

nlohmann::json report_to_json(const VerificationReport& r, bool include_timing) {
  nlohmann::json charts = nlohmann::json::array();
  for (const auto& c : r.charts) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& k : c.checks) checks.push_back(check_json(k));
    charts.push_back({{"chart", c.chart}, {"grid", c.grid}, {"points", c.points}, {"checks", checks}});
  }
  nlohmann::json ifs = nlohmann::json::array();
  for (const auto& i : r.interfaces)
    ifs.push_back({{"chart_a", i.chart_a},
                   {"chart_b", i.chart_b},
                   {"samples", i.samples},
                   {"value_residual", i.value_residual},
                   {"value_argmax", point_json(i.value_argmax)},
                   {"derivative_residual", i.derivative_residual},
                   {"derivative_argmax", point_json(i.derivative_argmax)},
                   {"form_residual", i.form_residual},
                   {"form_argmax", point_json(i.form_argmax)},
                   {"pass", i.pass}});
  nlohmann::json globals = nlohmann::json::array();
  for (const auto& g : r.global_checks) globals.push_back(check_json(g));
  nlohmann::json j = {{"scenario", r.scenario},
                      {"parameters", r.parameters},
                      {"charts", charts},
                      {"interfaces", ifs},
                      {"interface_tolerances",
                       {{"value", r.interface_tolerances.value},
                        {"derivative", r.interface_tolerances.derivative},
                        {"form", r.interface_tolerances.form}}},
                      {"global_checks", globals},
                      {"deviations", r.deviations},
                      {"pass", r.pass}};
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

std::string canonical_dump(const nlohmann::json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

void emit_report(const VerificationReport& r, const std::string& path, bool include_timing) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  f << canonical_dump(report_to_json(r, include_timing));
  if (!f) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

std::string sample_field(const SuiteOptions& o, const std::string& chart, const std::string& field,
                         const std::string& slice, int resolution) {
  static const std::vector<std::string> fields{"Ke", "H", "k1", "k2", "min_eig", "frobenius"};
  if (std::find(fields.begin(), fields.end(), field) == fields.end())
    throw Error(ErrorCode::kParameter, "unknown field '" + field + "' (Ke, H, k1, k2, min_eig, frobenius)");
  if (resolution < 1 || static_cast<double>(resolution) * resolution > kMaxGridPoints)
    throw Error(ErrorCode::kResource, "sample resolution out of range");
  const Scenario s = build_scenario(o);
  const FoliatedChart& fc = s.atlas.chart(chart);

  const auto eq = slice.find('=');
  if (eq == std::string::npos) throw Error(ErrorCode::kParse, "slice must look like 'name=value', got '" + slice + "'");
  const std::string axis_name = slice.substr(0, eq);
  double fixed = 0.0;
  try {
    std::size_t used = 0;
    fixed = std::stod(slice.substr(eq + 1), &used);
    if (used != slice.size() - eq - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "bad slice value in '" + slice + "'");
  }
  int axis = -1;
  for (int k = 0; k < 3; ++k)
    if (fc.box.names[k] == axis_name) axis = k;
  if (axis < 0) throw Error(ErrorCode::kParameter, "chart '" + chart + "' has no coordinate '" + axis_name + "'");
  if (fixed < fc.box.lo[axis] || fixed > fc.box.hi[axis])
    throw Error(ErrorCode::kDomain, "slice value outside the chart box");
  const int a0 = axis == 0 ? 1 : 0;
  const int a1 = axis == 2 ? 1 : 2;

  std::ostringstream os;
  os << fc.box.names[a0] << ',' << fc.box.names[a1] << ',' << field << '\n';
  char buf[128];
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      Point p{};
      p[axis] = fixed;
      p[a0] = axis_value(fc.box, a0, i, resolution);
      p[a1] = axis_value(fc.box, a1, j, resolution);
      double v = std::numeric_limits<double>::quiet_NaN();
      if (!excluded(fc.box, p)) {
        try {
          if (field == "min_eig") v = min_eigenvalue(fc.metric.value(p));
          else if (field == "frobenius") v = integrability_residual(fc.alpha, p);
          else {
            const CurvatureSample c = second_fundamental_form(fc, p);
            v = field == "Ke" ? c.Ke : field == "H" ? c.H : field == "k1" ? c.k1 : c.k2;
          }
        } catch (const Error&) {
        }
      }
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", p[a0], p[a1], v);
      os << buf;
    }
  return os.str();
}

}  // namespace parafol
