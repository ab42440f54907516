#include <random>

#include <Eigen/Eigenvalues>

#include "parafol/error.hpp"
#include "parafol/verify.hpp"

namespace parafol {

namespace {

Atlas single(const std::string& name, FoliatedChart fc) {
  Atlas a;
  a.name = name;
  if (fc.descriptor.contains("deviations"))
    for (const auto& d : fc.descriptor["deviations"]) a.deviations.push_back(d.get<std::string>());
  a.charts.push_back(std::move(fc));
  return a;
}

// Bump that is 1 on the middle of [0, 1] and 0 near both ends.
SmoothProfile inner_bump() {
  return make_piecewise({Segment::constant(0.0, 0.2, 0.0), Segment::transition(0.2, 0.4),
                         Segment::constant(0.4, 0.6, 1.0), Segment::transition(0.6, 0.8),
                         Segment::constant(0.8, 1.0, 0.0)});
}

// Random pair on [0, 1]^2: constant SPD H and G = H + phi(u) phi(v) S with
// phi supported away from the collar.
InterpolationInput random_pair(std::mt19937_64& rng, nlohmann::json& record) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::Matrix2d L;
  L << U(rng), U(rng), U(rng), U(rng);
  Eigen::Matrix2d H = L * L.transpose() + 0.5 * Eigen::Matrix2d::Identity();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
  const Eigen::Matrix2d F = es.operatorInverseSqrt();
  const double s00 = 0.2 * U(rng), s01 = 0.2 * U(rng), s11 = 0.2 * U(rng);

  InterpolationInput in;
  const SmoothProfile phi = inner_bump();
  const double h00 = H(0, 0), h01 = H(0, 1), h11 = H(1, 1);
  in.G = [=](const Vec2D& p) {
    const Dual w = phi(p[0]) * phi(p[1]);
    return Mat2D{{{h00 + w * s00, h01 + w * s01}, {h01 + w * s01, h11 + w * s11}}};
  };
  const double f00 = F(0, 0), f01 = F(0, 1), f11 = F(1, 1);
  in.frame = [=](const Vec2D&) { return Mat2D{{{Dual(f00), Dual(f01)}, {Dual(f01), Dual(f11)}}}; };
  in.cutoff = collar_cutoff(in.domain, 0.1);
  record = {{"H", {{h00, h01}, {h01, h11}}}, {"perturbation", {{s00, s01}, {s01, s11}}}};
  return in;
}

}  // namespace

Scenario build_scenario(const SuiteOptions& o) {
  Scenario s;
  s.name = o.scenario;
  const std::string& n = o.scenario;
  if (n == "reeb") {
    s.atlas = single(n, reeb_solid_torus());
  } else if (n == "thick-reeb") {
    s.atlas = single(n, thick_reeb_torus());
  } else if (n == "parabolic-torus") {
    s.atlas = single(n, parabolic_solid_torus());
  } else if (n == "torus-cylinder") {
    s.atlas = single(n, parabolic_torus_cylinder());
  } else if (n == "interp-block") {
    s.atlas.name = n;
    std::mt19937_64 rng(o.seed);
    nlohmann::json pairs = nlohmann::json::array();
    for (int k = 0; k < 5; ++k) {
      nlohmann::json rec;
      const InterpolationInput in = random_pair(rng, rec);
      InterpolationBlock b = interpolation_block(in, InterpolationConfig{});
      b.chart.name = "interp" + std::to_string(k);
      rec["D"] = b.D;
      pairs.push_back(rec);
      s.atlas.charts.push_back(b.chart);
      s.blocks.push_back(std::move(b));
    }
    s.parameters["seed"] = o.seed;
    s.parameters["pairs"] = pairs;
  } else if (n == "turbularization") {
    s.atlas = turbularization_atlas(o.n);
    s.parameters["n"] = o.n;
  } else if (n == "transposition") {
    TwistSide side;
    if (o.side == "left") side = TwistSide::kLeft;
    else if (o.side == "right") side = TwistSide::kRight;
    else throw Error(ErrorCode::kParameter, "side must be 'left' or 'right', got '" + o.side + "'");
    Transposition t = parabolic_transposition(default_transposition(side));
    s.atlas = single(n, t.chart);
    s.transposition = std::move(t);
    s.parameters["side"] = o.side;
  } else if (n == "sphere") {
    s.atlas = sphere_two_tori();
  } else if (n == "knot") {
    s.atlas = turbularize_along_knot(parse_braid_word(o.braid));
    s.parameters["braid"] = o.braid;
  } else if (n == "surgery") {
    const GluingMatrix m = GluingMatrix::parse(o.surgery);
    s.atlas = dehn_surgery(turbularize_along_knot(parse_braid_word(o.braid)), m);
    s.parameters["braid"] = o.braid;
    s.parameters["matrix"] = m.to_json();
  } else {
    throw Error(ErrorCode::kUnknownScenario,
                "unknown scenario '" + n +
                    "' (expected reeb, thick-reeb, parabolic-torus, torus-cylinder, interp-block, "
                    "turbularization, transposition, sphere, knot, surgery)");
  }

  if (o.corrupt_alpha) {
    for (auto& c : s.atlas.charts) {
      const bool polar = (c.box.names[0] == "r" || c.box.names[0] == "rho") &&
                         (c.box.names[1] == "phi" || c.box.names[1] == "theta");
      if (!polar) continue;
      auto base = c.alpha.eval;
      c.alpha.eval = [base](const PointD& q) {
        auto a = base(q);
        a[1] += 0.1 * q[0] * q[0];
        return a;
      };
      c.leaf_frame = nullptr;
    }
    s.parameters["corrupt_alpha"] = true;
  }
  return s;
}

}  // namespace parafol
