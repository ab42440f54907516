#include "parafol/braids.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>
#include <sstream>

#include "parafol/error.hpp"
#include "parafol/models.hpp"

namespace parafol {

std::string BraidWord::to_string() const {
  std::ostringstream os;
  os << "n=" << strands << ":";
  for (const auto& l : letters) os << " s" << l.index << (l.sign < 0 ? "^-1" : "");
  return os.str();
}

BraidWord parse_braid_word(const std::string& text) {
  static const std::regex header(R"(^\s*n\s*=\s*(\d+)\s*:(.*)$)");
  static const std::regex letter(R"(^s(\d+)(\^(-?1))?$)");
  BraidWord w;
  std::string body = text;
  int declared = 0;
  std::smatch m;
  if (std::regex_match(text, m, header)) {
    declared = std::stoi(m[1].str());
    if (declared < 1) throw Error(ErrorCode::kParameter, "strand count must be positive");
    body = m[2].str();
  } else if (text.find(':') != std::string::npos || text.find('=') != std::string::npos) {
    throw Error(ErrorCode::kParse, "malformed strand count in '" + text + "'");
  }
  std::istringstream is(body);
  std::string tok;
  int max_index = 0;
  while (is >> tok) {
    std::smatch lm;
    if (!std::regex_match(tok, lm, letter)) throw Error(ErrorCode::kParse, "malformed braid token '" + tok + "'");
    BraidLetter l;
    l.index = std::stoi(lm[1].str());
    l.sign = lm[3].matched && lm[3].str() == "-1" ? -1 : 1;
    if (l.index < 1) throw Error(ErrorCode::kParameter, "generator index must be at least 1 in '" + tok + "'");
    max_index = std::max(max_index, l.index);
    w.letters.push_back(l);
  }
  w.strands = declared > 0 ? declared : max_index + 1;
  if (max_index > w.strands - 1) {
    std::ostringstream os;
    os << "generator s" << max_index << " out of range for " << w.strands << " strands";
    throw Error(ErrorCode::kParameter, os.str());
  }
  return w;
}

int closure_components(const BraidWord& w) {
  std::vector<int> perm(static_cast<std::size_t>(w.strands));
  std::iota(perm.begin(), perm.end(), 0);
  for (const auto& l : w.letters) std::swap(perm[static_cast<std::size_t>(l.index - 1)], perm[static_cast<std::size_t>(l.index)]);
  std::vector<bool> seen(perm.size(), false);
  int cycles = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) seen[j] = true;
  }
  return cycles;
}

nlohmann::json StandardPresentation::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : crossings) {
    cs.push_back({{"letter", c.letter},
                  {"generator", c.generator.index},
                  {"sign", c.generator.sign},
                  {"level", c.level},
                  {"interval", c.interval},
                  {"center", c.center},
                  {"radius", c.radius},
                  {"vertices", {c.vertex_a, c.vertex_b}}});
  }
  return {{"word", word.to_string()},
          {"strands", n},
          {"vertices", vertices},
          {"epsilon", epsilon},
          {"epsilon_factor", epsilon_factor},
          {"crossings", cs}};
}

namespace {

double dist(const Vec2& a, const Vec2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

// Empty when every layout condition holds, otherwise the first violation.
std::string layout_violation(const std::vector<Vec2>& vs, const std::vector<Crossing>& cs, double eps) {
  std::ostringstream os;
  const int n = static_cast<int>(vs.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dist(vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]) <= 2.0 * eps) {
        os << "tubes around vertices " << i << " and " << j << " intersect";
        return os.str();
      }
  if (kPolygonRadius + eps > kTwistPlateau) return "tubes leave the euclidean core r <= 1/4";
  for (const auto& c : cs) {
    const double r = c.edge_length / 2.0 + 2.0 * eps;
    const double cr = std::hypot(c.center[0], c.center[1]);
    for (int k = 0; k < n; ++k) {
      if (k == c.vertex_a || k == c.vertex_b) continue;
      if (dist(vs[static_cast<std::size_t>(k)], c.center) < r + eps) {
        os << "crossing disk " << c.letter << " meets the tube around vertex " << k;
        return os.str();
      }
    }
    if (cr + r > kTranspositionRadius) {
      os << "crossing disk " << c.letter << " leaves D(1/3)";
      return os.str();
    }
    if (cr + r > kTwistPlateau) {
      os << "crossing disk " << c.letter << " leaves the euclidean core r <= 1/4";
      return os.str();
    }
    // The strings and their non-flat tube part must sit in the rigidly rotated plateau.
    if ((c.edge_length / 2.0 + 6.0 * eps / 7.0) / (3.0 * r) > kTwistPlateau) {
      os << "strings of crossing " << c.letter << " leave the twist plateau";
      return os.str();
    }
    if (eps >= c.edge_length / 2.0) {
      os << "string tubes of crossing " << c.letter << " overlap";
      return os.str();
    }
  }
  return {};
}

}  // namespace

StandardPresentation standard_presentation(const BraidWord& w) {
  const int comps = closure_components(w);
  if (comps != 1) {
    std::ostringstream os;
    os << "closure of " << w.to_string() << " has " << comps << " components; only knots are supported";
    throw Error(ErrorCode::kNotAKnot, os.str());
  }
  StandardPresentation p;
  p.word = w;
  p.n = w.strands;
  p.vertices = polygon_vertices(w.strands);
  const std::size_t N = w.letters.size();
  for (std::size_t j = 0; j < N; ++j) {
    Crossing c;
    c.letter = static_cast<int>(j);
    c.generator = w.letters[j];
    c.level = (static_cast<double>(j) + 0.5) / static_cast<double>(N);
    const double half = 1.0 / (4.0 * static_cast<double>(N));
    c.interval = {c.level - half, c.level + half};
    c.vertex_a = c.generator.index - 1;
    c.vertex_b = c.generator.index;
    const Vec2& a = p.vertices[static_cast<std::size_t>(c.vertex_a)];
    const Vec2& b = p.vertices[static_cast<std::size_t>(c.vertex_b)];
    c.center = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    c.edge_length = dist(a, b);
    c.edge_angle = std::atan2(b[1] - a[1], b[0] - a[0]);
    p.crossings.push_back(c);
  }

  const double rule = epsilon_rule(w.strands);
  std::string first_failure;
  for (int step = 0; step <= 18; ++step) {
    const double factor = 1.0 - 0.05 * step;
    const double eps = factor * rule;
    const std::string why = layout_violation(p.vertices, p.crossings, eps);
    if (step == 0) first_failure = why;
    if (!why.empty()) {
      if (step == 18) {
        std::ostringstream os;
        os << "no admissible tube radius for " << w.to_string() << ": at the rule value " << first_failure
           << "; at 0.1x the rule " << why;
        throw Error(ErrorCode::kLayout, os.str());
      }
      continue;
    }
    p.epsilon = eps;
    p.epsilon_factor = factor;
    for (auto& c : p.crossings) c.radius = c.edge_length / 2.0 + 2.0 * eps;
    break;
  }
  return p;
}

}  // namespace parafol
