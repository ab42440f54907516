#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "parafol/tensor.hpp"

namespace parafol {

struct BraidLetter {
  int index = 1;  // sigma_index, 1-based
  int sign = 1;   // +1 or -1
  bool operator==(const BraidLetter&) const = default;
};

struct BraidWord {
  int strands = 1;
  std::vector<BraidLetter> letters;

  std::string to_string() const;  // "n=2: s1 s1^-1"
};

// Accepts "n=K: s1 s2^-1 ..." or just the letters, in which case the strand
// count is one more than the largest index. Throws kParse on a malformed token
// and kParameter on an out-of-range index.
BraidWord parse_braid_word(const std::string& text);

// Cycles of the permutation obtained by composing the letters' transpositions.
int closure_components(const BraidWord& w);

struct Crossing {
  int letter = 0;  // position in the word, 0-based
  BraidLetter generator;
  double level = 0.0;             // t_j in (0, 1)
  std::array<double, 2> interval{};  // I(t_j)
  Vec2 center{};
  double radius = 0.0;            // d(edge) / 2 + 2 eps
  double edge_length = 0.0;
  double edge_angle = 0.0;        // direction from the first to the second vertex
  int vertex_a = 0;               // 0-based vertices of the edge
  int vertex_b = 0;
};

struct StandardPresentation {
  BraidWord word;
  int n = 0;
  std::vector<Vec2> vertices;
  double epsilon = 0.0;
  double epsilon_factor = 1.0;  // fraction of the layout rule actually used
  std::vector<Crossing> crossings;

  nlohmann::json to_json() const;
};

// Throws kNotAKnot for a multi-component closure and kLayout, naming the
// violated condition, when no admissible tube radius exists.
StandardPresentation standard_presentation(const BraidWord& w);

}  // namespace parafol
