#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "parafol/braids.hpp"
#include "parafol/error.hpp"
#include "parafol/models.hpp"

using namespace parafol;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// Word sigma_1 ... sigma_{n-1}, whose closure is the unknot on n strands.
BraidWord staircase(int n) {
  BraidWord w;
  w.strands = n;
  for (int i = 1; i < n; ++i) w.letters.push_back({i, 1});
  return w;
}

}  // namespace

TEST_SUITE("braids") {
  TEST_CASE("parsing") {
    const BraidWord a = parse_braid_word("n=2: s1 s1 s1");
    CHECK(a.strands == 2);
    REQUIRE(a.letters.size() == 3);
    for (const auto& l : a.letters) CHECK(l == BraidLetter{1, 1});
    const BraidWord b = parse_braid_word("n=3: s1 s2^-1");
    CHECK(b.letters == std::vector<BraidLetter>{{1, 1}, {2, -1}});
    CHECK(parse_braid_word("s1 s2 s3^1").strands == 4);
    CHECK(parse_braid_word(b.to_string()).letters == b.letters);
    CHECK(code_of([] { parse_braid_word("n=2: s5"); }) == ErrorCode::kParameter);
    CHECK(code_of([] { parse_braid_word("n=2: s0"); }) == ErrorCode::kParameter);
    CHECK(code_of([] { parse_braid_word("n=2: x1"); }) == ErrorCode::kParse);
    CHECK(code_of([] { parse_braid_word("n=2: s1^2"); }) == ErrorCode::kParse);
    CHECK(code_of([] { parse_braid_word("n=: s1"); }) == ErrorCode::kParse);
  }

  TEST_CASE("closure components") {
    BraidWord e;
    e.strands = 3;
    CHECK(closure_components(e) == 3);
    CHECK(closure_components(parse_braid_word("n=2: s1")) == 1);
    CHECK(closure_components(parse_braid_word("n=2: s1 s1")) == 2);
    CHECK(closure_components(parse_braid_word("n=2: s1 s1 s1")) == 1);
    CHECK(closure_components(parse_braid_word("n=2: s1^-1 s1")) == 2);
  }

  TEST_CASE("closure components agree with union-find") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 200; ++i) {
      const BraidWord w = oracle::random_word(rng);
      CAPTURE(w.to_string());
      CHECK(closure_components(w) == oracle::union_find_components(w));
    }
  }

  TEST_CASE("components are invariant under splitting and re-joining the word") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
      const BraidWord w = oracle::random_word(rng);
      BraidWord joined;
      joined.strands = w.strands;
      const std::size_t cut = w.letters.size() / 2;
      joined.letters.insert(joined.letters.end(), w.letters.begin(), w.letters.begin() + static_cast<long>(cut));
      joined.letters.insert(joined.letters.end(), w.letters.begin() + static_cast<long>(cut), w.letters.end());
      CHECK(closure_components(joined) == closure_components(w));
    }
  }

  TEST_CASE("trefoil presentation") {
    const StandardPresentation p = standard_presentation(parse_braid_word("n=2: s1 s1 s1"));
    REQUIRE(p.crossings.size() == 3);
    CHECK(p.crossings[0].level == doctest::Approx(1.0 / 6));
    CHECK(p.crossings[1].level == doctest::Approx(3.0 / 6));
    CHECK(p.crossings[2].level == doctest::Approx(5.0 / 6));
    for (const auto& c : p.crossings) {
      CHECK(c.edge_length == doctest::Approx(0.25));
      CHECK(c.radius == doctest::Approx(0.125 + 2 * p.epsilon));
      CHECK(c.interval[1] - c.interval[0] == doctest::Approx(1.0 / 6));
    }
    CHECK(p.to_json()["crossings"].size() == 3);
  }

  TEST_CASE("links are rejected") {
    CHECK(code_of([] { standard_presentation(parse_braid_word("n=2: s1 s1")); }) == ErrorCode::kNotAKnot);
  }

  TEST_CASE("invariants of every accepted layout; rejection explains itself") {
    for (int n = 1; n <= 8; ++n) {
      CAPTURE(n);
      const BraidWord w = staircase(n);
      try {
        const StandardPresentation p = standard_presentation(w);
        for (std::size_t i = 0; i < p.crossings.size(); ++i) {
          const Crossing& c = p.crossings[i];
          if (i > 0) CHECK(p.crossings[i - 1].interval[1] < c.interval[0]);
          CHECK(c.radius == doctest::Approx(c.edge_length / 2 + 2 * p.epsilon));
          CHECK(std::hypot(c.center[0], c.center[1]) + c.radius <= kTranspositionRadius);
          for (int k = 0; k < n; ++k) {
            const double d = std::hypot(p.vertices[k][0] - c.center[0], p.vertices[k][1] - c.center[1]);
            if (k == c.vertex_a || k == c.vertex_b) CHECK(d < c.radius);
            else CHECK(d >= c.radius);
          }
        }
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kLayout);
        CHECK(std::string(e.what()).find("no admissible tube radius") != std::string::npos);
        // deterministic message
        try {
          standard_presentation(w);
        } catch (const Error& again) {
          CHECK(std::string(again.what()) == e.what());
        }
      }
    }
    CHECK(code_of([] { standard_presentation(staircase(3)); }) == ErrorCode::kLayout);
  }
}
