#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "repnet/bracket.hpp"
#include "repnet/diagram.hpp"
#include "repnet/moves.hpp"

using namespace repnet;

namespace {

// Exact link maps for dim V = 2: R = flip on V⊗V, n = vec(I)^T, u = vec(I).
// Every trained relation holds exactly, and the bracket of a diagram counts
// loops: each closed component contributes a factor tr(I) = 2.
RtMaps exact_swap_maps() {
  RtMaps maps;
  maps.dim = 2;
  maps.R = Tensor2(4, 4);
  maps.R.at(0, 0) = 1;
  maps.R.at(1, 2) = 1;
  maps.R.at(2, 1) = 1;
  maps.R.at(3, 3) = 1;
  maps.R_inv = maps.R;
  maps.n = Tensor2(1, 4);
  maps.n.at(0, 0) = 1;
  maps.n.at(0, 3) = 1;
  maps.u = Tensor2(4, 1);
  maps.u.at(0, 0) = 1;
  maps.u.at(3, 0) = 1;
  return maps;
}

const char* kUnknot = "cup\ncap\n";

// Annular closure of two crossings between nested cups: the Hopf link.
const char* kHopf =
    "cup\n"
    "strand cup strand\n"
    "cross strand strand\n"
    "cross strand strand\n"
    "strand cap strand\n"
    "cap\n";

// Nested closure of sigma1 sigma2 sigma1 on four strands.
const char* kR3Knot =
    "cup\n"
    "strand cup strand\n"
    "cross strand strand\n"
    "strand cross strand\n"
    "cross strand strand\n"
    "strand cap strand\n"
    "cap\n";

}  // namespace

TEST_CASE("the two-slice unknot parses and is closed") {
  const SlicedDiagram d = parse_diagram(kUnknot);
  CHECK(d.slices.size() == 2);
  CHECK(d.closed());
}

TEST_CASE("a kinked unknot is valid by strand counting") {
  const SlicedDiagram d = parse_diagram("cup\ncross\ncap\n");
  CHECK(d.slices.size() == 3);
  CHECK(d.closed());
}

TEST_CASE("slice width mismatches name the offending slice") {
  const char* bad =
      "cup\n"
      "strand cup strand\n"
      "cross_inv strand strand\n"
      "strand cross_inv strand\n"
      "cap\n";  // slice 4 outputs 4 strands, cap expects 2
  CHECK_THROWS_WITH_AS(parse_diagram(bad), doctest::Contains("slice 5"),
                       std::invalid_argument);
}

TEST_CASE("unknown primitives are rejected") {
  CHECK_THROWS_WITH_AS(parse_diagram("cup\ntwist\ncap\n"),
                       doctest::Contains("unknown primitive"), std::invalid_argument);
}

TEST_CASE("bracket of the unknot is n∘u") {
  const RtMaps maps = exact_swap_maps();
  CHECK(evaluate_bracket(parse_diagram(kUnknot), maps) == 2.0);
}

TEST_CASE("bracket counts components for the exact swap maps") {
  const RtMaps maps = exact_swap_maps();
  CHECK(evaluate_bracket(parse_diagram(kHopf), maps) == 4.0);    // two components
  CHECK(evaluate_bracket(parse_diagram(kR3Knot), maps) == 2.0);  // one component
}

TEST_CASE("bracket of an open diagram is rejected") {
  SlicedDiagram open_d;
  open_d.slices.push_back({Prim::strand, Prim::strand});
  CHECK_THROWS(evaluate_bracket(open_d, exact_swap_maps()));
}

TEST_CASE("an extra strand-only slice changes nothing, exactly") {
  const RtMaps maps = exact_swap_maps();
  const SlicedDiagram d = parse_diagram(kHopf);
  SlicedDiagram padded = d;
  padded.slices.insert(padded.slices.begin() + 2,
                       std::vector<Prim>(4, Prim::strand));
  validate_diagram(padded);
  CHECK(evaluate_bracket(d, maps) == evaluate_bracket(padded, maps));
}

TEST_CASE("R2_insert adds an inverse crossing pair on the unknot") {
  const auto out = move_perturb(parse_diagram(kUnknot), Move::r2_insert);
  REQUIRE(out.has_value());
  CHECK(diagram_to_string(*out) == "cup\ncross\ncross_inv\ncap\n");
}

TEST_CASE("R3_exchange rewrites the braid pattern") {
  const auto out = move_perturb(parse_diagram(kR3Knot), Move::r3_exchange);
  REQUIRE(out.has_value());
  CHECK(diagram_to_string(*out) ==
        "cup\n"
        "strand cup strand\n"
        "strand cross strand\n"
        "cross strand strand\n"
        "strand cross strand\n"
        "strand cap strand\n"
        "cap\n");
  // not applicable on the plain Hopf slicing
  CHECK_FALSE(move_perturb(parse_diagram(kHopf), Move::r3_exchange).has_value());
}

TEST_CASE("slide_n_past_R moves a crossing through a cap") {
  const auto out = move_perturb(parse_diagram(kHopf), Move::slide_n_past_r);
  REQUIRE(out.has_value());
  CHECK(diagram_to_string(*out) ==
        "cup\n"
        "strand cup strand\n"
        "cross strand strand\n"
        "strand cross strand\n"
        "cap strand strand\n"
        "cap\n");
  CHECK_FALSE(move_perturb(parse_diagram(kUnknot), Move::slide_n_past_r).has_value());
}

TEST_CASE("moves preserve the bracket exactly for exact maps") {
  const RtMaps maps = exact_swap_maps();
  for (const char* src : {kUnknot, kHopf, kR3Knot}) {
    const SlicedDiagram d = parse_diagram(src);
    const double base = evaluate_bracket(d, maps);
    for (Move m : {Move::r2_insert, Move::r3_exchange, Move::slide_n_past_r}) {
      const auto out = move_perturb(d, m);
      if (!out) continue;
      CHECK(evaluate_bracket(*out, maps) == base);
    }
  }
}
