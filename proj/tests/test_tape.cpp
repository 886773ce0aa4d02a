#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "repnet/builtins.hpp"
#include "repnet/compile.hpp"
#include "repnet/net.hpp"
#include "repnet/rng.hpp"
#include "repnet/sampling.hpp"
#include "repnet/trainer.hpp"
#include "repnet/tape.hpp"
#include "testutil.hpp"

using namespace repnet;

TEST_CASE("gradient of |W x|^2 matches the hand derivative") {
  // loss = |W x|^2, W = I, x = (1,2): dL/dW = 2 (Wx) x^T = [[2,4],[4,8]]
  Tape tape;
  const Tape::Id w = tape.leaf(Tensor2::identity(2));
  const Tape::Id x = tape.constant(Tensor2::from_rows({{1.0, 2.0}}));
  const Tape::Id y = tape.matmul_nt(x, w);
  const Tape::Id loss = tape.sum_sq(y);
  CHECK(tape.scalar_value(loss) == doctest::Approx(5.0));
  tape.backward(loss);
  const Tensor2& g = tape.grad(w);
  CHECK(g.at(0, 0) == doctest::Approx(2.0));
  CHECK(g.at(0, 1) == doctest::Approx(4.0));
  CHECK(g.at(1, 0) == doctest::Approx(4.0));
  CHECK(g.at(1, 1) == doctest::Approx(8.0));
}

TEST_CASE("parameter unused by the loss gets a zero gradient") {
  Tape tape;
  const Tape::Id w = tape.leaf(Tensor2::identity(3));
  const Tape::Id x = tape.constant(Tensor2::from_rows({{1.0, 1.0}}));
  const Tape::Id loss = tape.sum_sq(x);
  tape.backward(loss);
  const Tensor2& g = tape.grad(w);
  for (double v : g.data) CHECK(v == 0.0);
}

TEST_CASE("tape is single use") {
  Tape tape;
  const Tape::Id x = tape.leaf(Tensor2::from_rows({{2.0}}));
  const Tape::Id loss = tape.sum_sq(x);
  tape.backward(loss);
  CHECK_THROWS_AS(tape.backward(loss), std::logic_error);
}

TEST_CASE("autodiff matches central finite differences on random nets") {
  // Braid relations exercise matmul, slicing, concatenation and (for the
  // nonlinear regime) tanh backward.
  const Presentation pres = builtin("braid", {});
  for (Regime regime : {Regime::linear, Regime::affine, Regime::nonlinear}) {
    for (std::uint64_t seed : {1ull, 2ull}) {
      NetMap nets;
      for (const char* name : {"f", "g"}) {
        GeneratorNet net = make_net(name, regime, 1, 2, 2, 2, 2, {2, 5, 3, 2});
        auto rng = substream(seed, std::string("init/") + name);
        init_params(net, rng);
        nets.emplace(name, std::move(net));
      }
      const auto rels = compile(pres, nets);
      std::vector<Tensor2> points;
      auto rng = substream(seed, "points");
      for (const auto& rel : rels)
        points.push_back(sample_width({-1, 1, 1, 1}, 8, rel.sample_width, rng));
      const auto result = testutil::gradcheck(rels, nets, points);
      INFO("regime ", to_string(regime), " seed ", seed, " worst ", result.worst);
      CHECK(result.max_rel_err < 1e-5);
    }
  }
}

TEST_CASE("autodiff through tensor-semantics kron expressions") {
  const Presentation pres = builtin("rt_system", {});
  NetMap nets = build_generator_nets(pres, Regime::linear, 2, 3);
  const auto rels = compile(pres, nets);
  std::vector<Tensor2> points;
  auto rng = substream(9, "points");
  for (const auto& rel : rels)
    points.push_back(sample_width({-1, 1, 1, 1}, 6, rel.sample_width, rng));
  const auto result = testutil::gradcheck(rels, nets, points);
  INFO("worst ", result.worst);
  CHECK(result.max_rel_err < 1e-5);
}

TEST_CASE("composition chains associatively across tapes") {
  // Evaluating g then f with two forwards equals one merged evaluation.
  std::mt19937_64 rng(5);
  GeneratorNet f = make_net("f", Regime::nonlinear, 1, 2, 2, 2, 2, {2, 4, 2});
  GeneratorNet g = make_net("g", Regime::nonlinear, 1, 2, 2, 2, 2, {2, 4, 2});
  init_params(f, rng);
  init_params(g, rng);
  const Tensor2 x = sample_width({-1, 1, 1, 1}, 5, 2, rng);

  const Tensor2 two_step = forward(f, forward(g, x));

  NetMap nets;
  nets.emplace("f", f);
  nets.emplace("g", g);
  Presentation pres;
  pres.kind = StructureKind::custom;
  pres.generators.push_back({"f", 2, 2, false, ""});
  pres.generators.push_back({"g", 2, 2, false, ""});
  const EvalExpr merged =
      lower_expr(*expr::compose(expr::gen("f"), expr::gen("g")), pres, 1);
  const Tensor2 one_step = eval_map(merged, nets, x);
  CHECK(max_abs_diff(two_step, one_step) == 0.0);
}
