#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "repnet/builtins.hpp"
#include "repnet/checkpoint.hpp"
#include "repnet/matrix_io.hpp"
#include "repnet/rng.hpp"
#include "repnet/trainer.hpp"

using namespace repnet;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("repnet_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("net checkpoints round-trip bit-exactly") {
  for (Regime regime : {Regime::linear, Regime::affine, Regime::nonlinear}) {
    GeneratorNet net =
        make_net("f", regime, 1, 2, 2, 2, 2, default_architecture(2, 2));
    auto rng = substream(31, "init/f");
    init_params(net, rng);
    if (regime == Regime::affine) {
      std::uniform_real_distribution<double> dist(-0.3, 0.3);
      for (auto& b : net.biases)
        for (double& v : b) v = dist(rng);
    }
    const GeneratorNet back = net_from_json(net_to_json(net));
    CHECK(back.name == net.name);
    CHECK(back.regime == net.regime);
    REQUIRE(back.weights.size() == net.weights.size());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      CHECK(back.weights[l].data == net.weights[l].data);  // bit-exact
      CHECK(back.biases[l] == net.biases[l]);
    }
  }
}

TEST_CASE("save_nets / load_nets round-trips a whole system") {
  const Presentation pres = builtin("braid", {});
  const NetMap nets = build_generator_nets(pres, Regime::linear, 1, 77);
  TempDir dir;
  save_nets(dir.path.string(), nets);
  const NetMap back = load_nets(dir.path.string());
  REQUIRE(back.size() == nets.size());
  for (const auto& [name, net] : nets) {
    const GeneratorNet& b = back.at(name);
    for (std::size_t l = 0; l < net.weights.size(); ++l)
      CHECK(b.weights[l].data == net.weights[l].data);
  }
}

TEST_CASE("matrix text files round-trip bit-exactly") {
  LinearRep rep;
  rep.block_dim = 1;
  rep.semantics = ProductSemantics::concat;
  Tensor2 m(2, 2);
  m.at(0, 0) = -0.71153460000000009;
  m.at(0, 1) = 1.0 / 3.0;
  m.at(1, 0) = 1e-300;
  m.at(1, 1) = 12345.678901234567;
  rep.maps["f"] = AffineMap{m, {0.1, -2.0 / 7.0}};

  const LinearRep back = rep_from_text(rep_to_text(rep));
  CHECK(back.block_dim == rep.block_dim);
  CHECK(back.maps.at("f").m.data == rep.maps.at("f").m.data);
  CHECK(back.maps.at("f").offset == rep.maps.at("f").offset);
}

TEST_CASE("matrix file errors carry line numbers") {
  CHECK_THROWS_WITH_AS(rep_from_text("matrix f 2 2\n1 2\n"),
                       doctest::Contains("line"), std::runtime_error);
  CHECK_THROWS_AS(rep_from_text("bogus directive\n"), std::runtime_error);
}

TEST_CASE("load_nets rejects an empty directory") {
  TempDir dir;
  CHECK_THROWS(load_nets(dir.path.string()));
}
