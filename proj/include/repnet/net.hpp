#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "repnet/tape.hpp"
#include "repnet/tensor.hpp"

namespace repnet {

enum class Regime { linear, affine, nonlinear };
enum class Activation { identity, tanh };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct LayerSpec {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Activation act = Activation::identity;
  bool use_bias = false;
};

// One trainable map per generator symbol. Weights are stored as
// (out_dim x in_dim) matrices; a batch forward computes x * W^T per layer.
struct GeneratorNet {
  std::string name;
  Regime regime = Regime::linear;
  std::size_t block_dim = 1;
  std::size_t in_blocks = 0;
  std::size_t out_blocks = 0;
  std::size_t in_width = 0;
  std::size_t out_width = 0;
  std::vector<LayerSpec> layers;
  std::vector<Tensor2> weights;
  std::vector<std::vector<double>> biases;  // empty vector when the layer has none

  std::size_t param_count() const;
};

// Width chain from the reference architecture: in, 2*in+2, 2*in+2, 100, 50, out.
std::vector<std::size_t> default_architecture(std::size_t in_width, std::size_t out_width);

GeneratorNet make_net(const std::string& name, Regime regime, std::size_t block_dim,
                      std::size_t in_blocks, std::size_t out_blocks,
                      std::size_t in_width, std::size_t out_width,
                      const std::vector<std::size_t>& widths);

// Single-layer net with explicit weights; used by tests and hand-built maps.
GeneratorNet single_layer_net(const std::string& name, const Tensor2& w,
                              std::size_t block_dim, std::size_t in_blocks,
                              std::size_t out_blocks);

// Uniform fan-based init: every weight drawn from [-a, a],
// a = sqrt(6 / (in_dim + out_dim)); biases start at zero.
void init_params(GeneratorNet& net, std::mt19937_64& rng);

void validate_net(const GeneratorNet& net);

Tensor2 forward(const GeneratorNet& net, const Tensor2& x);

// Tape registration: leaves for every parameter tensor, in layer order.
struct TapeNet {
  const GeneratorNet* net = nullptr;
  std::vector<Tape::Id> weight_ids;
  std::vector<Tape::Id> bias_ids;  // -1 where absent
};

TapeNet register_net(Tape& tape, const GeneratorNet& net);
Tape::Id apply_net(Tape& tape, const TapeNet& tn, Tape::Id x);
// Collapsed matrix of a linear-regime net, built on-tape as a weight chain.
Tape::Id net_matrix(Tape& tape, const TapeNet& tn);

using NetMap = std::map<std::string, GeneratorNet>;

}  // namespace repnet
