#include "repnet/net.hpp"

#include <cmath>
#include <stdexcept>

namespace repnet {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::linear: return "linear";
    case Regime::affine: return "affine";
    case Regime::nonlinear: return "nonlinear";
  }
  return "?";
}

Regime regime_from_string(const std::string& s) {
  if (s == "linear") return Regime::linear;
  if (s == "affine") return Regime::affine;
  if (s == "nonlinear") return Regime::nonlinear;
  throw std::invalid_argument("unknown regime: " + s);
}

std::size_t GeneratorNet::param_count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

std::vector<std::size_t> default_architecture(std::size_t in_width, std::size_t out_width) {
  if (in_width < 1 || out_width < 1)
    throw std::invalid_argument("default_architecture: widths must be positive");
  return {in_width, 2 * in_width + 2, 2 * in_width + 2, 100, 50, out_width};
}

GeneratorNet make_net(const std::string& name, Regime regime, std::size_t block_dim,
                      std::size_t in_blocks, std::size_t out_blocks,
                      std::size_t in_width, std::size_t out_width,
                      const std::vector<std::size_t>& widths) {
  if (widths.size() < 2) throw std::invalid_argument("make_net: need at least one layer");
  if (widths.front() != in_width || widths.back() != out_width)
    throw std::invalid_argument("make_net: width chain does not match in/out widths");

  GeneratorNet net;
  net.name = name;
  net.regime = regime;
  net.block_dim = block_dim;
  net.in_blocks = in_blocks;
  net.out_blocks = out_blocks;
  net.in_width = in_width;
  net.out_width = out_width;

  const std::size_t num_layers = widths.size() - 1;
  for (std::size_t l = 0; l < num_layers; ++l) {
    LayerSpec spec;
    spec.in_dim = widths[l];
    spec.out_dim = widths[l + 1];
    spec.use_bias = (regime == Regime::affine);
    const bool last = (l + 1 == num_layers);
    spec.act = (regime == Regime::nonlinear && !last) ? Activation::tanh
                                                      : Activation::identity;
    net.layers.push_back(spec);
    net.weights.emplace_back(spec.out_dim, spec.in_dim);
    net.biases.emplace_back(spec.use_bias ? std::vector<double>(spec.out_dim, 0.0)
                                          : std::vector<double>());
  }
  return net;
}

GeneratorNet single_layer_net(const std::string& name, const Tensor2& w,
                              std::size_t block_dim, std::size_t in_blocks,
                              std::size_t out_blocks) {
  GeneratorNet net;
  net.name = name;
  net.regime = Regime::linear;
  net.block_dim = block_dim;
  net.in_blocks = in_blocks;
  net.out_blocks = out_blocks;
  net.in_width = w.cols;
  net.out_width = w.rows;
  net.layers.push_back({w.cols, w.rows, Activation::identity, false});
  net.weights.push_back(w);
  net.biases.emplace_back();
  return net;
}

void init_params(GeneratorNet& net, std::mt19937_64& rng) {
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const LayerSpec& spec = net.layers[l];
    const double a = std::sqrt(6.0 / static_cast<double>(spec.in_dim + spec.out_dim));
    std::uniform_real_distribution<double> dist(-a, a);
    for (double& w : net.weights[l].data) w = dist(rng);
    for (double& b : net.biases[l]) b = 0.0;
  }
}

void validate_net(const GeneratorNet& net) {
  if (net.layers.empty()) throw std::invalid_argument("net has no layers");
  if (net.layers.front().in_dim != net.in_width ||
      net.layers.back().out_dim != net.out_width)
    throw std::invalid_argument("net layer chain does not span the declared widths");
  for (std::size_t l = 0; l + 1 < net.layers.size(); ++l)
    if (net.layers[l].out_dim != net.layers[l + 1].in_dim)
      throw std::invalid_argument("net layer dims do not chain");
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const LayerSpec& spec = net.layers[l];
    if (net.weights[l].rows != spec.out_dim || net.weights[l].cols != spec.in_dim)
      throw std::invalid_argument("weight shape mismatch");
    const bool last = (l + 1 == net.layers.size());
    switch (net.regime) {
      case Regime::linear:
        if (spec.act != Activation::identity || spec.use_bias)
          throw std::invalid_argument("linear regime requires identity activations, no bias");
        break;
      case Regime::affine:
        if (spec.act != Activation::identity || !spec.use_bias)
          throw std::invalid_argument("affine regime requires identity activations with bias");
        break;
      case Regime::nonlinear:
        if (spec.use_bias) throw std::invalid_argument("nonlinear regime uses no bias");
        if (last && spec.act != Activation::identity)
          throw std::invalid_argument("nonlinear regime: last layer is identity");
        if (!last && spec.act != Activation::tanh)
          throw std::invalid_argument("nonlinear regime: hidden activations are tanh");
        break;
    }
    if (spec.use_bias != !net.biases[l].empty())
      throw std::invalid_argument("bias presence mismatch");
    if (spec.use_bias && net.biases[l].size() != spec.out_dim)
      throw std::invalid_argument("bias length mismatch");
  }
}

Tensor2 forward(const GeneratorNet& net, const Tensor2& x) {
  if (x.cols != net.in_width)
    throw std::invalid_argument("forward: input width mismatch for net " + net.name);
  Tensor2 cur = x;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Tensor2 next = matmul_nt(cur, net.weights[l]);
    if (net.layers[l].use_bias) {
      for (std::size_t r = 0; r < next.rows; ++r)
        for (std::size_t j = 0; j < next.cols; ++j) next.at(r, j) += net.biases[l][j];
    }
    if (net.layers[l].act == Activation::tanh)
      for (double& v : next.data) v = std::tanh(v);
    cur = std::move(next);
  }
  return cur;
}

TapeNet register_net(Tape& tape, const GeneratorNet& net) {
  TapeNet tn;
  tn.net = &net;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    tn.weight_ids.push_back(tape.leaf(net.weights[l]));
    if (net.layers[l].use_bias) {
      Tensor2 b(1, net.biases[l].size());
      b.data = net.biases[l];
      tn.bias_ids.push_back(tape.leaf(b));
    } else {
      tn.bias_ids.push_back(-1);
    }
  }
  return tn;
}

Tape::Id apply_net(Tape& tape, const TapeNet& tn, Tape::Id x) {
  Tape::Id cur = x;
  const GeneratorNet& net = *tn.net;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    cur = tape.matmul_nt(cur, tn.weight_ids[l]);
    if (tn.bias_ids[l] >= 0) cur = tape.add_bias(cur, tn.bias_ids[l]);
    if (net.layers[l].act == Activation::tanh) cur = tape.tanh_act(cur);
  }
  return cur;
}

Tape::Id net_matrix(Tape& tape, const TapeNet& tn) {
  const GeneratorNet& net = *tn.net;
  if (net.regime != Regime::linear)
    throw std::invalid_argument("net_matrix: only linear nets collapse on tape");
  Tape::Id m = tn.weight_ids.back();
  for (std::size_t l = net.layers.size() - 1; l-- > 0;)
    m = tape.matmul(m, tn.weight_ids[l]);
  return m;
}

}  // namespace repnet
