#include "repnet/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace repnet {

std::string net_to_json(const GeneratorNet& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : net.layers)
    layers.push_back({{"in_dim", l.in_dim},
                      {"out_dim", l.out_dim},
                      {"activation", l.act == Activation::tanh ? "tanh" : "identity"},
                      {"use_bias", l.use_bias}});
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& w : net.weights) weights.push_back(w.data);
  nlohmann::json biases = nlohmann::json::array();
  for (const auto& b : net.biases) biases.push_back(b);

  const nlohmann::json j{{"name", net.name},
                         {"regime", to_string(net.regime)},
                         {"block_dim", net.block_dim},
                         {"in_blocks", net.in_blocks},
                         {"out_blocks", net.out_blocks},
                         {"in_width", net.in_width},
                         {"out_width", net.out_width},
                         {"layers", layers},
                         {"weights", weights},
                         {"biases", biases}};
  return j.dump(2) + "\n";
}

GeneratorNet net_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  GeneratorNet net;
  net.name = j.at("name").get<std::string>();
  net.regime = regime_from_string(j.at("regime").get<std::string>());
  net.block_dim = j.at("block_dim").get<std::size_t>();
  net.in_blocks = j.at("in_blocks").get<std::size_t>();
  net.out_blocks = j.at("out_blocks").get<std::size_t>();
  net.in_width = j.at("in_width").get<std::size_t>();
  net.out_width = j.at("out_width").get<std::size_t>();
  for (const auto& l : j.at("layers")) {
    LayerSpec spec;
    spec.in_dim = l.at("in_dim").get<std::size_t>();
    spec.out_dim = l.at("out_dim").get<std::size_t>();
    spec.act = l.at("activation").get<std::string>() == "tanh" ? Activation::tanh
                                                               : Activation::identity;
    spec.use_bias = l.at("use_bias").get<bool>();
    net.layers.push_back(spec);
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Tensor2 w(net.layers[l].out_dim, net.layers[l].in_dim);
    w.data = j.at("weights").at(l).get<std::vector<double>>();
    if (w.data.size() != w.rows * w.cols)
      throw std::runtime_error("checkpoint: weight length mismatch in net " + net.name);
    net.weights.push_back(std::move(w));
    net.biases.push_back(j.at("biases").at(l).get<std::vector<double>>());
  }
  validate_net(net);
  return net;
}

void save_nets(const std::string& dir, const NetMap& nets) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, net] : nets) {
    const std::string path = dir + "/net_" + name + ".json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << net_to_json(net);
  }
}

NetMap load_nets(const std::string& dir) {
  NetMap nets;
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("not a directory: " + dir);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string fname = entry.path().filename().string();
    if (fname.rfind("net_", 0) != 0 || entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    GeneratorNet net = net_from_json(ss.str());
    nets.emplace(net.name, std::move(net));
  }
  if (nets.empty()) throw std::runtime_error("no net_*.json checkpoints in " + dir);
  return nets;
}

}  // namespace repnet
