#include "repnet/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "repnet/kernels.hpp"
#include "repnet/rng.hpp"

namespace repnet {

const char* to_string(OptimizerKind k) {
  return k == OptimizerKind::adam ? "adam" : "sgd";
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd") return OptimizerKind::sgd;
  throw std::invalid_argument("unknown optimizer: " + s);
}

namespace {

std::size_t tensor_width(std::size_t blocks, std::size_t dim) {
  std::size_t w = 1;
  for (std::size_t i = 0; i < blocks; ++i) w *= dim;
  return w;
}

GeneratorNet build_one(const std::string& name, Regime regime, std::size_t block_dim,
                       std::size_t in_blocks, std::size_t out_blocks,
                       ProductSemantics sem, std::uint64_t seed) {
  const bool concat = sem == ProductSemantics::concat;
  const std::size_t in_w = concat ? in_blocks * block_dim : tensor_width(in_blocks, block_dim);
  const std::size_t out_w =
      concat ? out_blocks * block_dim : tensor_width(out_blocks, block_dim);
  GeneratorNet net = make_net(name, regime, block_dim, in_blocks, out_blocks, in_w, out_w,
                              default_architecture(in_w, out_w));
  auto rng = substream(seed, "init/" + name);
  init_params(net, rng);
  return net;
}

struct ParamSlot {
  std::string net_name;
  std::size_t layer;
  bool is_bias;
  std::size_t size;
};

std::vector<ParamSlot> collect_slots(const NetMap& nets) {
  std::vector<ParamSlot> slots;
  for (const auto& [name, net] : nets)
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      slots.push_back({name, l, false, net.weights[l].size()});
      if (!net.biases[l].empty()) slots.push_back({name, l, true, net.biases[l].size()});
    }
  return slots;
}

double* slot_data(NetMap& nets, const ParamSlot& s) {
  GeneratorNet& net = nets.at(s.net_name);
  return s.is_bias ? net.biases[s.layer].data() : net.weights[s.layer].data.data();
}

}  // namespace

NetMap build_generator_nets(const Presentation& p, Regime regime, std::size_t block_dim,
                            std::uint64_t seed) {
  validate(p);
  NetMap nets;
  for (const auto& g : p.generators) {
    nets.emplace(g.name, build_one(g.name, regime, block_dim, g.in_blocks, g.out_blocks,
                                   p.semantics, seed));
    if (g.invertible)
      nets.emplace(g.inverse_name,
                   build_one(g.inverse_name, regime, block_dim, g.out_blocks, g.in_blocks,
                             p.semantics, seed));
  }
  return nets;
}

TrainReport train(const Presentation& p, NetMap& nets, const TrainConfig& cfg) {
  if (cfg.learning_rate <= 0) throw std::invalid_argument("learning_rate must be positive");
  if (cfg.batch_size < 1 || cfg.max_steps < 1)
    throw std::invalid_argument("batch_size and max_steps must be positive");
  if (cfg.target_residual < 0) throw std::invalid_argument("target_residual must be >= 0");

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CompiledRelation> rels = compile(p, nets);

  std::vector<double> weights = cfg.relation_weights;
  if (weights.empty()) weights.assign(rels.size(), 1.0);
  if (weights.size() != rels.size())
    throw std::invalid_argument("relation_weights size mismatch");
  for (double w : weights)
    if (w <= 0) throw std::invalid_argument("relation weights must be positive");

  TrainReport report;
  report.config = cfg;
  report.presentation_name = p.name;
  report.block_dim = rels.empty() ? 1 : rels.front().block_dim;
  report.regime = nets.empty() ? "linear" : to_string(nets.begin()->second.regime);
  for (const auto& r : rels) report.relation_labels.push_back(r.label);

  const SampleDomain domain{cfg.domain_low, cfg.domain_high, 1, 1};

  // Fixed held-out samples, one independent substream per relation.
  std::vector<Tensor2> heldout;
  for (std::size_t i = 0; i < rels.size(); ++i) {
    auto rng = substream(cfg.seed, "heldout/" + rels[i].label);
    heldout.push_back(sample_width(domain, cfg.heldout_points, rels[i].sample_width, rng));
  }

  auto eval_heldout = [&](std::vector<double>& out) {
    out.resize(rels.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rels.size(); ++i) {
      out[i] = relation_residual(rels[i], nets, heldout[i], cfg.threads);
      total += out[i];
    }
    return total;
  };

  // Optimizer state, one slot per parameter tensor.
  const std::vector<ParamSlot> slots = collect_slots(nets);
  std::vector<std::vector<double>> adam_m, adam_v;
  if (cfg.optimizer == OptimizerKind::adam) {
    for (const auto& s : slots) {
      adam_m.emplace_back(s.size, 0.0);
      adam_v.emplace_back(s.size, 0.0);
    }
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

  auto batch_rng = substream(cfg.seed, "train/batch");

  NetMap best_nets = nets;
  double best_total = std::numeric_limits<double>::infinity();
  std::vector<double> residuals;
  std::size_t adam_t = 0;

  for (std::size_t step = 1; step <= cfg.max_steps; ++step) {
    Tape tape;
    std::map<std::string, TapeNet> tape_nets;
    for (const auto& [name, net] : nets) tape_nets.emplace(name, register_net(tape, net));

    std::vector<Tape::Id> terms;
    for (const auto& rel : rels) {
      const Tape::Id x =
          tape.constant(sample_width(domain, cfg.batch_size, rel.sample_width, batch_rng));
      terms.push_back(relation_residual_on_tape(tape, rel, tape_nets, x));
    }
    const Tape::Id loss = tape.weighted_sum(terms, weights);

    if (!std::isfinite(tape.scalar_value(loss))) {
      report.diverged = true;
      report.steps_used = step - 1;
      break;
    }

    tape.backward(loss);
    ++adam_t;
    const double inv_bc1 = 1.0 / (1.0 - std::pow(kBeta1, static_cast<double>(adam_t)));
    const double inv_bc2 = 1.0 / (1.0 - std::pow(kBeta2, static_cast<double>(adam_t)));
    for (std::size_t si = 0; si < slots.size(); ++si) {
      const ParamSlot& s = slots[si];
      const TapeNet& tn = tape_nets.at(s.net_name);
      const Tape::Id id = s.is_bias ? tn.bias_ids[s.layer] : tn.weight_ids[s.layer];
      const Tensor2& g = tape.grad(id);
      double* pdata = slot_data(nets, s);
      if (cfg.optimizer == OptimizerKind::adam) {
        kern::ops().adam_step(pdata, adam_m[si].data(), adam_v[si].data(), g.data.data(),
                              s.size, cfg.learning_rate, kBeta1, kBeta2, kEps, inv_bc1,
                              inv_bc2);
      } else {
        kern::ops().sgd_step(pdata, g.data.data(), s.size, cfg.learning_rate);
      }
    }
    report.steps_used = step;

    const bool eval_now =
        step == 1 || step % cfg.eval_interval == 0 || step == cfg.max_steps;
    if (!eval_now) continue;

    const double total = eval_heldout(residuals);
    for (std::size_t i = 0; i < rels.size(); ++i)
      report.history.push_back({step, rels[i].label, residuals[i]});
    if (total < best_total) {
      best_total = total;
      best_nets = nets;
      report.best_step = step;
    }
    bool all_below = true;
    for (double r : residuals)
      if (!(r < cfg.target_residual)) all_below = false;
    if (all_below && !rels.empty()) {
      report.converged = true;
      break;
    }
  }

  nets = best_nets;
  report.best_total_residual = best_total;
  const double final_total = eval_heldout(residuals);
  (void)final_total;
  for (std::size_t i = 0; i < rels.size(); ++i)
    report.final_residuals[rels[i].label] = residuals[i];

  const auto t1 = std::chrono::steady_clock::now();
  report.wall_seconds =
      cfg.deterministic ? 0.0 : std::chrono::duration<double>(t1 - t0).count();
  return report;
}

std::map<std::string, double> probe_extra_relations(const Presentation& p,
                                                    const NetMap& nets,
                                                    const std::vector<RelationEq>& probes,
                                                    std::size_t points,
                                                    const TrainConfig& cfg) {
  const SampleDomain domain{cfg.domain_low, cfg.domain_high, 1, 1};
  std::map<std::string, double> out;
  for (const auto& probe : probes) {
    const CompiledRelation rel = compile_relation(probe, p, nets);
    auto rng = substream(cfg.seed, "probe/" + rel.label);
    const Tensor2 x = sample_width(domain, points, rel.sample_width, rng);
    out[rel.label] = relation_residual(rel, nets, x, cfg.threads);
  }
  return out;
}

namespace {

nlohmann::json config_to_json(const TrainConfig& c) {
  return nlohmann::json{{"optimizer", to_string(c.optimizer)},
                        {"learning_rate", c.learning_rate},
                        {"batch_size", c.batch_size},
                        {"max_steps", c.max_steps},
                        {"target_residual", c.target_residual},
                        {"seed", c.seed},
                        {"domain_low", c.domain_low},
                        {"domain_high", c.domain_high},
                        {"relation_weights", c.relation_weights},
                        {"deterministic", c.deterministic},
                        {"threads", c.threads},
                        {"eval_interval", c.eval_interval},
                        {"heldout_points", c.heldout_points}};
}

TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
  c.learning_rate = j.at("learning_rate").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.max_steps = j.at("max_steps").get<std::size_t>();
  c.target_residual = j.at("target_residual").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.domain_low = j.at("domain_low").get<double>();
  c.domain_high = j.at("domain_high").get<double>();
  c.relation_weights = j.at("relation_weights").get<std::vector<double>>();
  c.deterministic = j.at("deterministic").get<bool>();
  c.threads = j.at("threads").get<std::size_t>();
  c.eval_interval = j.at("eval_interval").get<std::size_t>();
  c.heldout_points = j.at("heldout_points").get<std::size_t>();
  return c;
}

}  // namespace

std::string report_to_json(const TrainReport& r) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& h : r.history)
    hist.push_back({{"step", h.step}, {"label", h.label}, {"value", h.value}});
  nlohmann::json j{{"config", config_to_json(r.config)},
                   {"presentation", r.presentation_name},
                   {"regime", r.regime},
                   {"block_dim", r.block_dim},
                   {"relations", r.relation_labels},
                   {"history", hist},
                   {"final", r.final_residuals},
                   {"probes", r.probe_residuals},
                   {"converged", r.converged},
                   {"diverged", r.diverged},
                   {"steps_used", r.steps_used},
                   {"best_step", r.best_step},
                   {"best_total_residual", r.best_total_residual},
                   {"wall_seconds", r.wall_seconds}};
  return j.dump(2) + "\n";
}

TrainReport report_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  TrainReport r;
  r.config = config_from_json(j.at("config"));
  r.presentation_name = j.at("presentation").get<std::string>();
  r.regime = j.at("regime").get<std::string>();
  r.block_dim = j.at("block_dim").get<std::size_t>();
  r.relation_labels = j.at("relations").get<std::vector<std::string>>();
  for (const auto& h : j.at("history"))
    r.history.push_back({h.at("step").get<std::size_t>(), h.at("label").get<std::string>(),
                         h.at("value").get<double>()});
  r.final_residuals = j.at("final").get<std::map<std::string, double>>();
  r.probe_residuals = j.at("probes").get<std::map<std::string, double>>();
  r.converged = j.at("converged").get<bool>();
  r.diverged = j.at("diverged").get<bool>();
  r.steps_used = j.at("steps_used").get<std::size_t>();
  r.best_step = j.at("best_step").get<std::size_t>();
  r.best_total_residual = j.at("best_total_residual").get<double>();
  r.wall_seconds = j.at("wall_seconds").get<double>();
  return r;
}

void write_report(const std::string& path, const TrainReport& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << report_to_json(r);
}

TrainReport read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return report_from_json(ss.str());
}

}  // namespace repnet
