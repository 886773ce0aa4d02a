#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "repnet/compile.hpp"
#include "repnet/net.hpp"
#include "repnet/presentation.hpp"
#include "repnet/sampling.hpp"

namespace repnet {

enum class OptimizerKind { adam, sgd };

const char* to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& s);

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::adam;
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  std::size_t max_steps = 20000;
  double target_residual = 1e-4;
  std::uint64_t seed = 0;
  double domain_low = -1.0;
  double domain_high = 1.0;
  std::vector<double> relation_weights;  // empty = all 1.0
  bool deterministic = false;
  std::size_t threads = 1;
  std::size_t eval_interval = 100;
  std::size_t heldout_points = 4096;
};

struct ResidualSample {
  std::size_t step;
  std::string label;
  double value;
};

struct TrainReport {
  TrainConfig config;
  std::string presentation_name;
  std::string regime;
  std::size_t block_dim = 1;
  std::vector<std::string> relation_labels;
  std::vector<ResidualSample> history;  // held-out residuals, monotone in step
  std::map<std::string, double> final_residuals;
  std::map<std::string, double> probe_residuals;
  bool converged = false;
  bool diverged = false;
  std::size_t steps_used = 0;
  std::size_t best_step = 0;
  double best_total_residual = 0.0;
  double wall_seconds = 0.0;  // forced to zero under deterministic mode
};

// Builds one net per generator (plus the paired inverse net for invertible
// generators) with the default architecture, parameters initialized from
// substreams of `seed`.
NetMap build_generator_nets(const Presentation& p, Regime regime, std::size_t block_dim,
                            std::uint64_t seed);

// Minimizes the summed relation residuals with fresh uniform samples each
// step. Parameters are updated in place; the returned nets are the best
// held-out checkpoint seen, not necessarily the last iterate.
TrainReport train(const Presentation& p, NetMap& nets, const TrainConfig& cfg);

// Residuals of relations outside the training set, on fresh samples.
std::map<std::string, double> probe_extra_relations(const Presentation& p,
                                                    const NetMap& nets,
                                                    const std::vector<RelationEq>& probes,
                                                    std::size_t points,
                                                    const TrainConfig& cfg);

std::string report_to_json(const TrainReport& r);
TrainReport report_from_json(const std::string& text);
void write_report(const std::string& path, const TrainReport& r);
TrainReport read_report(const std::string& path);

}  // namespace repnet
