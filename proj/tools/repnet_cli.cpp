#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "repnet/bracket.hpp"
#include "repnet/builtins.hpp"
#include "repnet/checkpoint.hpp"
#include "repnet/compile.hpp"
#include "repnet/extract.hpp"
#include "repnet/kernels.hpp"
#include "repnet/matrix_io.hpp"
#include "repnet/moves.hpp"
#include "repnet/parser.hpp"
#include "repnet/trainer.hpp"

namespace {

using namespace repnet;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SourceOpts {
  std::string builtin_name;
  std::string file;
  double delta = 1.0;
};

Presentation load_presentation(const SourceOpts& src) {
  if (!src.builtin_name.empty() && !src.file.empty())
    throw std::runtime_error("give either --builtin or --file, not both");
  if (!src.builtin_name.empty()) {
    std::map<std::string, double> params;
    if (src.builtin_name == "temperley_lieb") params["delta"] = src.delta;
    return builtin(src.builtin_name, params);
  }
  if (!src.file.empty()) return parse_presentation(read_file(src.file));
  throw std::runtime_error("one of --builtin or --file is required");
}

void add_source_opts(CLI::App* cmd, SourceOpts& src) {
  cmd->add_option("--builtin", src.builtin_name,
                  "built-in system: braid, temperley_lieb, yang_baxter, rt_system");
  cmd->add_option("--file", src.file, "presentation file");
  cmd->add_option("--delta", src.delta, "Temperley-Lieb loop value")->capture_default_str();
}

int cmd_train(const SourceOpts& src, const std::string& regime_s, std::size_t dim,
              const std::string& domain, TrainConfig cfg, const std::string& out_dir,
              bool no_simd) {
  if (no_simd) kern::force_scalar(true);
  if (domain == "unit") {
    cfg.domain_low = 0.0;
    cfg.domain_high = 1.0;
  } else if (domain != "sym") {
    throw std::runtime_error("--domain must be sym or unit");
  }

  const Presentation pres = load_presentation(src);
  const Regime regime = regime_from_string(regime_s);
  NetMap nets = build_generator_nets(pres, regime, dim, cfg.seed);

  TrainReport report = train(pres, nets, cfg);

  if (!src.builtin_name.empty()) {
    report.probe_residuals = probe_extra_relations(
        pres, nets, builtin_probes(src.builtin_name), cfg.heldout_points, cfg);
  }

  std::filesystem::create_directories(out_dir);
  write_report(out_dir + "/report.json", report);
  save_nets(out_dir, nets);
  if (regime != Regime::nonlinear)
    write_rep(out_dir + "/matrices.txt", collapse_all(pres, nets));

  for (const auto& [label, value] : report.final_residuals)
    std::printf("residual  %-40s %.6e\n", label.c_str(), value);
  for (const auto& [label, value] : report.probe_residuals)
    std::printf("probe     %-40s %.6e\n", label.c_str(), value);
  std::printf("steps %zu  best_step %zu  converged %s\n", report.steps_used,
              report.best_step, report.converged ? "yes" : "no");

  if (report.diverged) {
    std::fprintf(stderr, "error: loss became non-finite at step %zu\n",
                 report.steps_used + 1);
    return 1;
  }
  return report.converged ? 0 : 2;
}

int cmd_verify(const SourceOpts& src, const std::string& matrices_path, double threshold) {
  const Presentation pres = load_presentation(src);
  LinearRep rep = read_rep(matrices_path);
  if (rep.semantics != pres.semantics)
    throw std::runtime_error("matrix file semantics do not match the presentation");

  bool all_ok = true;
  const auto residuals = verify_matrix_relations(rep, pres, /*complete_inverses=*/true);
  for (const auto& [label, value] : residuals) {
    const bool ok = value < threshold;
    all_ok = all_ok && ok;
    std::printf("%-6s %-44s %.6e\n", ok ? "ok" : "HIGH", label.c_str(), value);
  }

  // Degeneracy flags: a generator matrix this close to the identity solves
  // most systems trivially.
  for (const auto& [name, map] : rep.maps) {
    if (map.m.rows != map.m.cols) continue;
    const double dist = map_distance(map, identity_map(map.m.rows));
    if (dist < 1e-6)
      std::printf("flag   generator %s is the identity map (probe residual %.3e)\n",
                  name.c_str(), dist);
  }
  return all_ok ? 0 : 1;
}

int cmd_bracket(const std::string& diagram_path, const std::string& checkpoint_dir,
                bool check_moves, double factor) {
  const SlicedDiagram diagram = parse_diagram(read_file(diagram_path));
  if (!diagram.closed()) throw std::runtime_error("diagram is not closed");

  const TrainReport report = read_report(checkpoint_dir + "/report.json");
  const Presentation pres = builtin(report.presentation_name, {});
  const NetMap nets = load_nets(checkpoint_dir);
  const RtMaps maps = rt_maps_from(collapse_all(pres, nets));

  const double value = evaluate_bracket(diagram, maps);
  std::printf("bracket %.12g\n", value);

  if (!check_moves) return 0;
  for (Move m : {Move::r2_insert, Move::r3_exchange, Move::slide_n_past_r}) {
    const auto perturbed = move_perturb(diagram, m);
    if (!perturbed) {
      std::printf("move %-16s not applicable\n", to_string(m));
      continue;
    }
    const double pv = evaluate_bracket(*perturbed, maps);
    const double delta = std::abs(pv - value);
    const std::string rel = move_relation_label(m);
    const auto it = report.final_residuals.find(rel);
    if (it == report.final_residuals.end())
      throw std::runtime_error("report lacks residual for relation " + rel);
    const double limit = factor * it->second;
    std::printf("move %-16s bracket %.12g  delta %.6e  limit %.6e  %s\n", to_string(m),
                pv, delta, limit, delta <= limit ? "within" : "EXCEEDS");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search for network representations of finitely presented algebraic systems"};
  app.require_subcommand(1);

  SourceOpts train_src, verify_src;
  std::string regime = "linear";
  std::size_t dim = 1;
  std::string domain = "sym";
  std::string out_dir = "run";
  bool no_simd = false;
  TrainConfig cfg;

  CLI::App* train_cmd = app.add_subcommand("train", "train generator networks");
  add_source_opts(train_cmd, train_src);
  train_cmd->add_option("--regime", regime, "linear, affine or nonlinear")->capture_default_str();
  train_cmd->add_option("--dim", dim, "block (strand) dimension")->capture_default_str();
  train_cmd->add_option("--domain", domain, "sampling box: sym [-1,1] or unit [0,1]")->capture_default_str();
  train_cmd->add_option("--batch", cfg.batch_size, "samples per step")->capture_default_str();
  train_cmd->add_option("--max-steps", cfg.max_steps, "optimizer step budget")->capture_default_str();
  train_cmd->add_option("--target", cfg.target_residual,
                        "stop when every held-out residual is below this")->capture_default_str();
  train_cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  train_cmd->add_option("--lr", cfg.learning_rate, "learning rate")->capture_default_str();
  std::string optimizer = "adam";
  train_cmd->add_option("--optimizer", optimizer, "adam or sgd")->capture_default_str();
  train_cmd->add_option("--threads", cfg.threads, "held-out evaluation threads")->capture_default_str();
  train_cmd->add_option("--eval-interval", cfg.eval_interval,
                        "steps between held-out evaluations")->capture_default_str();
  train_cmd->add_option("--heldout", cfg.heldout_points,
                        "held-out samples per relation")->capture_default_str();
  train_cmd->add_flag("--deterministic", cfg.deterministic,
                      "bit-reproducible reports (wall time zeroed)");
  train_cmd->add_flag("--no-simd", no_simd, "force scalar kernels");
  train_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();

  std::string matrices_path;
  double threshold = 1e-3;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "check matrices against a presentation exactly");
  add_source_opts(verify_cmd, verify_src);
  verify_cmd->add_option("--matrices", matrices_path, "matrix text file")->required();
  verify_cmd->add_option("--threshold", threshold,
                         "pass when every Frobenius residual is below this")->capture_default_str();

  std::string diagram_path, checkpoint_dir;
  bool check_moves = false;
  double factor = 10.0;
  CLI::App* bracket_cmd =
      app.add_subcommand("bracket", "evaluate a sliced link diagram");
  bracket_cmd->add_option("--diagram", diagram_path, "sliced diagram file")->required();
  bracket_cmd->add_option("--checkpoint", checkpoint_dir,
                          "directory with trained rt_system nets")->required();
  bracket_cmd->add_flag("--check-moves", check_moves,
                        "re-evaluate under each applicable diagram move");
  bracket_cmd->add_option("--threshold-factor", factor,
                          "move tolerance as a multiple of the trained residual")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) {
      cfg.optimizer = optimizer_from_string(optimizer);
      return cmd_train(train_src, regime, dim, domain, cfg, out_dir, no_simd);
    }
    if (verify_cmd->parsed()) return cmd_verify(verify_src, matrices_path, threshold);
    if (bracket_cmd->parsed())
      return cmd_bracket(diagram_path, checkpoint_dir, check_moves, factor);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
