#include <iostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "cli/commands.hpp"

using namespace gaussbounds;
using namespace gaussbounds::cli;

namespace {

struct RawFlags {
  std::string model, jet, fixed, at, sweep, output, svg, dump_jet;
};

void add_common(CLI::App* sub, RunConfig& cfg, RawFlags& raw) {
  sub->add_option("--model", raw.model, "builtin model: phase-loss, disp-squeeze-1, disp-squeeze-2");
  sub->add_option("--jet", raw.jet, "jet file (JSON) instead of a builtin model");
  sub->add_option("--fixed", raw.fixed, "model constants, e.g. alpha_re=0.3,r=0");
  sub->add_option("--at", raw.at, "estimated-parameter point, e.g. phi=0,eta=0.5");
  sub->add_option("--weight", cfg.weight, "'identity' or a JSON file with a p x p matrix")->capture_default_str();
  sub->add_option("--epsilon", cfg.epsilon, "regularization for pure normal modes")->capture_default_str();
  sub->add_flag("--extrapolate", cfg.extrapolate, "Richardson-extrapolate over epsilon and epsilon/2");
  sub->add_flag("--verify", cfg.verify, "re-solve at epsilon/2 and warn if CH moves by more than 1e-3");
  sub->add_option("-o,--output", raw.output, "write results to a file instead of stdout");
}

void finish(RunConfig& cfg, const RawFlags& raw) {
  if (!raw.model.empty()) cfg.model = raw.model;
  if (!raw.jet.empty()) cfg.jet_file = raw.jet;
  cfg.fixed = parse_assignments(raw.fixed, "--fixed");
  cfg.at = parse_assignments(raw.at, "--at");
  if (!raw.sweep.empty()) cfg.sweep = parse_sweep(raw.sweep);
  if (!raw.output.empty()) cfg.output = raw.output;
  if (!raw.svg.empty()) cfg.svg = raw.svg;
  if (!raw.dump_jet.empty()) cfg.dump_jet = raw.dump_jet;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Precision bounds (SLD, RLD, Holevo) for Gaussian quantum statistical models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gaussbounds 0.1.0");

  RunConfig cfg;
  RawFlags raw;

  CLI::App* bounds = app.add_subcommand("bounds", "compute all bounds at one parameter point");
  add_common(bounds, cfg, raw);
  bounds->add_option("--format", cfg.format, "table or json")->capture_default_str();
  bounds->add_option("--dump-jet", raw.dump_jet, "also write the evaluated jet as a jet file");

  CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter and emit CSV");
  add_common(sweep, cfg, raw);
  sweep->add_option("--sweep", raw.sweep, "name:start:stop:count")->required();
  sweep->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();
  sweep->add_option("--svg", raw.svg, "also render a log-scale SVG plot");

  CLI::App* check = app.add_subcommand("check", "chain inequalities, closed forms, optional Fock oracle");
  add_common(check, cfg, raw);
  check->add_flag("--oracle", cfg.oracle, "cross-check against truncated Fock-space computations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  try {
    finish(cfg, raw);
    if (bounds->parsed()) return cmd_bounds(cfg, std::cout, std::cerr);
    if (sweep->parsed()) return cmd_sweep(cfg, std::cout, std::cerr);
    return cmd_check(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
