#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "gaussmetro/cli/commands.hpp"
#include "gaussmetro/cli/config.hpp"
#include "gaussmetro/cli/figures.hpp"
#include "gaussmetro/cli/table.hpp"
#include "gaussmetro/types.hpp"

namespace {

using namespace gaussmetro;
using namespace gaussmetro::cli;

struct CommonOptions {
  std::string config;
  std::string out;
  std::string format = "json";
  std::optional<double> phi;
  bool oracle = false;
  std::optional<int> dims;

  Overrides overrides() const { return {phi, oracle, dims}; }
};

void add_common(CLI::App* cmd, CommonOptions& o, const std::string& default_format) {
  o.format = default_format;
  cmd->add_option("--config", o.config, "pipeline configuration (JSON)")->required();
  cmd->add_option("--out", o.out, "write the result to this file instead of stdout");
  cmd->add_option("--phi", o.phi, "evaluation phase in radians (overrides eval.phi)");
  cmd->add_flag("--oracle", o.oracle, "also run the Fock-space oracle");
  cmd->add_option("--dims", o.dims, "per-mode Fock truncation for the oracle");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw Error("cannot write " + out);
  file << text;
}

std::string render(const nlohmann::json& doc, const std::string& format) {
  return format == "csv" ? flatten_to_csv(doc) : dump_json(doc);
}

PipelineConfig load(const CommonOptions& o) {
  PipelineConfig cfg = parse_config(load_json_file(o.config));
  apply_overrides(cfg, o.overrides());
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian phase-estimation engine: QFI, detections, sweeps and figures"};
  app.require_subcommand(1);

  CommonOptions qfi_opts;
  auto* qfi_cmd = app.add_subcommand("qfi", "quantum Fisher information, QCRB and the M-detection");
  add_common(qfi_cmd, qfi_opts, "json");

  CommonOptions sens_opts;
  auto* sens_cmd = app.add_subcommand("sensitivity", "phase sensitivity of M, homodyne and generalized homodyne");
  add_common(sens_cmd, sens_opts, "json");

  CommonOptions check_opts;
  double check_tol = 1e-6;
  auto* check_cmd = app.add_subcommand("oracle-check", "compare the Gaussian engine with the Fock oracle");
  add_common(check_cmd, check_opts, "json");
  check_cmd->add_option("--tolerance", check_tol, "largest accepted deviation");

  CommonOptions sweep_opts;
  std::string axis;
  AxisSpec spec;
  std::string scale = "linear";
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the pipeline over a grid of one config field");
  add_common(sweep_cmd, sweep_opts, "csv");
  sweep_cmd->add_option("--axis", axis, "field path(s), e.g. elements[2].xi[0],elements[2].xi[1]")->required();
  sweep_cmd->add_option("--lo", spec.lo, "first grid value")->required();
  sweep_cmd->add_option("--hi", spec.hi, "last grid value")->required();
  sweep_cmd->add_option("--points", spec.points, "number of grid points")->required();
  sweep_cmd->add_option("--scale", scale, "grid spacing")->check(CLI::IsMember({"linear", "log"}));

  std::string figure_name = "all";
  std::string figure_out = ".";
  bool figure_svg = false;
  auto* figure_cmd = app.add_subcommand("figure", "write the CSV data of the reproduced figures");
  figure_cmd->add_option("name", figure_name, "fig2a|fig2b|fig3a|fig3b|fig4a|fig4b|all");
  figure_cmd->add_option("--out", figure_out, "output directory");
  figure_cmd->add_flag("--svg", figure_svg, "also write SVG line plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSchema;
  }

  try {
    if (qfi_cmd->parsed()) {
      emit(render(cmd_qfi(load(qfi_opts)), qfi_opts.format), qfi_opts.out);
    } else if (sens_cmd->parsed()) {
      emit(render(cmd_sensitivity(load(sens_opts)), sens_opts.format), sens_opts.out);
    } else if (check_cmd->parsed()) {
      PipelineConfig cfg = load(check_opts);
      const auto result = cmd_oracle_check(cfg, check_tol);
      emit(render(result, check_opts.format), check_opts.out);
      if (!result.at("pass").get<bool>()) return kExitFailure;
    } else if (sweep_cmd->parsed()) {
      spec.paths = split_paths(axis);
      spec.log = scale == "log";
      const Table table = cmd_sweep(load_json_file(sweep_opts.config), spec, sweep_opts.overrides());
      emit(sweep_opts.format == "json" ? dump_json(table.to_json()) : table.to_csv(), sweep_opts.out);
    } else if (figure_cmd->parsed()) {
      for (const auto& path : cmd_figure(figure_name, figure_out, figure_svg)) std::cout << path.string() << "\n";
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const TruncationError& e) {
    std::cerr << "oracle truncation error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
