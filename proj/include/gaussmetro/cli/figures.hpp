#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gaussmetro/cli/table.hpp"

namespace gaussmetro::cli {

/// A reproduced figure: its data table and which columns form the plotted curves.
struct Figure {
  std::string name;
  std::string title;
  Table table;
  std::string x;
  std::vector<std::string> curves;
  bool log_x = true;
  bool log_y = true;
};

/// fig2a, fig2b, fig3a, fig3b, fig4a, fig4b.
const std::vector<std::string>& figure_names();

/// Columns per figure (x first):
///   fig2a  n; ns_opt_ideal, dphi_ideal (xi = 1); ns_opt_lossy, dphi_lossy
///          (xi = 0.8); dphi_snl, dphi_hl, dphi_loss2 (large-n lossy bound)
///   fig2b  n_c; dphi_M, dphi_gho, dphi_p2, dphi_zeta, dphi_loss1, dphi_loss2
///          (MZI, n_s = 10, xi1 = 0.8, xi2 = 1)
///   fig3a  n_c; dphi_su11_cs, dphi_su11_coherent, dphi_mzi_coherent,
///          dphi_su11_cs_formula (G = 20, n_s = 10, xi = 1)
///   fig3b  n_c; same three curves, dphi_asym_su11, dphi_asym_mzi (xi = 0.8)
///   fig4a  n_c; dphi_ideal, dphi_opa2, dphi_no_opa2, dphi_opa2_formula
///          (G = 20, n_s = 20, detector xi = 0.8)
///   fig4b  n_c; phi_opt, F_limit_opt, F_ideal, F_G1000 (single mode,
///          n_s = 20, xi = 0.8)
Figure make_figure(const std::string& name);

/// Minimal line plot of the figure's curves.
std::string render_svg(const Figure& figure);

/// Writes <out_dir>/<name>.csv (and .svg); "all" writes every figure.
/// Returns the written paths. Unknown names raise SchemaError.
std::vector<std::filesystem::path> cmd_figure(const std::string& name, const std::filesystem::path& out_dir,
                                              bool svg = false);

}  // namespace gaussmetro::cli
