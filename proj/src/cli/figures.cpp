#include "gaussmetro/cli/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <locale>
#include <sstream>

#include "gaussmetro/elements.hpp"
#include "gaussmetro/estimation.hpp"
#include "gaussmetro/optimize.hpp"
#include "gaussmetro/reference_formulas.hpp"
#include "gaussmetro/types.hpp"

namespace gaussmetro::cli {

namespace {

namespace ref = gaussmetro::reference;

constexpr std::size_t kPoints = 41;
constexpr double kGain = 20.0;

double dphi_qcrb(const Pipeline& p) { return qcrb(qfi(propagate_with_derivative(p, 0.0))); }

Table tabulate(std::vector<std::string> columns, const std::vector<double>& grid,
               const std::function<std::vector<double>(double)>& row) {
  Table t;
  t.columns = std::move(columns);
  t.rows = parallel_map(grid.size(), [&](std::size_t i) {
    std::vector<double> r{grid[i]};
    const auto rest = row(grid[i]);
    r.insert(r.end(), rest.begin(), rest.end());
    return r;
  });
  return t;
}

Figure fig2a() {
  constexpr double xi = 0.8;
  Figure f{"fig2a", "MZI, optimized n_s: dphi vs n", {}, "n", {"dphi_ideal", "dphi_lossy", "dphi_snl", "dphi_hl", "dphi_loss2"}};
  f.table = tabulate({"n", "ns_opt_ideal", "dphi_ideal", "ns_opt_lossy", "dphi_lossy", "dphi_snl", "dphi_hl", "dphi_loss2"},
                     log_grid(1.0, 1e4, kPoints), [&](double n) {
                       const auto ideal = optimize_ns(n, 1.0, 1.0);
                       const auto lossy = optimize_ns(n, xi, xi);
                       return std::vector<double>{ideal.n_s,
                                                  std::sqrt(ideal.variance),
                                                  lossy.n_s,
                                                  std::sqrt(lossy.variance),
                                                  1.0 / std::sqrt(n),
                                                  1.0 / n,
                                                  std::sqrt(ref::qcrb_mzi_lossy_optimal(n, xi))};
                     });
  return f;
}

Figure fig2b() {
  constexpr double n_s = 10.0;
  constexpr double xi1 = 0.8;
  constexpr double xi2 = 1.0;
  const double xi_mean = 0.5 * (xi1 + xi2);
  Figure f{"fig2b", "Unbalanced lossy MZI: detections vs n_c", {}, "n_c", {"dphi_M", "dphi_gho", "dphi_p2", "dphi_zeta"}};
  f.table = tabulate({"n_c", "dphi_M", "dphi_gho", "dphi_p2", "dphi_zeta", "dphi_loss1", "dphi_loss2"},
                     log_grid(1.0, 1e4, kPoints), [&](double n_c) {
                       const Pipeline p = build_mzi(InputSpec::from_photons(n_c, n_s), xi1, xi2);
                       const Propagation prop = propagate_with_derivative(p, 0.0);
                       const QuadraticDetector m = as_detector(sld(prop.state, prop.derivative));
                       const double n = ref::mzi_photon_number(n_c, n_s);
                       const double r = ref::squeezing_from_photons(n_s);
                       return std::vector<double>{
                           std::sqrt(detector_sensitivity(m, prop)),
                           std::sqrt(detector_sensitivity(generalized_homodyne(xi1, xi2), prop)),
                           std::sqrt(detector_sensitivity(homodyne_detector(1), prop)),
                           std::sqrt(ref::sens_p2_lossy(n, r, xi1, xi2)),
                           std::sqrt(ref::qcrb_mzi_lossy_practical(n, r, xi_mean)),
                           std::sqrt(ref::qcrb_mzi_lossy_optimal(n, xi_mean))};
                     });
  return f;
}

Figure fig3(bool lossy) {
  constexpr double n_s = 10.0;
  const double xi = lossy ? 0.8 : 1.0;
  const double g = strength_from_gain(kGain);
  Figure f;
  f.name = lossy ? "fig3b" : "fig3a";
  f.title = lossy ? "SU(1,1) vs MZI, xi = 0.8" : "SU(1,1) vs MZI, xi = 1";
  f.x = "n_c";
  f.curves = {"dphi_su11_cs", "dphi_su11_coherent", "dphi_mzi_coherent"};
  std::vector<std::string> columns{"n_c", "dphi_su11_cs", "dphi_su11_coherent", "dphi_mzi_coherent"};
  if (lossy) {
    columns.insert(columns.end(), {"dphi_asym_su11", "dphi_asym_mzi"});
  } else {
    columns.push_back("dphi_su11_cs_formula");
  }
  f.table = tabulate(columns, log_grid(1.0, 1e6, 61), [&](double n_c) {
    const double alpha = std::sqrt(n_c);
    std::vector<double> row{dphi_qcrb(build_su11(InputSpec::from_photons(n_c, n_s), g, xi, xi)),
                            dphi_qcrb(build_su11(InputSpec{alpha, 0.0}, g, xi, xi)),
                            dphi_qcrb(build_mzi(InputSpec{alpha, 0.0}, xi, xi))};
    if (lossy) {
      row.push_back(std::sqrt(ref::asymptote_lossy(n_c, kGain, xi, ref::AsymptoteKind::Su11)));
      row.push_back(std::sqrt(ref::asymptote_lossy(n_c, kGain, xi, ref::AsymptoteKind::Mzi)));
    } else {
      row.push_back(1.0 / std::sqrt(ref::f_su11_cs(n_c, n_s, kGain)));
    }
    return row;
  });
  return f;
}

Figure fig4a() {
  constexpr double n_s = 20.0;
  constexpr double xi = 0.8;
  const double g = strength_from_gain(kGain);
  Figure f{"fig4a", "SU(1,1) with detector loss", {}, "n_c", {"dphi_ideal", "dphi_opa2", "dphi_no_opa2"}};
  f.table = tabulate({"n_c", "dphi_ideal", "dphi_opa2", "dphi_no_opa2", "dphi_opa2_formula"},
                     log_grid(1.0, 1e6, 61), [&](double n_c) {
                       const InputSpec in = InputSpec::from_photons(n_c, n_s);
                       return std::vector<double>{
                           dphi_qcrb(build_su11(in, g)),
                           dphi_qcrb(build_su11(in, g, 1.0, 1.0, xi, true)),
                           dphi_qcrb(build_su11(in, g, 1.0, 1.0, xi, false)),
                           1.0 / std::sqrt(ref::f_su11_external_loss(n_c, n_s, kGain, xi))};
                     });
  return f;
}

Figure fig4b() {
  constexpr double n_s = 20.0;
  constexpr double xi = 0.8;
  constexpr double big_gain = 1000.0;
  const double r = ref::squeezing_from_photons(n_s);
  Figure f{"fig4b", "Single mode, G -> infinity", {}, "n_c", {"F_limit_opt", "F_ideal", "F_G1000"}};
  f.table = tabulate({"n_c", "phi_opt", "F_limit_opt", "F_ideal", "F_G1000"}, log_grid(1e-2, 1e2, kPoints),
                     [&](double n_c) {
                       const double alpha = std::sqrt(n_c);
                       const auto best = optimize_phi_gain(alpha, r, xi);
                       const InputSpec in{alpha, r};
                       const double ideal = qfi(propagate_with_derivative(build_single_mode_chain(in, 0.0, 1.0), 0.0));
                       const Pipeline amplified = build_single_mode_chain(in, strength_from_gain(big_gain), xi);
                       const double finite = qfi(propagate_with_derivative(amplified, best.phi));
                       return std::vector<double>{best.phi, best.fisher, ideal, finite};
                     });
  return f;
}

std::string svg_number(double x) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.setf(std::ios::fixed);
  s.precision(2);
  s << x;
  return s.str();
}

}  // namespace

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b"};
  return names;
}

Figure make_figure(const std::string& name) {
  if (name == "fig2a") return fig2a();
  if (name == "fig2b") return fig2b();
  if (name == "fig3a") return fig3(false);
  if (name == "fig3b") return fig3(true);
  if (name == "fig4a") return fig4a();
  if (name == "fig4b") return fig4b();
  throw SchemaError(name, "unknown figure (fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, all)");
}

std::string render_svg(const Figure& figure) {
  constexpr double width = 640.0;
  constexpr double height = 420.0;
  constexpr double margin = 60.0;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  auto tx = [&](double v) { return figure.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return figure.log_y ? std::log10(v) : v; };
  auto usable = [&](double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); };

  const auto xs = figure.table.column(figure.x);
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (double x : xs) {
    if (!usable(x, figure.log_x)) continue;
    x0 = std::min(x0, tx(x));
    x1 = std::max(x1, tx(x));
  }
  for (const auto& c : figure.curves) {
    for (double y : figure.table.column(c)) {
      if (!usable(y, figure.log_y)) continue;
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double x) { return margin + (tx(x) - x0) / (x1 - x0) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - (ty(y) - y0) / (y1 - y0) * (height - 2 * margin); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << figure.title
    << "</text>\n";
  s << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin << "\" height=\""
    << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" font-family=\"sans-serif\" font-size=\"12\">"
    << (figure.log_x ? "log10 " : "") << figure.x << " [" << format_number(figure.log_x ? std::pow(10.0, x0) : x0)
    << ", " << format_number(figure.log_x ? std::pow(10.0, x1) : x1) << "]</text>\n";
  for (std::size_t c = 0; c < figure.curves.size(); ++c) {
    const auto ys = figure.table.column(figure.curves[c]);
    const char* color = palette[c % 6];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!usable(xs[i], figure.log_x) || !usable(ys[i], figure.log_y)) continue;
      s << (first ? "" : " ") << svg_number(px(xs[i])) << "," << svg_number(py(ys[i]));
      first = false;
    }
    s << "\"/>\n";
    s << "<text x=\"" << width - margin - 150 << "\" y=\"" << margin + 16 * (c + 1)
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">" << figure.curves[c]
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<std::filesystem::path> cmd_figure(const std::string& name, const std::filesystem::path& out_dir,
                                              bool svg) {
  std::vector<std::string> names;
  if (name == "all") {
    names = figure_names();
  } else {
    if (std::find(figure_names().begin(), figure_names().end(), name) == figure_names().end())
      throw SchemaError(name, "unknown figure (fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, all)");
    names = {name};
  }
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    written.push_back(path);
  };
  for (const auto& n : names) {
    const Figure fig = make_figure(n);
    write(out_dir / (n + ".csv"), fig.table.to_csv());
    if (svg) write(out_dir / (n + ".svg"), render_svg(fig));
  }
  return written;
}

}  // namespace gaussmetro::cli
