#include "gaussmetro/cli/commands.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "gaussmetro/fock_oracle.hpp"
#include "gaussmetro/optimize.hpp"

namespace gaussmetro::cli {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json complex_json(Complex z) { return json::array({json_number(z.real()), json_number(z.imag())}); }

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

json photons_json(const std::vector<double>& n) {
  json per_mode = json::array();
  double total = 0.0;
  for (double x : n) {
    per_mode.push_back(json_number(x));
    total += x;
  }
  return {{"per_mode", per_mode}, {"total", json_number(total)}};
}

double relative_deviation(double value, double reference) {
  const double diff = value - reference;
  return reference != 0.0 ? diff / std::abs(reference) : diff;
}

const Loss* first_loss(const Pipeline& pipeline) {
  for (const auto& e : pipeline.elements()) {
    if (const auto* loss = std::get_if<Loss>(&e)) return loss;
  }
  return nullptr;
}

json::json_pointer parent_of(const json::json_pointer& p) { return p.parent_pointer(); }

void set_axis_value(json& doc, const std::string& path, double x) {
  const json::json_pointer ptr = field_pointer(path);
  if (doc.contains(ptr)) {
    if (!doc.at(ptr).is_number()) throw SchemaError(path, "sweep axis must target a numeric field");
    doc[ptr] = x;
    return;
  }
  if (ptr.back() == "G") {
    const json::json_pointer parent = parent_of(ptr);
    if (doc.contains(parent) && doc.at(parent).is_object() && doc.at(parent).value("type", "") == "opa") {
      doc[parent]["g"] = strength_from_gain(x);
      return;
    }
  }
  throw SchemaError(path, "sweep axis path not found in the configuration");
}

}  // namespace

void apply_overrides(PipelineConfig& config, const Overrides& overrides) {
  if (overrides.phi) config.eval.phi = *overrides.phi;
  if (overrides.oracle) config.eval.oracle = true;
  if (overrides.dims) {
    if (*overrides.dims < 3) throw SchemaError("--dims", "expected an integer >= 3");
    config.eval.dims = *overrides.dims;
  }
}

std::vector<QuadraticDetector> standard_detectors(const Pipeline& pipeline, const SldObservable& s) {
  std::vector<QuadraticDetector> out{as_detector(s, "M")};
  const int modes = pipeline.mode_count();
  for (int k = 0; k < modes; ++k) out.push_back(homodyne_detector(k, modes));
  if (modes == 2) {
    double xi1 = 1.0;
    double xi2 = 1.0;
    if (const Loss* loss = first_loss(pipeline)) {
      xi1 = loss->transmissivity[0];
      xi2 = loss->transmissivity[1];
    }
    if (xi1 > 0.0 && xi2 > 0.0) {
      out.push_back(generalized_homodyne(xi1, xi2));
      out.back().label = "gho";
    }
  }
  return out;
}

double sensitivity_or_inf(const QuadraticDetector& det, const Propagation& propagation) {
  const double slope = detector_slope(det, propagation.derivative);
  if (slope == 0.0) return kInf;
  return detector_variance(det, propagation.state) / (slope * slope);
}

json cmd_qfi(const PipelineConfig& config) {
  const Pipeline& pipeline = config.pipeline;
  const double phi = config.eval.phi;
  const Propagation prop = propagate_with_derivative(pipeline, phi);
  const SldObservable s = sld(prop.state, prop.derivative);
  const double f = qfi(prop);

  json out;
  out["phi"] = json_number(phi);
  out["F"] = json_number(f);
  out["qcrb"] = f > 0.0 ? json_number(qcrb(f)) : json(nullptr);
  out["M_detection"] = {{"A", matrix_json(s.A)}, {"b", vector_json(s.b)}};
  out["photon_budget"] = {{"input", photons_json(mean_photon_numbers(pipeline.input_state()))},
                          {"at_phase", photons_json(mean_photon_numbers(state_before_carrier(pipeline)))}};
  if (config.eval.oracle) {
    const fock::Evolution ev = fock::evolve(pipeline, phi, config.eval.dims);
    const double fo = fock::qfi_fock(ev);
    out["oracle"] = {{"F", json_number(fo)},
                     {"relative_deviation", json_number(relative_deviation(fo, f))},
                     {"dims", config.eval.dims},
                     {"trace_deficit", json_number(ev.report.trace_deficit)},
                     {"tail_population", json_number(ev.report.tail_population)}};
  }
  return out;
}

json cmd_sensitivity(const PipelineConfig& config) {
  const Pipeline& pipeline = config.pipeline;
  const double phi = config.eval.phi;
  const Propagation prop = propagate_with_derivative(pipeline, phi);
  const SldObservable s = sld(prop.state, prop.derivative);
  const double f = qfi(prop);

  std::optional<fock::Evolution> ev;
  if (config.eval.oracle) ev = fock::evolve(pipeline, phi, config.eval.dims);

  json detectors = json::array();
  for (const auto& det : standard_detectors(pipeline, s)) {
    const double slope = detector_slope(det, prop.derivative);
    const double variance = detector_variance(det, prop.state);
    const double d2 = sensitivity_or_inf(det, prop);
    json entry = {{"label", det.label},
                  {"slope", json_number(slope)},
                  {"variance", json_number(variance)},
                  {"d2phi", json_number(d2)},
                  {"dphi", json_number(std::sqrt(d2))},
                  {"blind", !std::isfinite(d2)}};
    if (ev) {
      const auto stats = fock::observable_stats(det, ev->rho);
      const double oslope = fock::observable_slope(det, *ev);
      entry["oracle"] = {{"slope", json_number(oslope)},
                         {"variance", json_number(stats.variance)},
                         {"variance_relative_deviation", json_number(relative_deviation(stats.variance, variance))}};
    }
    detectors.push_back(std::move(entry));
  }
  json out;
  out["phi"] = json_number(phi);
  out["F"] = json_number(f);
  out["qcrb"] = f > 0.0 ? json_number(qcrb(f)) : json(nullptr);
  out["detectors"] = std::move(detectors);
  if (ev) {
    out["oracle"] = {{"dims", config.eval.dims},
                     {"trace_deficit", json_number(ev->report.trace_deficit)},
                     {"tail_population", json_number(ev->report.tail_population)}};
  }
  return out;
}

json cmd_oracle_check(const PipelineConfig& config, double tolerance) {
  const Pipeline& pipeline = config.pipeline;
  const double phi = config.eval.phi;
  const Propagation prop = propagate_with_derivative(pipeline, phi);
  const SldObservable s = sld(prop.state, prop.derivative);
  const double f = qfi(prop);
  const fock::Evolution ev = fock::evolve(pipeline, phi, config.eval.dims);

  double worst = 0.0;
  json checks = json::array();
  auto compare = [&](const std::string& name, double gaussian, double oracle) {
    // Quantities that vanish are compared on an absolute scale.
    const double scale = std::max(std::abs(gaussian), 1.0);
    const double dev = std::abs(oracle - gaussian) / scale;
    worst = std::max(worst, dev);
    checks.push_back({{"quantity", name},
                      {"gaussian", json_number(gaussian)},
                      {"oracle", json_number(oracle)},
                      {"deviation", json_number(dev)}});
  };

  compare("F", f, fock::qfi_fock(ev));
  const auto n_gauss = mean_photon_numbers(prop.state);
  const auto n_fock = fock::photon_numbers(ev.rho);
  for (std::size_t k = 0; k < n_gauss.size(); ++k) compare("n" + std::to_string(k + 1), n_gauss[k], n_fock[k]);
  for (const auto& det : standard_detectors(pipeline, s)) {
    compare("variance_" + det.label, detector_variance(det, prop.state),
            fock::observable_stats(det, ev.rho).variance);
  }

  return {{"phi", json_number(phi)},
          {"dims", config.eval.dims},
          {"trace_deficit", json_number(ev.report.trace_deficit)},
          {"tail_population", json_number(ev.report.tail_population)},
          {"checks", checks},
          {"max_deviation", json_number(worst)},
          {"tolerance", json_number(tolerance)},
          {"pass", worst <= tolerance}};
}

std::vector<std::string> split_paths(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw SchemaError(text, "empty path in sweep axis list");
    out.push_back(item);
  }
  if (out.empty()) throw SchemaError(text, "sweep axis needs at least one path");
  return out;
}

Table cmd_sweep(const json& config_doc, const AxisSpec& axis, const Overrides& overrides) {
  if (axis.paths.empty()) throw SchemaError("--axis", "sweep axis needs at least one path");
  if (axis.points == 0) throw SchemaError("--points", "expected a positive number of points");
  const std::vector<double> grid = axis.log ? log_grid(axis.lo, axis.hi, axis.points)
                                            : linear_grid(axis.lo, axis.hi, axis.points);

  auto config_at = [&](double x) {
    json doc = config_doc;
    for (const auto& path : axis.paths) set_axis_value(doc, path, x);
    PipelineConfig cfg = parse_config(doc);
    apply_overrides(cfg, overrides);
    return cfg;
  };

  // Column layout from the first point; detector sets depend only on the mode count.
  const PipelineConfig first = config_at(grid.front());
  Table table;
  std::string axis_name;
  for (const auto& path : axis.paths) axis_name += (axis_name.empty() ? "" : "+") + path;
  table.columns = {axis_name, "F", "dphi"};
  std::vector<std::string> labels{"M", "p1"};
  if (first.pipeline.mode_count() == 2) labels.insert(labels.end(), {"p2", "gho"});
  for (const auto& label : labels) table.columns.push_back("dphi_" + label);
  const bool oracle = first.eval.oracle;
  if (oracle) table.columns.push_back("F_oracle");

  table.rows = parallel_map(grid.size(), [&](std::size_t i) {
    const PipelineConfig cfg = config_at(grid[i]);
    const Propagation prop = propagate_with_derivative(cfg.pipeline, cfg.eval.phi);
    const SldObservable s = sld(prop.state, prop.derivative);
    const double f = qfi(prop);
    std::vector<double> row{grid[i], f, f > 0.0 ? qcrb(f) : kInf};
    // The generalized homodyne is undefined once a transmissivity reaches 0 and stays nan.
    const auto detectors = standard_detectors(cfg.pipeline, s);
    for (const auto& label : labels) {
      double value = std::numeric_limits<double>::quiet_NaN();
      for (const auto& det : detectors) {
        if (det.label == label) value = std::sqrt(sensitivity_or_inf(det, prop));
      }
      row.push_back(value);
    }
    if (oracle) row.push_back(fock::qfi_fock(cfg.pipeline, cfg.eval.phi, cfg.eval.dims));
    return row;
  });
  return table;
}

std::string flatten_to_csv(const json& doc) {
  std::ostringstream out;
  out << "field,value\n";
  std::function<void(const json&, const std::string&)> walk = [&](const json& j, const std::string& prefix) {
    if (j.is_object()) {
      for (const auto& [key, value] : j.items()) walk(value, prefix.empty() ? key : prefix + "." + key);
    } else if (j.is_array()) {
      for (std::size_t i = 0; i < j.size(); ++i) walk(j[i], prefix + "[" + std::to_string(i) + "]");
    } else if (j.is_number()) {
      out << prefix << "," << format_number(j.get<double>()) << "\n";
    } else if (j.is_null()) {
      out << prefix << ",\n";
    } else if (j.is_boolean()) {
      out << prefix << "," << (j.get<bool>() ? "true" : "false") << "\n";
    } else {
      out << prefix << "," << j.get<std::string>() << "\n";
    }
  };
  walk(doc, "");
  return out.str();
}

}  // namespace gaussmetro::cli
