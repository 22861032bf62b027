#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaussmetro/cli/config.hpp"
#include "gaussmetro/cli/table.hpp"
#include "gaussmetro/estimation.hpp"

namespace gaussmetro::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // internal error or failed oracle check
  kExitSchema = 2,
  kExitPhysics = 3,
  kExitTruncation = 4,
};

/// Command-line values that take precedence over the config's "eval" block.
struct Overrides {
  std::optional<double> phi;
  bool oracle = false;
  std::optional<int> dims;
};

void apply_overrides(PipelineConfig& config, const Overrides& overrides);

/// Detectors reported for a pipeline: M, then p1 (and p2 plus the generalized
/// homodyne built from the first loss element's transmissivities for two modes).
std::vector<QuadraticDetector> standard_detectors(const Pipeline& pipeline, const SldObservable& sld);

/// Delta^2 phi of a detector, +inf when the signal slope vanishes.
double sensitivity_or_inf(const QuadraticDetector& det, const Propagation& propagation);

/// {phi, F, qcrb, M_detection {A, b}, photon_budget, [oracle]}.
nlohmann::json cmd_qfi(const PipelineConfig& config);

/// Per-detector slope, variance, Delta^2 phi and Delta phi, plus the QCRB.
nlohmann::json cmd_sensitivity(const PipelineConfig& config);

/// Gaussian engine against the Fock oracle: F, photon numbers and detector
/// variances with relative deviations; "pass" when all are within tolerance.
nlohmann::json cmd_oracle_check(const PipelineConfig& config, double tolerance = 1e-6);

struct AxisSpec {
  std::vector<std::string> paths;  // every path is set to the grid value
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 11;
  bool log = false;
};

/// Parses "path[,path...]". Paths use dots and brackets: "elements[2].xi[0]".
/// The pseudo-field "G" on an opa element sets g from the gain G = 2 sinh^2 g.
std::vector<std::string> split_paths(const std::string& text);

/// Columns: axis, F, dphi, dphi_<detector>..., [F_oracle]. Values that are
/// undefined at a point (blind detector, F = 0) are inf.
Table cmd_sweep(const nlohmann::json& config_doc, const AxisSpec& axis, const Overrides& overrides = {});

/// Scalar fields of a JSON document as "field,value" lines, dotted paths.
std::string flatten_to_csv(const nlohmann::json& doc);

}  // namespace gaussmetro::cli
