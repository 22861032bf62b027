#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace gaussmetro {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Golden-section search on [lo, hi] after a 32-interval coarse scan picks the
/// bracket. Stops once the bracket is below tol * (hi - lo). Endpoints are
/// candidates, so monotone objectives return an endpoint. Non-finite values
/// raise gaussmetro::Error.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-8);

struct SqueezingOptimum {
  double n_s = 0.0;
  double variance = 0.0;  // Delta^2 phi at the optimum
  ScalarMinimum search;
};

/// Splits n photons between coherent and squeezed light in the lossy MZI to
/// minimize the QCRB 1/F over n_s in [0, n].
SqueezingOptimum optimize_ns(double n, double xi1 = 1.0, double xi2 = 1.0);

struct PhaseGainOptimum {
  double phi = 0.0;
  double fisher = 0.0;
  ScalarMinimum search;
};

/// Maximizes the G -> infinity QFI of the single-mode chain over phi in [0, pi/2].
PhaseGainOptimum optimize_phi_gain(double alpha, double r, double xi);

/// Library QFI of the single-mode chain at each gain G = 2 sinh^2 g.
std::vector<double> single_mode_gain_curve(double alpha, double r, double xi, double phi,
                                           const std::vector<double>& gains);

std::vector<double> linear_grid(double lo, double hi, std::size_t points);
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Column-oriented table of sweep results, one row per grid point in axis order.
struct SweepResult {
  std::string axis;
  std::vector<std::string> columns;
  std::vector<double> grid;
  std::vector<std::vector<double>> rows;
};

/// Worker count: GAUSSMETRO_THREADS if set and positive, else hardware threads.
unsigned worker_count();

/// Evaluates fn(i) for i in [0, count) on worker threads; results keep index
/// order. The exception of the lowest failing index is rethrown.
std::vector<std::vector<double>> parallel_map(std::size_t count,
                                              const std::function<std::vector<double>(std::size_t)>& fn);

}  // namespace gaussmetro
