#include "gaussmetro/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <thread>

#include "gaussmetro/elements.hpp"
#include "gaussmetro/estimation.hpp"
#include "gaussmetro/reference_formulas.hpp"

namespace gaussmetro {

namespace {

constexpr int kCoarseIntervals = 32;

double checked(const std::function<double(double)>& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) throw Error("objective is not finite at x = " + std::to_string(x));
  return y;
}

}  // namespace

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("minimize_scalar needs lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("minimize_scalar needs a positive tolerance");

  const double span = hi - lo;
  std::vector<double> xs(kCoarseIntervals + 1);
  std::vector<double> ys(kCoarseIntervals + 1);
  for (int i = 0; i <= kCoarseIntervals; ++i) {
    xs[i] = (i == kCoarseIntervals) ? hi : lo + span * i / kCoarseIntervals;
    ys[i] = checked(f, xs[i]);
  }
  const int best = static_cast<int>(std::min_element(ys.begin(), ys.end()) - ys.begin());

  ScalarMinimum out;
  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, kCoarseIntervals)];
  out.x = xs[best];
  out.value = ys[best];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = checked(f, c);
  double fd = checked(f, d);
  while (b - a > tol * span) {
    ++out.iterations;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = checked(f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = checked(f, d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = checked(f, x);
  if (fx < out.value) {
    out.x = x;
    out.value = fx;
  }
  out.bracket_lo = a;
  out.bracket_hi = b;
  return out;
}

SqueezingOptimum optimize_ns(double n, double xi1, double xi2) {
  if (!(n > 0.0)) throw PhysicsError("photon budget must be positive");
  const Pipeline base = build_mzi(InputSpec{}, xi1, xi2);
  auto objective = [&](double n_s) {
    const Pipeline p = base.with_input(InputSpec::from_photons(std::max(n - n_s, 0.0), n_s));
    return 1.0 / qfi(propagate_with_derivative(p, 0.0));
  };
  SqueezingOptimum out;
  out.search = minimize_scalar(objective, 0.0, n);
  out.n_s = out.search.x;
  out.variance = out.search.value;
  return out;
}

PhaseGainOptimum optimize_phi_gain(double alpha, double r, double xi) {
  if (!(xi > 0.0 && xi <= 1.0)) throw PhysicsError("transmissivity must lie in (0, 1]");
  auto objective = [&](double phi) { return -reference::f_single_mode_limit(alpha, r, phi); };
  PhaseGainOptimum out;
  out.search = minimize_scalar(objective, 0.0, 0.5 * std::numbers::pi);
  out.phi = out.search.x;
  out.fisher = -out.search.value;
  return out;
}

std::vector<double> single_mode_gain_curve(double alpha, double r, double xi, double phi,
                                           const std::vector<double>& gains) {
  std::vector<double> f;
  f.reserve(gains.size());
  for (double gain : gains) {
    const Pipeline p = build_single_mode_chain(InputSpec{alpha, r}, strength_from_gain(gain), xi);
    f.push_back(qfi(propagate_with_derivative(p, phi)));
  }
  return f;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw std::invalid_argument("grid needs at least one point");
  if (points == 1) return {lo};
  if (!(lo < hi)) throw std::invalid_argument("grid bounds must be increasing");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  g.back() = hi;
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0)) throw std::invalid_argument("log grid needs a positive lower bound");
  std::vector<double> g = linear_grid(std::log10(lo), std::log10(hi), points);
  for (double& x : g) x = std::pow(10.0, x);
  g.front() = lo;
  if (points > 1) g.back() = hi;
  return g;
}

unsigned worker_count() {
  if (const char* env = std::getenv("GAUSSMETRO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::vector<double>> parallel_map(std::size_t count,
                                              const std::function<std::vector<double>(std::size_t)>& fn) {
  std::vector<std::vector<double>> out(count);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(count);
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return out;
}

}  // namespace gaussmetro
