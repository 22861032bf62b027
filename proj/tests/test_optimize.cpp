#include "gaussmetro/optimize.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "gaussmetro/elements.hpp"
#include "gaussmetro/estimation.hpp"
#include "gaussmetro/reference_formulas.hpp"
#include "gaussmetro/types.hpp"
#include "gtest/gtest.h"

using namespace gaussmetro;

TEST(MinimizeScalar, Parabola) {
  const auto m = minimize_scalar([](double x) { return (x - 1.0) * (x - 1.0); }, 0.0, 3.0);
  EXPECT_NEAR(m.x, 1.0, 1e-7);
  EXPECT_LE(m.bracket_hi - m.bracket_lo, 1e-8 * 3.0);
  EXPECT_GT(m.iterations, 0);
}

TEST(MinimizeScalar, MonotoneReturnsEndpoint) {
  EXPECT_DOUBLE_EQ(minimize_scalar([](double x) { return x; }, 2.0, 5.0).x, 2.0);
  EXPECT_DOUBLE_EQ(minimize_scalar([](double x) { return -x; }, 2.0, 5.0).x, 5.0);
}

TEST(MinimizeScalar, RejectsBadInput) {
  EXPECT_THROW(minimize_scalar([](double x) { return x; }, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(minimize_scalar([](double) { return std::nan(""); }, 0.0, 1.0), Error);
  EXPECT_THROW(minimize_scalar([](double x) { return 1.0 / (x - 0.5) / 0.0; }, 0.0, 1.0), Error);
}

TEST(MinimizeScalar, SqueezedVacuumLimitStationaryPoint) {
  for (double r : {0.2, 0.5, 1.0}) {
    const auto m = minimize_scalar([&](double phi) { return -reference::f_single_mode_limit(0.0, r, phi); }, 0.0,
                                   0.5 * std::numbers::pi);
    EXPECT_NEAR(std::cos(2.0 * m.x), std::tanh(2.0 * r), 1e-6);
  }
}

TEST(MinimizeScalar, Deterministic) {
  auto f = [](double x) { return std::sin(3 * x) + 0.1 * x * x; };
  const auto a = minimize_scalar(f, -2.0, 2.0);
  const auto b = minimize_scalar(f, -2.0, 2.0);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(OptimizeNs, IdealSplitsPhotonsEvenly) {
  const auto best = optimize_ns(100.0);
  EXPECT_NEAR(best.n_s / 50.0, 1.0, 0.10);
  EXPECT_NEAR(std::sqrt(best.variance) * 100.0, 1.0, 0.10);
}

TEST(OptimizeNs, LossyScaling) {
  const double n = 1e4;
  const auto best = optimize_ns(n, 0.8, 0.8);
  EXPECT_NEAR(best.variance / ((1 - 0.8) / (0.8 * n)), 1.0, 0.05);
  const double ratio = best.n_s / std::sqrt(n);
  EXPECT_GE(ratio, 0.05);
  EXPECT_LE(ratio, 20.0);
}

TEST(OptimizeNs, DominatesGrid) {
  const double n = 50.0;
  const auto best = optimize_ns(n, 0.9, 0.7);
  const Pipeline base = build_mzi(InputSpec{}, 0.9, 0.7);
  for (double n_s : linear_grid(0.0, n, 200)) {
    const double f = qfi(propagate_with_derivative(base.with_input(InputSpec::from_photons(n - n_s, n_s)), 0.0));
    EXPECT_LE(best.variance, 1.0 / f * (1 + 1e-12));
  }
  EXPECT_THROW(optimize_ns(0.0), PhysicsError);
}

TEST(OptimizePhiGain, CoherentState) {
  const auto best = optimize_phi_gain(1.5, 0.0, 0.8);
  EXPECT_NEAR(best.phi, 0.0, 1e-6);
  EXPECT_NEAR(best.fisher, 4 * 1.5 * 1.5, 1e-9);
}

TEST(OptimizePhiGain, SqueezedVacuum) {
  const double r = 0.6;
  const double y = std::sinh(2 * r);
  EXPECT_NEAR(optimize_phi_gain(0.0, r, 0.8).fisher, 2 * y * y, 1e-9);
  EXPECT_THROW(optimize_phi_gain(1.0, 0.5, 0.0), PhysicsError);
}

TEST(OptimizePhiGain, GenericStateFallsShortOfIdealDetector) {
  const auto best = optimize_phi_gain(1.0, 0.5, 0.8);
  const double ideal = qfi(propagate_with_derivative(build_single_mode_chain({1.0, 0.5}, 0.0, 1.0), 0.0));
  EXPECT_LT(best.fisher, ideal * 0.99);
}

TEST(GainCurve, UsesGainParameterization) {
  const auto f = single_mode_gain_curve(1.0, 0.5, 1.0, 0.3, {0.0, 5.0});
  ASSERT_EQ(f.size(), 2u);
  EXPECT_NEAR(f[0], f[1], 1e-9 * f[0]);
}

TEST(Grids, LinearAndLog) {
  const auto lin = linear_grid(0.0, 1.0, 5);
  EXPECT_EQ(lin, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  const auto lg = log_grid(1.0, 1e4, 5);
  EXPECT_DOUBLE_EQ(lg.front(), 1.0);
  EXPECT_DOUBLE_EQ(lg.back(), 1e4);
  EXPECT_NEAR(lg[2], 100.0, 1e-12);
  for (std::size_t i = 1; i < lg.size(); ++i) EXPECT_GT(lg[i], lg[i - 1]);
  EXPECT_EQ(linear_grid(3.0, 3.0, 1), std::vector<double>{3.0});
  EXPECT_THROW(linear_grid(1.0, 0.0, 3), std::invalid_argument);
  EXPECT_THROW(log_grid(0.0, 1.0, 3), std::invalid_argument);
}

TEST(ParallelMap, KeepsOrder) {
  const auto out = parallel_map(100, [](std::size_t i) { return std::vector<double>{double(i), double(i * i)}; });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i][1], double(i * i));
}

TEST(ParallelMap, RethrowsLowestFailingIndex) {
  try {
    parallel_map(64, [](std::size_t i) -> std::vector<double> {
      if (i % 10 == 7) throw std::runtime_error(std::to_string(i));
      return {};
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(ParallelMap, ThreadCapFromEnvironment) {
  setenv("GAUSSMETRO_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  setenv("GAUSSMETRO_THREADS", "junk", 1);
  EXPECT_GE(worker_count(), 1u);
  unsetenv("GAUSSMETRO_THREADS");
}
