#include "gaussmetro/reference_formulas.hpp"

#include <cmath>

#include "gaussmetro/elements.hpp"
#include "gaussmetro/estimation.hpp"
#include "gaussmetro/optimize.hpp"
#include "gtest/gtest.h"

using namespace gaussmetro;
using namespace gaussmetro::reference;

namespace {

double fisher(const Pipeline& p, double phi = 0.0) { return qfi(propagate_with_derivative(p, phi)); }

double sinh2(double r) { return std::sinh(r) * std::sinh(r); }

}  // namespace

TEST(PhotonBudget, Bookkeeping) {
  EXPECT_DOUBLE_EQ(mzi_photon_number(4.0, 10.0), 14.0);
  EXPECT_DOUBLE_EQ(su11_photon_number(4.0, 10.0, 2.0), 3.0 * 14.0 + 2.0);
  // The photon number inside the SU(1,1) device, after the first amplifier.
  const InputSpec in = InputSpec::from_photons(4.0, 10.0);
  const auto n = mean_photon_numbers(state_before_carrier(build_su11(in, strength_from_gain(2.0))));
  EXPECT_NEAR(n[0] + n[1], su11_photon_number(4.0, 10.0, 2.0), 1e-10);
}

TEST(MziIdeal, Values) {
  EXPECT_DOUBLE_EQ(f_mzi_ideal(4.0, 0.0), 4.0);
  EXPECT_DOUBLE_EQ(f_mzi_ideal(0.0, 0.0), 0.0);
  EXPECT_NEAR(f_mzi_ideal(4.0, sinh2(0.5)), 4.0 * std::exp(1.0) + sinh2(0.5), 1e-12);
  EXPECT_NEAR(f_mzi_ideal(4.0, sinh2(0.5)), 11.1446, 1e-4);
}

TEST(MziLossy, PracticalLimits) {
  const double n = 1e4;
  EXPECT_NEAR(qcrb_mzi_lossy_practical(n, 30.0, 0.8), 0.25 / n, 1e-12 / n);
  EXPECT_NEAR(qcrb_mzi_lossy_practical(n, 0.0, 0.8), 1.0 / (0.8 * n), 1e-15);
  EXPECT_NEAR(qcrb_mzi_lossy_practical(n, 0.7, 1.0), std::exp(-1.4) / n, 1e-15);
  EXPECT_THROW(qcrb_mzi_lossy_practical(n, 0.7, 0.0), PhysicsError);
}

TEST(MziLossy, OptimalLeadingOrder) {
  EXPECT_NEAR(qcrb_mzi_lossy_optimal(1e4, 0.8), 2.5e-5, 1e-15);
  EXPECT_GT(qcrb_mzi_lossy_optimal(1e4, 1e-6), 1e1);
  EXPECT_THROW(qcrb_mzi_lossy_optimal(1e4, 1.0), PhysicsError);
}

TEST(MziLossy, OptimalAgreesWithSqueezingOptimizer) {
  const auto best = optimize_ns(1e4, 0.8, 0.8);
  EXPECT_NEAR(best.variance / qcrb_mzi_lossy_optimal(1e4, 0.8), 1.0, 0.05);
}

TEST(Zeta, Values) {
  EXPECT_NEAR(zeta(0.8, 1.0), 0.8972135955, 1e-10);
  EXPECT_DOUBLE_EQ(zeta(0.7, 0.7), 0.7);
  for (double r : {0.0, 0.5, 1.5}) {
    EXPECT_NEAR(sens_p2_lossy(100.0, r, 0.7, 0.7), qcrb_mzi_lossy_practical(100.0, r, 0.7), 1e-15);
  }
}

TEST(Zeta, MatchesLibraryHomodyneInPracticalRegime) {
  const double n_c = 1e4;
  const double n_s = 10.0;
  const Propagation p = propagate_with_derivative(build_mzi(InputSpec::from_photons(n_c, n_s), 0.8, 1.0), 0.0);
  const double lib = detector_sensitivity(homodyne_detector(1), p);
  const double closed = sens_p2_lossy(n_c + n_s, squeezing_from_photons(n_s), 0.8, 1.0);
  EXPECT_NEAR(lib / closed, 1.0, 0.02);
}

TEST(Su11Coherent, Values) {
  EXPECT_DOUBLE_EQ(f_su11_coherent(4.0, 1.0), 31.0);
  EXPECT_DOUBLE_EQ(f_su11_coherent(7.0, 0.0), 7.0);
  EXPECT_DOUBLE_EQ(f_su11_coherent(0.0, 3.0), 15.0);
}

TEST(Su11CoherentSqueezed, ReducesAndMatchesLibrary) {
  for (double gain : {0.0, 1.0, 5.0}) {
    EXPECT_NEAR(f_su11_cs(3.0, 0.0, gain), f_su11_coherent(3.0, gain), 1e-12 * (1 + f_su11_coherent(3.0, gain)));
    EXPECT_NEAR(f_su11_cs(0.0, 0.0, gain), gain * (gain + 2.0), 1e-12 * (1 + gain * gain));
  }
  for (double n_c : {0.5, 4.0, 100.0}) {
    for (double n_s : {0.0, 0.3, 5.0}) {
      const double gain = 3.0;
      const double lib = fisher(build_su11(InputSpec::from_photons(n_c, n_s), strength_from_gain(gain)));
      const double closed = f_su11_cs(n_c, n_s, gain);
      EXPECT_NEAR(lib, closed, 1e-9 * closed);
    }
  }
}

TEST(Su11CoherentSqueezed, PracticalRegime) {
  auto ratio = [](double n_c, double n_s, double gain) {
    return (1.0 / f_su11_cs(n_c, n_s, gain)) / (1.0 / (4 * n_c * n_s * gain * gain));
  };
  // At n_s = 10, G = 20 the finite-n_s and finite-G factors (G+1)^2/G^2 and
  // e^{2r}/(4 n_s) still leave the leading form 16% away.
  EXPECT_NEAR(ratio(1e6, 10.0, 20.0), 16000.0 / (440.0 + 441.0 * (4 * 10 + 2 + 0.0)), 2e-3);
  EXPECT_NEAR(ratio(1e12, 100.0, 200.0), 1.0, 0.02);
  EXPECT_NEAR(ratio(1e16, 1e3, 2e3), 1.0, 2e-3);
}

TEST(Asymptotes, Values) {
  const double n_c = 1e6;
  EXPECT_NEAR(asymptote_lossy(n_c, 0.0, 0.8, AsymptoteKind::Mzi), 0.25 / n_c, 1e-18);
  EXPECT_NEAR(asymptote_lossy(n_c, 50.0, 0.8, AsymptoteKind::Su11), 0.25 / (50 * n_c), 1e-20);
  EXPECT_THROW(asymptote_lossy(n_c, 0.0, 0.8, AsymptoteKind::Su11), PhysicsError);
  EXPECT_THROW(asymptote_lossy(0.0, 1.0, 0.8, AsymptoteKind::Mzi), PhysicsError);
}

TEST(ExternalLoss, ReducesToIdealAndVacuum) {
  for (double gain : {1.0, 4.0}) {
    EXPECT_NEAR(f_su11_external_loss(3.0, 2.0, gain, 1.0), f_su11_cs(3.0, 2.0, gain), 1e-10 * f_su11_cs(3.0, 2.0, gain));
    for (double xi : {0.5, 0.8}) {
      EXPECT_NEAR(f_su11_external_loss(0.0, 0.0, gain, xi), xi * xi * gain * (gain + 2), 1e-12 * gain * gain);
    }
  }
}

TEST(ExternalLoss, MatchesLibrary) {
  for (double xi : {0.5, 0.8, 0.95}) {
    for (double n_s : {0.0, 2.0}) {
      const double gain = 4.0;
      const Pipeline p = build_su11(InputSpec::from_photons(3.0, n_s), strength_from_gain(gain), 1.0, 1.0, xi);
      const double closed = f_su11_external_loss(3.0, n_s, gain, xi);
      EXPECT_NEAR(fisher(p), closed, 1e-9 * closed);
    }
  }
}

TEST(ExternalLoss, PracticalRegime) {
  const double n_c = 1e6;
  const double gain = 50.0;
  const double xi = 0.8;
  const double approx = xi * (2 - xi) * n_c * gain * gain / (1 - xi);
  EXPECT_NEAR(f_su11_external_loss(n_c, 10.0, gain, xi) / approx, 1.0, 0.10);
}

TEST(SingleModeLimit, SpecialPoints) {
  for (double alpha : {0.5, 1.0, 2.0}) EXPECT_NEAR(f_single_mode_limit(alpha, 0.0, 0.0), 4 * alpha * alpha, 1e-12);
  EXPECT_NEAR(f_single_mode_limit(1.0, 0.5, std::acos(0.0)), 0.0, 1e-12);
  // Squeezed vacuum at cos 2phi = tanh 2r gives 2 Y^2.
  for (double r : {0.3, 0.8}) {
    const double y = std::sinh(2 * r);
    EXPECT_NEAR(f_single_mode_limit(0.0, r, 0.5 * std::acos(std::tanh(2 * r))), 2 * y * y, 1e-10 * y * y);
  }
}

TEST(SingleModeLimit, ApproachedByLargeGain) {
  const double alpha = 1.0;
  const double r = 0.5;
  const double phi = 0.4;
  const double limit = f_single_mode_limit(alpha, r, phi);
  const double f = fisher(build_single_mode_chain({alpha, r}, strength_from_gain(1e6), 0.8), phi);
  EXPECT_NEAR(f / limit, 1.0, 1e-4);
}
