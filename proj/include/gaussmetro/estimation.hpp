#pragma once

#include <string>

#include "gaussmetro/elements.hpp"

namespace gaussmetro {

/// Symmetric logarithmic derivative
///   L = 1/2 a~^T A a~ - 1/2 Tr[sigma A] + a~^T b,   a~ = a - v.
struct SldObservable {
  CMatrix A;
  CVector b;
};

/// Quadratic detector M = 1/2 a~^T A0 a~ + a^T b0, with the quadratic part
/// centred on the mean of the state it is evaluated on.
struct QuadraticDetector {
  CMatrix A0;
  CVector b0;
  std::string label;
};

/// Solves sigma A sigma - Omega A Omega / 4 = sigma' and b = sigma^{-1} v'.
///
/// The system is diagonal in the Williamson frame of sigma. Coefficients below
/// 1e-10 of the largest are dropped (pure-state directions); the matching
/// right-hand side must vanish to 1e-8 or PhysicsError is raised.
SldObservable sld(const GaussianState& state, const StateDerivative& derivative);

/// F = 1/2 Tr[sigma' A] + v'^T b.
double qfi(const GaussianState& state, const StateDerivative& derivative);
double qfi(const Propagation& propagation);

/// Delta phi = 1/sqrt(F). F <= 0 carries no information and raises PhysicsError.
double qcrb(double fisher);

/// d<M>/dphi = 1/2 Tr[sigma' A0] + v'^T b0.
double detector_slope(const QuadraticDetector& det, const StateDerivative& derivative);

/// <(M - <M>)^2> = 1/2 Tr[A0 G A0 G^T] + b0^T sigma b0, G = sigma + Omega/2.
double detector_variance(const QuadraticDetector& det, const GaussianState& state);

/// Error-propagation sensitivity Delta^2 phi = Delta^2 M / |d<M>/dphi|^2.
/// A vanishing slope (blind detector) raises PhysicsError.
double detector_sensitivity(const QuadraticDetector& det, const GaussianState& state,
                            const StateDerivative& derivative);
double detector_sensitivity(const QuadraticDetector& det, const Propagation& propagation);

/// p_k = i(a_k+ - a_k)/sqrt2, zero-based mode index.
QuadraticDetector homodyne_detector(int mode, int modes = 2);

/// p_2 + c p_1 with c = (sqrt xi1 - sqrt xi2)/(sqrt xi1 + sqrt xi2).
QuadraticDetector generalized_homodyne(double xi1, double xi2);
double generalized_homodyne_coefficient(double xi1, double xi2);

/// The M-detection: the SLD used as a detector.
QuadraticDetector as_detector(const SldObservable& sld, std::string label = "M");

/// Detector scaled so its largest-magnitude coefficient equals 1.
QuadraticDetector normalized_ray(const QuadraticDetector& det);

}  // namespace gaussmetro
