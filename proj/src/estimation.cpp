#include "gaussmetro/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gaussmetro {

namespace {

constexpr double kCutoff = 1e-10;
constexpr double kResidualTolerance = 1e-8;

void check_shapes(const GaussianState& state, const StateDerivative& d) {
  const auto n = state.mean().size();
  if (d.mean.size() != n || d.sigma.rows() != n || d.sigma.cols() != n)
    throw std::invalid_argument("derivative shape does not match the state");
  if (!d.mean.allFinite() || !d.sigma.allFinite()) throw PhysicsError("derivative has non-finite entries");
}

// Inverse of the Williamson diagonal: (1/nu) P per mode, P the 2x2 swap.
CMatrix inverse_diagonal(const std::vector<double>& nu) {
  const int modes = static_cast<int>(nu.size());
  CMatrix d = CMatrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) d(2 * k, 2 * k + 1) = d(2 * k + 1, 2 * k) = 1.0 / nu[k];
  return d;
}

struct FrameSolution {
  CMatrix X;  // A in the Williamson frame
  CMatrix Y;  // sigma' in the Williamson frame
  CVector w;  // v' in the Williamson frame
  WilliamsonForm form;
};

// With sigma = S D S^T and Omega = S Omega S^T, A = S^{-T} X S^{-1} reduces the
// equation to D X D - Omega X Omega / 4 = Y. Entry (a, b) of block (j, k) reads
//   (nu_j nu_k + s_a s_b / 4) X(a', b') = Y(a, b),   s = (+1, -1), a' = 1 - a.
FrameSolution solve_in_frame(const GaussianState& state, const StateDerivative& d) {
  check_shapes(state, d);
  FrameSolution out;
  out.form = williamson(state.sigma());
  const CMatrix& s_inv = out.form.symplectic_inverse;
  out.Y = s_inv * d.sigma * s_inv.transpose();
  out.w = s_inv * d.mean;

  const auto dim = out.Y.rows();
  const auto& nu = out.form.nu;
  auto coefficient = [&](Eigen::Index a, Eigen::Index b) {
    const double sa = (a % 2 == 0) ? 1.0 : -1.0;
    const double sb = (b % 2 == 0) ? 1.0 : -1.0;
    return nu[a / 2] * nu[b / 2] + 0.25 * sa * sb;
  };
  double cmax = 0.0;
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b) cmax = std::max(cmax, std::abs(coefficient(a, b)));

  const double yscale = out.Y.cwiseAbs().maxCoeff();
  out.X = CMatrix::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const double c = coefficient(a, b);
      const Eigen::Index ap = a ^ 1;
      const Eigen::Index bp = b ^ 1;
      if (std::abs(c) <= kCutoff * cmax) {
        if (std::abs(out.Y(a, b)) > kResidualTolerance * yscale)
          throw PhysicsError("SLD equation is inconsistent: derivative leaves the pure-state manifold");
        continue;
      }
      out.X(ap, bp) = out.Y(a, b) / c;
    }
  }
  out.X = 0.5 * (out.X + out.X.transpose()).eval();
  return out;
}

}  // namespace

SldObservable sld(const GaussianState& state, const StateDerivative& derivative) {
  const FrameSolution f = solve_in_frame(state, derivative);
  const CMatrix& s_inv = f.form.symplectic_inverse;
  SldObservable out;
  out.A = s_inv.transpose() * f.X * s_inv;
  out.A = 0.5 * (out.A + out.A.transpose()).eval();
  out.b = s_inv.transpose() * (inverse_diagonal(f.form.nu) * f.w);
  return out;
}

double qfi(const GaussianState& state, const StateDerivative& derivative) {
  const FrameSolution f = solve_in_frame(state, derivative);
  // Tr[sigma' A] = Tr[Y X] and v'^T sigma^{-1} v' = w^T D^{-1} w.
  const Complex quadratic = 0.5 * (f.Y.transpose().cwiseProduct(f.X)).sum();
  const Complex linear = (f.w.transpose() * inverse_diagonal(f.form.nu) * f.w)(0, 0);
  const double fisher = (quadratic + linear).real();
  if (!std::isfinite(fisher)) throw PhysicsError("quantum Fisher information is not finite");
  return std::max(fisher, 0.0);
}

double qfi(const Propagation& propagation) { return qfi(propagation.state, propagation.derivative); }

double qcrb(double fisher) {
  if (!(fisher > 0.0)) throw PhysicsError("zero quantum Fisher information: the phase is not encoded");
  return 1.0 / std::sqrt(fisher);
}

double detector_slope(const QuadraticDetector& det, const StateDerivative& derivative) {
  const Complex trace = (derivative.sigma.transpose().cwiseProduct(det.A0)).sum();
  const Complex linear = (derivative.mean.transpose() * det.b0)(0, 0);
  return (0.5 * trace + linear).real();
}

double detector_variance(const QuadraticDetector& det, const GaussianState& state) {
  const int modes = state.mode_count();
  if (det.A0.rows() != 2 * modes || det.b0.size() != 2 * modes)
    throw std::invalid_argument("detector size does not match the state");
  const CMatrix g = state.sigma() + 0.5 * commutator_matrix(modes);
  const CMatrix ag = det.A0 * g;
  const Complex quadratic = 0.5 * (ag * det.A0 * g.transpose()).trace();
  const Complex linear = (det.b0.transpose() * state.sigma() * det.b0)(0, 0);
  return (quadratic + linear).real();
}

double detector_sensitivity(const QuadraticDetector& det, const GaussianState& state,
                            const StateDerivative& derivative) {
  const double slope = detector_slope(det, derivative);
  const double variance = detector_variance(det, state);
  if (!(std::abs(slope) > 0.0) || !std::isfinite(variance / (slope * slope)))
    throw PhysicsError("detector '" + det.label + "' is blind at this operating point");
  return variance / (slope * slope);
}

double detector_sensitivity(const QuadraticDetector& det, const Propagation& propagation) {
  return detector_sensitivity(det, propagation.state, propagation.derivative);
}

QuadraticDetector homodyne_detector(int mode, int modes) {
  if (mode < 0 || mode >= modes) throw std::invalid_argument("homodyne mode index out of range");
  QuadraticDetector det{CMatrix::Zero(2 * modes, 2 * modes), CVector::Zero(2 * modes),
                        "p" + std::to_string(mode + 1)};
  const double s = 1.0 / std::sqrt(2.0);
  det.b0(2 * mode) = -kI * s;
  det.b0(2 * mode + 1) = kI * s;
  return det;
}

double generalized_homodyne_coefficient(double xi1, double xi2) {
  if (!(xi1 > 0.0 && xi2 > 0.0 && xi1 <= 1.0 && xi2 <= 1.0))
    throw PhysicsError("generalized homodyne needs transmissivities in (0, 1]");
  const double s1 = std::sqrt(xi1);
  const double s2 = std::sqrt(xi2);
  return (s1 - s2) / (s1 + s2);
}

QuadraticDetector generalized_homodyne(double xi1, double xi2) {
  const double c = generalized_homodyne_coefficient(xi1, xi2);
  QuadraticDetector det = homodyne_detector(1);
  det.b0 += c * homodyne_detector(0).b0;
  det.label = "generalized_homodyne";
  return det;
}

QuadraticDetector as_detector(const SldObservable& sld, std::string label) {
  return {sld.A, sld.b, std::move(label)};
}

QuadraticDetector normalized_ray(const QuadraticDetector& det) {
  Complex pivot = 0.0;
  auto consider = [&](const Complex& z) {
    if (std::abs(z) > std::abs(pivot)) pivot = z;
  };
  for (Eigen::Index i = 0; i < det.A0.size(); ++i) consider(det.A0.data()[i]);
  for (Eigen::Index i = 0; i < det.b0.size(); ++i) consider(det.b0(i));
  if (pivot == Complex(0.0)) return det;
  return {det.A0 / pivot, det.b0 / pivot, det.label};
}

}  // namespace gaussmetro
