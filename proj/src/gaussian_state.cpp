#include "gaussmetro/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace gaussmetro {

namespace {

double scale_of(const CMatrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

RMatrix real_symplectic_form(int modes) {
  RMatrix j = RMatrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    j(2 * k, 2 * k + 1) = 1.0;
    j(2 * k + 1, 2 * k) = -1.0;
  }
  return j;
}

struct QuadratureRoot {
  RMatrix root;  // sigma_r^{1/2}
};

QuadratureRoot quadrature_root(const RMatrix& sigma_r) {
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(sigma_r);
  if (eig.info() != Eigen::Success) throw PhysicsError("covariance eigendecomposition failed");
  const RVector& lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > 0.0)) throw PhysicsError("covariance matrix is singular or not positive definite");
  const RMatrix& v = eig.eigenvectors();
  return {v * lambda.cwiseSqrt().asDiagonal() * v.transpose()};
}

}  // namespace

double InputSpec::squeezed_photons() const {
  const double s = std::sinh(r);
  return s * s;
}
double InputSpec::cosh2r() const { return std::cosh(2.0 * r); }
double InputSpec::sinh2r() const { return std::sinh(2.0 * r); }

InputSpec InputSpec::from_photons(double coherent, double squeezed) {
  if (coherent < 0.0 || squeezed < 0.0) throw PhysicsError("photon numbers must be non-negative");
  return {std::sqrt(coherent), std::asinh(std::sqrt(squeezed))};
}

CMatrix commutator_matrix(int modes) {
  if (modes < 1) throw std::invalid_argument("mode count must be positive");
  return real_symplectic_form(modes).cast<Complex>();
}

CMatrix conjugation_swap(int modes) {
  if (modes < 1) throw std::invalid_argument("mode count must be positive");
  CMatrix k = CMatrix::Zero(2 * modes, 2 * modes);
  for (int m = 0; m < modes; ++m) {
    k(2 * m, 2 * m + 1) = 1.0;
    k(2 * m + 1, 2 * m) = 1.0;
  }
  return k;
}

CMatrix ladder_to_quadrature(int modes) {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix w = CMatrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    w(2 * k, 2 * k) = s;
    w(2 * k, 2 * k + 1) = s;
    w(2 * k + 1, 2 * k) = -kI * s;
    w(2 * k + 1, 2 * k + 1) = kI * s;
  }
  return w;
}

RMatrix quadrature_covariance(const CMatrix& sigma) {
  const int modes = static_cast<int>(sigma.rows() / 2);
  const CMatrix w = ladder_to_quadrature(modes);
  const CMatrix q = w * sigma * w.transpose();
  RMatrix real = q.real();
  return 0.5 * (real + real.transpose());
}

GaussianState::GaussianState(CVector mean, CMatrix sigma) : mean_(std::move(mean)), sigma_(std::move(sigma)) {
  const auto dim = mean_.size();
  if (dim == 0 || dim % 2 != 0) throw std::invalid_argument("mean vector must have even, non-zero length");
  if (sigma_.rows() != dim || sigma_.cols() != dim) throw std::invalid_argument("covariance shape does not match mean");
  if (!mean_.allFinite() || !sigma_.allFinite()) throw PhysicsError("state has non-finite moments");

  const double tol = kStructuralTolerance * scale_of(sigma_);
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > tol) throw PhysicsError("covariance is not symmetric");

  const CMatrix k = conjugation_swap(mode_count());
  const double vtol = kStructuralTolerance * std::max(1.0, mean_.cwiseAbs().maxCoeff());
  if ((k * mean_.conjugate() - mean_).cwiseAbs().maxCoeff() > vtol)
    throw PhysicsError("mean vector violates the reality condition");
  if ((k * sigma_.conjugate() * k - sigma_).cwiseAbs().maxCoeff() > tol)
    throw PhysicsError("covariance violates the reality condition");

  // Roundoff eps |sigma| in the entries moves nu by up to ~eps |sigma|^2.
  const double scale = scale_of(sigma_);
  const double ptol = std::max(kPhysicalityTolerance, 64.0 * std::numeric_limits<double>::epsilon() * scale * scale);
  const auto nu = symplectic_eigenvalues(sigma_);
  if (nu.front() < 0.5 - ptol)
    throw PhysicsError("covariance violates the uncertainty principle (symplectic eigenvalue < 1/2)");
}

GaussianState vacuum(int modes) {
  if (modes < 1) throw std::invalid_argument("vacuum needs at least one mode");
  return GaussianState(CVector::Zero(2 * modes), 0.5 * conjugation_swap(modes));
}

GaussianState single_mode_input(const InputSpec& spec) {
  const double x = spec.cosh2r();
  const double y = spec.sinh2r();
  CVector v(2);
  v << spec.alpha, spec.alpha;
  CMatrix s(2, 2);
  s << y, x, x, y;
  return GaussianState(v, 0.5 * s);
}

GaussianState coherent_squeezed_input(const InputSpec& spec) {
  const double x = spec.cosh2r();
  const double y = spec.sinh2r();
  CVector v = CVector::Zero(4);
  v(0) = spec.alpha;
  v(1) = spec.alpha;
  CMatrix s = CMatrix::Zero(4, 4);
  s(0, 1) = s(1, 0) = 0.5;
  s(2, 2) = s(3, 3) = 0.5 * y;
  s(2, 3) = s(3, 2) = 0.5 * x;
  return GaussianState(v, s);
}

GaussianState input_state(const InputSpec& spec, int modes) {
  switch (modes) {
    case 1:
      return single_mode_input(spec);
    case 2:
      return coherent_squeezed_input(spec);
    default:
      throw std::invalid_argument("input states are defined for one or two modes");
  }
}

std::vector<double> mean_photon_numbers(const GaussianState& state) {
  std::vector<double> n(state.mode_count());
  for (int k = 0; k < state.mode_count(); ++k) {
    n[k] = state.sigma()(2 * k, 2 * k + 1).real() - 0.5 + std::norm(state.mean()(2 * k));
  }
  return n;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  return symplectic_eigenvalues(state.sigma());
}

// nu_k are the moduli of the eigenvalues of sigma^{1/2} J sigma^{1/2} (real
// antisymmetric), which is well conditioned even for strongly squeezed states.
std::vector<double> symplectic_eigenvalues(const CMatrix& sigma) {
  if (!sigma.allFinite()) throw PhysicsError("covariance has non-finite entries");
  const int modes = static_cast<int>(sigma.rows() / 2);
  const RMatrix root = quadrature_root(quadrature_covariance(sigma)).root;
  const RMatrix q = root * real_symplectic_form(modes) * root;
  const CMatrix h = kI * q.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
  std::vector<double> nu;
  for (int k = 0; k < modes; ++k) nu.push_back(eig.eigenvalues()(modes + k));
  std::sort(nu.begin(), nu.end());
  return nu;
}

WilliamsonForm williamson(const CMatrix& sigma) {
  const int modes = static_cast<int>(sigma.rows() / 2);
  const RMatrix root = quadrature_root(quadrature_covariance(sigma)).root;
  const RMatrix q = root * real_symplectic_form(modes) * root;
  const CMatrix h = kI * q.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  if (eig.info() != Eigen::Success) throw PhysicsError("symplectic diagonalization failed");

  // For i Q u = nu u with nu > 0, x = sqrt2 Re u and y = sqrt2 Im u satisfy
  // Q y = -nu x and Q x = nu y, so the basis (y, x) carries nu J.
  RMatrix basis(2 * modes, 2 * modes);
  RMatrix inv_sqrt_d = RMatrix::Zero(2 * modes, 2 * modes);
  WilliamsonForm form;
  for (int k = 0; k < modes; ++k) {
    const double nu = eig.eigenvalues()(modes + k);
    const CVector u = eig.eigenvectors().col(modes + k);
    basis.col(2 * k) = std::sqrt(2.0) * u.imag();
    basis.col(2 * k + 1) = std::sqrt(2.0) * u.real();
    inv_sqrt_d(2 * k, 2 * k) = inv_sqrt_d(2 * k + 1, 2 * k + 1) = 1.0 / std::sqrt(nu);
    form.nu.push_back(nu);
  }
  const RMatrix s_real = root * basis * inv_sqrt_d;

  const CMatrix w = ladder_to_quadrature(modes);
  form.symplectic = w.adjoint() * s_real.cast<Complex>() * w;
  const CMatrix omega = commutator_matrix(modes);
  form.symplectic_inverse = -omega * form.symplectic.transpose() * omega;
  return form;
}

}  // namespace gaussmetro
