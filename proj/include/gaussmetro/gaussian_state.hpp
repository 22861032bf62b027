#pragma once

#include <vector>

#include "gaussmetro/types.hpp"

namespace gaussmetro {

// Tolerances for GaussianState validation. Structural checks are relative to
// max(1, |sigma|_max); the physicality floor widens to 64 eps |sigma|_max^2 for
// strongly squeezed states.
inline constexpr double kStructuralTolerance = 1e-12;
inline constexpr double kPhysicalityTolerance = 1e-9;

/// Coherent amplitude and squeezing factor of the input field.
struct InputSpec {
  double alpha = 0.0;  ///< real displacement amplitude
  double r = 0.0;      ///< squeezing factor

  double coherent_photons() const { return alpha * alpha; }
  double squeezed_photons() const;
  double cosh2r() const;  // X
  double sinh2r() const;  // Y

  /// Inverse of (n_c, n_s) = (alpha^2, sinh^2 r).
  static InputSpec from_photons(double coherent, double squeezed);
};

/// Block-diagonal commutator matrix Omega_jk = [a_j, a_k] in (a1, a1+, a2, a2+, ...).
CMatrix commutator_matrix(int modes);

/// Permutation K swapping a_k <-> a_k^dagger in every mode.
CMatrix conjugation_swap(int modes);

/// Gaussian state in the complex ladder basis (a1, a1+, ..., an, an+).
///
/// The mean is v = <a> and sigma the symmetrized central second moments.
/// Construction validates symmetry, the reality condition and physicality
/// (symplectic eigenvalues >= 1/2); a violation raises PhysicsError.
class GaussianState {
 public:
  GaussianState(CVector mean, CMatrix sigma);

  int mode_count() const { return static_cast<int>(mean_.size() / 2); }
  const CVector& mean() const { return mean_; }
  const CMatrix& sigma() const { return sigma_; }

 private:
  CVector mean_;
  CMatrix sigma_;
};

GaussianState vacuum(int modes);

/// |alpha>_1 |0, r>_2: coherent light in mode 1, squeezed vacuum in mode 2.
GaussianState coherent_squeezed_input(const InputSpec& spec);

/// Single-mode e^{alpha(a+ - a)} e^{r(a+^2 - a^2)/2} |0>.
GaussianState single_mode_input(const InputSpec& spec);

/// Input state for a one- or two-mode device.
GaussianState input_state(const InputSpec& spec, int modes);

std::vector<double> mean_photon_numbers(const GaussianState& state);

/// Symplectic eigenvalues of the covariance, ascending, one per mode.
std::vector<double> symplectic_eigenvalues(const GaussianState& state);
std::vector<double> symplectic_eigenvalues(const CMatrix& sigma);

/// Real covariance of the quadratures (x1, p1, x2, p2, ...), with
/// x = (a + a+)/sqrt2 and p = i(a+ - a)/sqrt2.
RMatrix quadrature_covariance(const CMatrix& sigma);

/// Change of basis from ladder operators to quadratures, x = W a.
CMatrix ladder_to_quadrature(int modes);

/// Williamson form sigma = S D S^T with S symplectic in the ladder basis
/// (S Omega S^T = Omega) and D holding nu_k on each mode's cross entries.
struct WilliamsonForm {
  std::vector<double> nu;  // per mode, in the order matched to S
  CMatrix symplectic;
  CMatrix symplectic_inverse;
};

WilliamsonForm williamson(const CMatrix& sigma);

}  // namespace gaussmetro
