#pragma once

#include <vector>

#include "gaussmetro/elements.hpp"
#include "gaussmetro/estimation.hpp"

// Brute-force reference engine over a truncated number basis. Shares only the
// element descriptions with the Gaussian engine; every physical map is built
// from exponentials of truncated ladder-operator generators.
namespace gaussmetro::fock {

inline constexpr int kDefaultDims = 30;
inline constexpr double kTailTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-8;

struct TruncationReport {
  double trace_deficit = 0.0;    // largest 1 - Tr rho seen along the chain
  double tail_population = 0.0;  // largest population of the top two levels
};

/// Mixed state rho = Psi Psi^dagger over |n1, n2, ...>, index n1 * d2 + n2.
/// The factor Psi has one column per Kraus branch.
class FockDensityMatrix {
 public:
  FockDensityMatrix(std::vector<int> dims, CMatrix factor);

  const std::vector<int>& dims() const { return dims_; }
  int mode_count() const { return static_cast<int>(dims_.size()); }
  Eigen::Index dimension() const { return factor_.rows(); }
  const CMatrix& factor() const { return factor_; }
  CMatrix& factor() { return factor_; }

  /// Dense rho; only for small truncations.
  CMatrix density() const;
  double trace() const;
  double purity() const;

 private:
  std::vector<int> dims_;
  CMatrix factor_;
};

/// Row stride of each mode in the tensor-product index.
std::vector<Eigen::Index> strides(const std::vector<int>& dims);

/// Population of the top two Fock levels of any mode, and 1 - trace.
TruncationReport truncation_report(const FockDensityMatrix& rho);

/// exp(-i H) of a Hermitian generator, stored as dense blocks over the
/// connected components of H's sparsity pattern.
class FockUnitary {
 public:
  struct Block {
    std::vector<Eigen::Index> index;
    CMatrix u;
  };

  explicit FockUnitary(std::vector<Block> blocks, Eigen::Index dimension);

  /// Psi -> U Psi, in place.
  void apply(CMatrix& factor) const;
  const std::vector<Block>& blocks() const { return blocks_; }
  CMatrix dense() const;

 private:
  std::vector<Block> blocks_;
  Eigen::Index dimension_;
};

/// e^{alpha(a_k+ - a_k)}.
FockUnitary displacement(const std::vector<int>& dims, int mode, double alpha);
/// e^{sign g (a_k+^2 - a_k^2)/2}; sign -1 is e^{g(a^2 - a+^2)/2}.
FockUnitary single_mode_squeezer(const std::vector<int>& dims, int mode, double g, int sign);
/// e^{sign g (a1+ a2+ - a1 a2)}.
FockUnitary two_mode_squeezer(const std::vector<int>& dims, double g, int sign);
/// e^{(pi/4)(a1+ a2 - a2+ a1)} followed by e^{i pi n2}.
FockUnitary beam_splitter(const std::vector<int>& dims);
/// e^{i phi sum_k w_k n_k}, so that a_k -> e^{i w_k phi} a_k.
FockUnitary phase_shift(const std::vector<int>& dims, const std::vector<double>& weights, double phi);

/// |alpha, r> = e^{alpha(a+ - a)} e^{r(a+^2 - a^2)/2}|0> for one mode, and
/// |alpha>|0, r> for two modes.
FockDensityMatrix build_state(const InputSpec& spec, const std::vector<int>& dims);

/// Amplitude damping with transmissivity xi on one mode. Kraus operators
/// K_m|n> = sqrt(C(n,m) xi^{n-m} (1-xi)^m)|n-m> for m <= kraus_max.
void apply_loss(CMatrix& factor, const std::vector<int>& dims, int mode, double xi, int kraus_max);

/// Smallest Kraus cutoff whose discarded weight is below 1e-12.
int kraus_cutoff(const CMatrix& factor, const std::vector<int>& dims, int mode, double xi);

/// Applies one element, checking the truncation gate afterwards.
void apply(const Element& element, FockDensityMatrix& rho, TruncationReport* report = nullptr);

/// rho(phi) and the factor of d rho/d phi = Psi' Psi^+ + Psi Psi'^+.
struct Evolution {
  FockDensityMatrix rho;
  CMatrix dfactor;
  TruncationReport report;
};

/// Runs the pipeline at phi. The carrier's phase derivative is a five-point
/// central difference with step 1e-3; later maps act linearly on it.
Evolution evolve(const Pipeline& pipeline, double phi, const std::vector<int>& dims);
Evolution evolve(const Pipeline& pipeline, double phi, int dims = kDefaultDims);

/// F = sum_{j,k} 2 |<j|rho'|k>|^2 / (lambda_j + lambda_k), pairs with
/// lambda_j + lambda_k <= 1e-12 excluded.
double qfi_fock(const Evolution& evolution);
double qfi_fock(const Pipeline& pipeline, double phi, int dims = kDefaultDims);

/// <a_k> and <a_k+> in the Gaussian engine's ordering.
CVector mean_vector(const FockDensityMatrix& rho);
std::vector<double> photon_numbers(const FockDensityMatrix& rho);

struct ObservableStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Moments of M = 1/2 a~^T A0 a~ + a^T b0 with a~ centred on rho's own mean.
ObservableStats observable_stats(const QuadraticDetector& det, const FockDensityMatrix& rho);

/// d<M>/dphi = Tr[rho' M] with M held fixed at the evaluation point.
double observable_slope(const QuadraticDetector& det, const Evolution& evolution);

}  // namespace gaussmetro::fock
