#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "gaussmetro/gaussian_state.hpp"

namespace gaussmetro {

/// 50:50 beam splitter, a1 -> (a1 + a2)/sqrt2, a2 -> (a1 - a2)/sqrt2.
struct BeamSplitter {};

/// Phase shift a_k -> e^{i w_k phi} a_k. The symmetric two-arm shifter has
/// weights (1/2, -1/2); the single-mode e^{-i phi a+a} has weight -1.
struct PhaseShifter {
  double phi = 0.0;
  std::vector<double> weights;
};

/// Parametric amplifier with strength g. Two modes: T+/- with mu = cosh g,
/// nu = +/- sinh g. One mode: e^{+/- g(a+^2 - a^2)/2}.
struct Opa {
  double g = 0.0;
  int sign = +1;
};

/// Per-mode photon loss a_k -> sqrt(xi_k) a_k + sqrt(1 - xi_k) v_k.
struct Loss {
  std::vector<double> transmissivity;
};

using Element = std::variant<BeamSplitter, PhaseShifter, Opa, Loss>;

PhaseShifter symmetric_phase(double phi = 0.0);
PhaseShifter number_phase(double phi = 0.0);

/// Spontaneous photon number G = 2 sinh^2 g of an amplifier, and its inverse.
double gain_from_strength(double g);
double strength_from_gain(double gain);

/// Linear map on (a1, a1+, ...) for lossless elements; R for loss.
CMatrix transfer_matrix(const Element& element, int modes);

/// Derivative of the phase carrier's transfer matrix is generator * T.
CMatrix phase_generator(const PhaseShifter& phase);

GaussianState apply(const Element& element, const GaussianState& state);

struct StateDerivative {
  CVector mean;
  CMatrix sigma;
};

struct Propagation {
  GaussianState state;
  StateDerivative derivative;
};

/// Ordered optical circuit acting on a one- or two-mode input, with exactly
/// one phase shifter carrying the estimated phase.
class Pipeline {
 public:
  Pipeline(int modes, InputSpec input, std::vector<Element> elements, std::size_t carrier);

  int mode_count() const { return modes_; }
  const InputSpec& input() const { return input_; }
  const std::vector<Element>& elements() const { return elements_; }
  std::size_t carrier() const { return carrier_; }

  GaussianState input_state() const { return gaussmetro::input_state(input_, modes_); }

  /// Copy with a different input field.
  Pipeline with_input(const InputSpec& input) const;

 private:
  int modes_;
  InputSpec input_;
  std::vector<Element> elements_;
  std::size_t carrier_;
};

/// Exact (v, sigma) and their phi-derivatives at the output, by the product
/// rule through the carrier. Loss passes derivatives through R only.
Propagation propagate_with_derivative(const Pipeline& pipeline, double phi);

/// State immediately before the phase carrier (inside the interferometer).
GaussianState state_before_carrier(const Pipeline& pipeline);

/// [BS, T_phi, Loss(xi1, xi2), BS].
Pipeline build_mzi(const InputSpec& input, double xi1 = 1.0, double xi2 = 1.0);

/// [OPA+(g), BS, T_phi, Loss(xi1, xi2), BS, OPA-(g), Loss(xi, xi)]. The second
/// amplifier can be dropped; the trailing detector loss is optional.
Pipeline build_su11(const InputSpec& input, double g, double xi1 = 1.0, double xi2 = 1.0,
                    std::optional<double> external_xi = std::nullopt, bool second_opa = true);

/// Single mode: [e^{-i phi a+a}, e^{g(a^2 - a+^2)/2}, Loss(xi)].
Pipeline build_single_mode_chain(const InputSpec& input, double g, double xi = 1.0);

}  // namespace gaussmetro
