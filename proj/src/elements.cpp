#include "gaussmetro/elements.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gaussmetro {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_transmissivity(const Loss& loss, int modes) {
  if (static_cast<int>(loss.transmissivity.size()) != modes)
    throw std::invalid_argument("loss needs one transmissivity per mode");
  for (double xi : loss.transmissivity) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw PhysicsError("transmissivity " + std::to_string(xi) + " outside [0, 1]");
  }
}

CMatrix vacuum_admixture(const Loss& loss) {
  const int modes = static_cast<int>(loss.transmissivity.size());
  CMatrix v = CMatrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    v(2 * k, 2 * k + 1) = v(2 * k + 1, 2 * k) = 0.5 * (1.0 - loss.transmissivity[k]);
  }
  return v;
}

CMatrix phase_matrix(const PhaseShifter& phase, double phi) {
  const int modes = static_cast<int>(phase.weights.size());
  CMatrix t = CMatrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    t(2 * k, 2 * k) = std::exp(kI * phase.weights[k] * phi);
    t(2 * k + 1, 2 * k + 1) = std::exp(-kI * phase.weights[k] * phi);
  }
  return t;
}

}  // namespace

PhaseShifter symmetric_phase(double phi) { return {phi, {0.5, -0.5}}; }
PhaseShifter number_phase(double phi) { return {phi, {-1.0}}; }

double gain_from_strength(double g) {
  const double s = std::sinh(g);
  return 2.0 * s * s;
}

double strength_from_gain(double gain) {
  if (gain < 0.0) throw PhysicsError("amplifier gain must be non-negative");
  return std::asinh(std::sqrt(0.5 * gain));
}

CMatrix transfer_matrix(const Element& element, int modes) {
  return std::visit(
      overloaded{
          [&](const BeamSplitter&) -> CMatrix {
            if (modes != 2) throw std::invalid_argument("beam splitter needs two modes");
            const double s = 1.0 / std::sqrt(2.0);
            CMatrix t(4, 4);
            t << s, 0, s, 0,  //
                0, s, 0, s,   //
                s, 0, -s, 0,  //
                0, s, 0, -s;
            return t;
          },
          [&](const PhaseShifter& p) -> CMatrix {
            if (static_cast<int>(p.weights.size()) != modes)
              throw std::invalid_argument("phase shifter needs one weight per mode");
            return phase_matrix(p, p.phi);
          },
          [&](const Opa& opa) -> CMatrix {
            if (opa.sign != 1 && opa.sign != -1) throw std::invalid_argument("amplifier sign must be +1 or -1");
            if (!(opa.g >= 0.0)) throw PhysicsError("amplifier strength must be non-negative");
            const double mu = std::cosh(opa.g);
            const double nu = opa.sign * std::sinh(opa.g);
            if (modes == 1) {
              CMatrix t(2, 2);
              t << mu, nu, nu, mu;
              return t;
            }
            if (modes != 2) throw std::invalid_argument("amplifier acts on one or two modes");
            CMatrix t(4, 4);
            t << mu, 0, 0, nu,  //
                0, mu, nu, 0,   //
                0, nu, mu, 0,   //
                nu, 0, 0, mu;
            return t;
          },
          [&](const Loss& loss) -> CMatrix {
            check_transmissivity(loss, modes);
            CMatrix r = CMatrix::Zero(2 * modes, 2 * modes);
            for (int k = 0; k < modes; ++k) {
              r(2 * k, 2 * k) = r(2 * k + 1, 2 * k + 1) = std::sqrt(loss.transmissivity[k]);
            }
            return r;
          },
      },
      element);
}

CMatrix phase_generator(const PhaseShifter& phase) {
  const int modes = static_cast<int>(phase.weights.size());
  CMatrix d = CMatrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    d(2 * k, 2 * k) = kI * phase.weights[k];
    d(2 * k + 1, 2 * k + 1) = -kI * phase.weights[k];
  }
  return d;
}

GaussianState apply(const Element& element, const GaussianState& state) {
  const int modes = state.mode_count();
  const CMatrix t = transfer_matrix(element, modes);
  CMatrix sigma = t * state.sigma() * t.transpose();
  if (const auto* loss = std::get_if<Loss>(&element)) sigma += vacuum_admixture(*loss);
  return GaussianState(t * state.mean(), sigma);
}

Pipeline::Pipeline(int modes, InputSpec input, std::vector<Element> elements, std::size_t carrier)
    : modes_(modes), input_(input), elements_(std::move(elements)), carrier_(carrier) {
  if (modes_ != 1 && modes_ != 2) throw std::invalid_argument("pipelines have one or two modes");
  if (carrier_ >= elements_.size() || !std::holds_alternative<PhaseShifter>(elements_[carrier_]))
    throw std::invalid_argument("pipeline carrier must index a phase shifter");
  for (const auto& e : elements_) {
    // Validates shapes and parameters once at construction.
    (void)transfer_matrix(e, modes_);
  }
}

Pipeline Pipeline::with_input(const InputSpec& input) const {
  return Pipeline(modes_, input, elements_, carrier_);
}

Propagation propagate_with_derivative(const Pipeline& pipeline, double phi) {
  const int modes = pipeline.mode_count();
  GaussianState state = pipeline.input_state();
  CVector dv = CVector::Zero(2 * modes);
  CMatrix dsigma = CMatrix::Zero(2 * modes, 2 * modes);

  const auto& elements = pipeline.elements();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i == pipeline.carrier()) {
      const auto& carrier = std::get<PhaseShifter>(elements[i]);
      const CMatrix t = phase_matrix(carrier, phi);
      const CMatrix d = phase_generator(carrier);
      const CVector v = t * state.mean();
      const CMatrix sigma = t * state.sigma() * t.transpose();
      dv = d * v + t * dv;
      dsigma = d * sigma + sigma * d.transpose() + t * dsigma * t.transpose();
      state = GaussianState(v, sigma);
      continue;
    }
    const CMatrix t = transfer_matrix(elements[i], modes);
    dv = t * dv;
    dsigma = t * dsigma * t.transpose();
    state = gaussmetro::apply(elements[i], state);
  }
  return {std::move(state), {std::move(dv), std::move(dsigma)}};
}

GaussianState state_before_carrier(const Pipeline& pipeline) {
  GaussianState state = pipeline.input_state();
  for (std::size_t i = 0; i < pipeline.carrier(); ++i) state = gaussmetro::apply(pipeline.elements()[i], state);
  return state;
}

Pipeline build_mzi(const InputSpec& input, double xi1, double xi2) {
  std::vector<Element> e{BeamSplitter{}, symmetric_phase(), Loss{{xi1, xi2}}, BeamSplitter{}};
  return Pipeline(2, input, std::move(e), 1);
}

Pipeline build_su11(const InputSpec& input, double g, double xi1, double xi2, std::optional<double> external_xi,
                    bool second_opa) {
  std::vector<Element> e{Opa{g, +1}, BeamSplitter{}, symmetric_phase(), Loss{{xi1, xi2}}, BeamSplitter{}};
  if (second_opa) e.emplace_back(Opa{g, -1});
  if (external_xi) e.emplace_back(Loss{{*external_xi, *external_xi}});
  return Pipeline(2, input, std::move(e), 2);
}

Pipeline build_single_mode_chain(const InputSpec& input, double g, double xi) {
  std::vector<Element> e{number_phase(), Opa{g, -1}, Loss{{xi}}};
  return Pipeline(1, input, std::move(e), 0);
}

}  // namespace gaussmetro
