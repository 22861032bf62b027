#include "gaussmetro/reference_formulas.hpp"

#include <cmath>
#include <stdexcept>

#include "gaussmetro/types.hpp"

namespace gaussmetro::reference {

namespace {

void require_transmissivity(double xi) {
  if (!(xi > 0.0 && xi <= 1.0)) throw PhysicsError("transmissivity must lie in (0, 1]");
}

void require_photons(double n) {
  if (!(n >= 0.0)) throw PhysicsError("photon numbers must be non-negative");
}

}  // namespace

double squeezing_from_photons(double n_s) {
  require_photons(n_s);
  return std::asinh(std::sqrt(n_s));
}

double mzi_photon_number(double n_c, double n_s) { return n_c + n_s; }

double su11_photon_number(double n_c, double n_s, double gain) { return (gain + 1.0) * (n_c + n_s) + gain; }

double f_mzi_ideal(double n_c, double n_s) {
  require_photons(n_c);
  const double r = squeezing_from_photons(n_s);
  return n_c * std::exp(2.0 * r) + n_s;
}

double qcrb_mzi_lossy_practical(double n, double r, double xi) {
  require_transmissivity(xi);
  return (1.0 - xi + xi * std::exp(-2.0 * r)) / (xi * n);
}

double qcrb_mzi_lossy_optimal(double n, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw PhysicsError("the large-n expansion needs 0 < xi < 1");
  return (1.0 - xi) / (xi * n);
}

double zeta(double xi1, double xi2) {
  require_transmissivity(xi1);
  require_transmissivity(xi2);
  const double s = std::sqrt(xi1) + std::sqrt(xi2);
  return 0.25 * s * s;
}

double sens_p2_lossy(double n, double r, double xi1, double xi2) {
  const double z = zeta(xi1, xi2);
  return (1.0 - z + z * std::exp(-2.0 * r)) / (z * n);
}

double f_su11_coherent(double n_c, double gain) {
  require_photons(n_c);
  require_photons(gain);
  return gain * (gain + 2.0) * (2.0 * n_c + 1.0) + n_c;
}

double f_su11_cs(double n_c, double n_s, double gain) {
  require_photons(n_c);
  require_photons(gain);
  const double r = squeezing_from_photons(n_s);
  const double g2 = gain * (gain + 2.0);
  const double amp = (gain + 1.0) * (gain + 1.0);
  return g2 * (n_c + 2.0 * n_s * n_s + 2.0 * n_s + 1.0) + amp * (n_c * std::exp(2.0 * r) + n_s);
}

double asymptote_lossy(double n_c, double gain, double xi1, AsymptoteKind kind) {
  require_transmissivity(xi1);
  if (!(n_c > 0.0)) throw PhysicsError("asymptote needs a coherent amplitude");
  switch (kind) {
    case AsymptoteKind::Mzi:
      return (1.0 - xi1) / (xi1 * n_c);
    case AsymptoteKind::Su11:
      if (!(gain > 0.0)) throw PhysicsError("SU(1,1) asymptote needs positive gain");
      return (1.0 - xi1) / (xi1 * n_c * gain);
  }
  throw std::invalid_argument("unknown asymptote kind");
}

double f_su11_external_loss(double n_c, double n_s, double gain, double xi) {
  require_photons(n_c);
  require_photons(gain);
  require_transmissivity(xi);
  const double r = squeezing_from_photons(n_s);
  const double g2 = gain * (gain + 2.0);
  const double amp = (gain + 1.0) * (gain + 1.0);
  const double sq = (2.0 * n_s + 1.0) * (2.0 * n_s + 1.0);
  const double bracket = 2.0 * n_c + xi + sq * xi / (2.0 * n_s * xi * (1.0 - xi) + 1.0);
  const double seeded = n_c / (1.0 - xi + xi * std::exp(-2.0 * r)) + n_s;
  return xi * (0.5 * g2 * bracket + amp * seeded);
}

double f_single_mode_limit(double alpha, double r, double phi) {
  const double x = std::cosh(2.0 * r);
  const double y = std::sinh(2.0 * r);
  const double c = std::cos(phi);
  const double c2 = std::cos(2.0 * phi);
  const double a2 = alpha * alpha;
  const double den = x - y * c2;
  return 4.0 * c * c * (a2 * x + y * y - y * (a2 + y) * c2) / (den * den);
}

}  // namespace gaussmetro::reference
