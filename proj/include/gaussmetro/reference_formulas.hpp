#pragma once

// Closed-form sensitivities, written independently of the matrix engine so the
// two can be checked against each other. Photon numbers: n_c = alpha^2,
// n_s = sinh^2 r, G = 2 sinh^2 g.

namespace gaussmetro::reference {

enum class AsymptoteKind { Mzi, Su11 };

double squeezing_from_photons(double n_s);

/// Total photons n = n_c + n_s inside the MZI.
double mzi_photon_number(double n_c, double n_s);
/// Total photons n = (G + 1)(n_c + n_s) + G inside the SU(1,1) device.
double su11_photon_number(double n_c, double n_s, double gain);

/// Ideal MZI, |alpha>|0,r>: alpha^2 e^{2r} + sinh^2 r.
double f_mzi_ideal(double n_c, double n_s);

/// Lossy MZI with n_s << n_c: Delta^2 phi = [xi n / (1 - xi + xi e^{-2r})]^{-1}.
double qcrb_mzi_lossy_practical(double n, double r, double xi);

/// Leading large-n term of the n_s-optimized lossy MZI: (1 - xi)/(xi n).
/// Requires 0 < xi < 1.
double qcrb_mzi_lossy_optimal(double n, double xi);

/// p_2 detection on the lossy MZI, zeta = (sqrt xi1 + sqrt xi2)^2 / 4.
double sens_p2_lossy(double n, double r, double xi1, double xi2);
double zeta(double xi1, double xi2);

/// Ideal SU(1,1), coherent input: G(G + 2)(2 n_c + 1) + n_c.
double f_su11_coherent(double n_c, double gain);

/// Ideal SU(1,1), |alpha>|0,r>:
///   G(G + 2)[n_c + 2 n_s^2 + 2 n_s + 1] + (G + 1)^2 (n_c e^{2r} + n_s).
double f_su11_cs(double n_c, double n_s, double gain);

/// Large-n_c limits of Delta^2 phi with lossy arms: (1 - xi)/(xi n_c) for the
/// MZI and (1 - xi1)/(xi1 n_c G) for SU(1,1).
double asymptote_lossy(double n_c, double gain, double xi1, AsymptoteKind kind);

/// SU(1,1) with equal detector transmissivity xi after the second amplifier.
double f_su11_external_loss(double n_c, double n_s, double gain, double xi);

/// Single-mode chain, G -> infinity:
///   4 cos^2 phi [alpha^2 X + Y^2 - Y(alpha^2 + Y) cos 2phi] / (X - Y cos 2phi)^2.
double f_single_mode_limit(double alpha, double r, double phi);

}  // namespace gaussmetro::reference
