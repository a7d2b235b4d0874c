#pragma once
// Early-time decoherence of a superposition of displaced coherent states in
// Ohmic quantum Brownian motion: initial Wigner function, decoherence
// exponent against the Lorentzian-windowed bath, and the derived timescales.

#include <string>

#include "decolab/core.hpp"
#include "decolab/numerics.hpp"

namespace decolab::ohmic {

struct WignerPoint {
    double Q = 0.0;
    double P = 0.0;
    double w_mix = 0.0;  // sum of the two displaced Gaussians (cosh form)
    double w_int = 0.0;  // oscillatory interference part
};

// Prefactor handling for the initial Wigner function. `printed` keeps the
// (1 - e^{-M Omega a^2})^{-1} normalization exactly as stated; `renormalized`
// rescales both parts so the full phase-space integral is 1.
enum class WignerNorm { printed, renormalized };

WignerPoint wigner_initial(const OscillatorSpec& spec, double Q, double P,
                           WignerNorm norm = WignerNorm::printed);

// Brute-force 2-D trapezoid of w_mix + w_int over a box extending
// `sigmas` standard deviations past the displaced peaks; diagnostic oracle.
double wigner_phase_space_integral(const OscillatorSpec& spec, WignerNorm norm,
                                   double sigmas = 8.0, int points_per_axis = 401);

struct WignerSignReport {
    double integral_minus_sign;  // with the (1 - e^{-M Omega a^2})^{-1} prefactor
    double integral_plus_sign;   // with (1 + e^{-M Omega a^2})^{-1} instead
    bool plus_sign_normalizes;   // which choice integrates to 1
};

// Numerical check of which prefactor sign normalizes the cat state.
WignerSignReport wigner_sign_report(const OscillatorSpec& spec);

// D(t) = (8 M gamma a^2 / pi) Int dw/w f_w^2 coth(w/2T) (1 - cos w t),
// Lorentzian window; coth factor -> 1 at T = 0.
double decoherence_exponent_ohmic(const OscillatorSpec& spec, double t,
                                  const num::QuadratureSettings& settings = {},
                                  WarningSink* sink = nullptr);

// High-temperature closed form D(t) = 8 M gamma T a^2 (t - (1 - e^{-Gamma t})/Gamma).
double decoherence_exponent_highT(const OscillatorSpec& spec, double t);

enum class DecoherenceRegime { linear, quadratic, crossover };

struct DecoherenceTimescales {
    double tau_dec;        // 1 / (8 M gamma a^2 T)
    double tau_dec_prime;  // 1 / (2 a sqrt(M gamma Gamma T))
    DecoherenceRegime regime;
};

DecoherenceTimescales decoherence_timescales(const OscillatorSpec& spec);

std::string to_string(DecoherenceRegime r);

// Early-time evolution: the mixture part is unchanged, the interference part
// is multiplied by e^{-D(t)}. Valid for Omega t <= 0.1 unless overridden.
WignerPoint wigner_evolved(const OscillatorSpec& spec, double Q, double P, double t,
                           bool allow_beyond_validity = false,
                           WignerNorm norm = WignerNorm::printed,
                           const num::QuadratureSettings& settings = {},
                           WarningSink* sink = nullptr);

}  // namespace decolab::ohmic
