#include "decolab/ohmic.hpp"

#include <cmath>

namespace decolab::ohmic {

namespace {

// Both Wigner terms share the Gaussian e^{-P^2/(M Omega) - M Omega Q^2}.
struct WignerParts {
    double common;  // shared Gaussian x prefactor
    double mix;     // cosh(2 M Omega a Q) e^{-M Omega a^2}
    double intf;    // cos(2 a P)
};

WignerParts wigner_parts(const OscillatorSpec& s, double Q, double P, double prefactor) {
    const double mo = s.M * s.Omega;
    const double gauss = std::exp(-(P * P / s.M + mo * s.Omega * Q * Q) / s.Omega);
    WignerParts w;
    w.common = prefactor / kPi * gauss;
    // cosh(x) e^{-M Omega a^2} written as a sum of shifted exponentials to
    // avoid overflow of cosh at large displacement
    const double x = 2.0 * mo * s.a * Q;
    const double off = mo * s.a * s.a;
    w.mix = 0.5 * (std::exp(x - off) + std::exp(-x - off));
    w.intf = std::cos(2.0 * s.a * P);
    return w;
}

double printed_prefactor(const OscillatorSpec& s) {
    return 1.0 / (1.0 - std::exp(-s.M * s.Omega * s.a * s.a));
}

// Exact phase-space integral of w_mix + w_int for a given prefactor N:
// both terms are Gaussian; the closed result is N (1 + e^{-M Omega a^2}).
double exact_integral(const OscillatorSpec& s, double prefactor) {
    return prefactor * (1.0 + std::exp(-s.M * s.Omega * s.a * s.a));
}

double prefactor_for(const OscillatorSpec& s, WignerNorm norm) {
    const double printed = printed_prefactor(s);
    if (norm == WignerNorm::printed) return printed;
    return printed / exact_integral(s, printed);  // rescale so the integral is 1
}

}  // namespace

WignerPoint wigner_initial(const OscillatorSpec& spec, double Q, double P, WignerNorm norm) {
    const WignerParts w = wigner_parts(spec, Q, P, prefactor_for(spec, norm));
    return {Q, P, w.common * w.mix, w.common * w.intf};
}

double wigner_phase_space_integral(const OscillatorSpec& spec, WignerNorm norm, double sigmas,
                                   int points_per_axis) {
    const double sq = 1.0 / std::sqrt(2.0 * spec.M * spec.Omega);
    const double sp = std::sqrt(spec.M * spec.Omega / 2.0);
    const double Qmax = spec.a + sigmas * sq;
    const double Pmax = sigmas * sp;
    const int n = points_per_axis;
    const double hq = 2.0 * Qmax / (n - 1);
    const double hp = 2.0 * Pmax / (n - 1);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double Q = -Qmax + i * hq;
        const double wq = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double P = -Pmax + j * hp;
            const double wp = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            const WignerPoint pt = wigner_initial(spec, Q, P, norm);
            row += wp * (pt.w_mix + pt.w_int);
        }
        total += wq * row;
    }
    return total * hq * hp;
}

WignerSignReport wigner_sign_report(const OscillatorSpec& spec) {
    WignerSignReport r{};
    r.integral_minus_sign = wigner_phase_space_integral(spec, WignerNorm::printed);
    const double x = std::exp(-spec.M * spec.Omega * spec.a * spec.a);
    // same evaluation with the (1 + e^{-M Omega a^2})^{-1} prefactor
    r.integral_plus_sign = r.integral_minus_sign * (1.0 - x) / (1.0 + x);
    r.plus_sign_normalizes = std::abs(r.integral_plus_sign - 1.0) < std::abs(r.integral_minus_sign - 1.0);
    return r;
}

double decoherence_exponent_ohmic(const OscillatorSpec& spec, double t,
                                  const num::QuadratureSettings& settings, WarningSink* sink) {
    if (t < 0.0) throw std::domain_error("decoherence_exponent_ohmic: t >= 0 required");
    if (t == 0.0) return 0.0;
    const double prefactor = 8.0 * spec.M * spec.gamma * spec.a * spec.a / kPi;
    const bool zero_T = (spec.T == 0.0);
    const double beta = zero_T ? 0.0 : 1.0 / spec.T;

    auto integrand = [&](double w) {
        if (w <= 0.0) return 0.0;
        const double thermal = zero_T ? 1.0 : num::coth_half(beta * w);
        // (1 - cos w t)/w with the half-angle form to keep small-w accuracy
        const double s = std::sin(0.5 * w * t);
        return spec.window_f2(w) * thermal * 2.0 * s * s / w;
    };

    num::QuadratureSettings qs = settings;
    if (!qs.period_hint) qs.period_hint = 2.0 * kPi / t;
    const num::QuadResult res = num::integrate_semi_infinite(integrand, qs);
    if (!res.converged)
        warn(sink, "decoherence_exponent_ohmic: quadrature tolerance not met at t = " +
                       std::to_string(t) + " (err ~ " + std::to_string(res.error) + ")");
    return prefactor * res.value;
}

double decoherence_exponent_highT(const OscillatorSpec& spec, double t) {
    if (t < 0.0) throw std::domain_error("decoherence_exponent_highT: t >= 0 required");
    // -expm1(-x) = 1 - e^{-x} without cancellation at small Gamma t
    return 8.0 * spec.M * spec.gamma * spec.T * spec.a * spec.a *
           (t + std::expm1(-spec.Gamma * t) / spec.Gamma);
}

DecoherenceTimescales decoherence_timescales(const OscillatorSpec& spec) {
    if (!(spec.T > 0.0)) throw std::domain_error("decoherence_timescales: T > 0 required");
    DecoherenceTimescales ts{};
    ts.tau_dec = 1.0 / (8.0 * spec.M * spec.gamma * spec.a * spec.a * spec.T);
    ts.tau_dec_prime = 1.0 / (2.0 * spec.a * std::sqrt(spec.M * spec.gamma * spec.Gamma * spec.T));
    const double linear_mark = spec.Gamma * ts.tau_dec;
    const double quadratic_mark = spec.Gamma * ts.tau_dec_prime;
    if (linear_mark >= 10.0)
        ts.regime = DecoherenceRegime::linear;
    else if (quadratic_mark <= 0.1)
        ts.regime = DecoherenceRegime::quadratic;
    else
        ts.regime = DecoherenceRegime::crossover;
    return ts;
}

std::string to_string(DecoherenceRegime r) {
    switch (r) {
        case DecoherenceRegime::linear: return "linear";
        case DecoherenceRegime::quadratic: return "quadratic";
        case DecoherenceRegime::crossover: return "crossover";
    }
    return "?";
}

WignerPoint wigner_evolved(const OscillatorSpec& spec, double Q, double P, double t,
                           bool allow_beyond_validity, WignerNorm norm,
                           const num::QuadratureSettings& settings, WarningSink* sink) {
    if (t < 0.0) throw std::domain_error("wigner_evolved: t >= 0 required");
    if (spec.Omega * t > 0.1 && !allow_beyond_validity)
        throw std::domain_error("wigner_evolved: Omega t = " + std::to_string(spec.Omega * t) +
                                " outside the early-time window (<= 0.1); set the override to proceed");
    WignerPoint pt = wigner_initial(spec, Q, P, norm);
    if (t == 0.0) return pt;
    const double D = decoherence_exponent_ohmic(spec, t, settings, sink);
    pt.w_int *= std::exp(-D);
    return pt;
}

}  // namespace decolab::ohmic
