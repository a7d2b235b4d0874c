#pragma once
// Quadrature over [0, inf) with oscillatory decaying integrands, exponential
// integrals and the kappa functions, a safe coth, adaptive ODE integration
// from a final condition, and bracketed scalar shooting.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "decolab/core.hpp"

namespace decolab::num {

struct QuadratureSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int panel_budget = 40000;  // Gauss-Kronrod applications, >= 16
    std::optional<double> period_hint;  // period of the integrand's oscillation
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    long evaluations = 0;
};

// Integral of f over [0, inf). With a period hint the panels are aligned to
// half-periods and the tail is extrapolated from the partial-sum sequence
// (Wynn epsilon); without one, panel widths grow geometrically. Integrable
// endpoint behaviour no worse than logarithmic is fine: the Kronrod nodes
// stay strictly inside each panel.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   const QuadratureSettings& settings = {});

// Adaptive Gauss-Kronrod on [a, b]; building block of the above, exposed for
// the oracles in the test suite.
QuadResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSettings& settings = {});

// Wynn epsilon extrapolation of a partial-sum sequence; returns the best
// accelerated limit and a crude stability estimate.
double wynn_epsilon(const std::vector<double>& partial_sums, double* err_estimate = nullptr);

// Exponential integral Ei(x) (principal value for x > 0). Power series on the
// positive axis up to 30 and asymptotic beyond; on the negative axis the
// alternating series loses precision past |x| ~ 5, so a continued fraction
// takes over there.
double exp_integral_ei(double x);

// g(z) = [e^z Ei(-z) + e^{-z} Ei(z)] / 2 for z > 0; asymptotic even-term
// series beyond z = 30 so the exponentials never meet overflow.
double symmetric_ei(double z);

// h(z) = [e^{-z} Ei(z) - e^z Ei(-z)] / 2 for z > 0, same branch layout.
double antisymmetric_ei(double z);

// kappa_1(z) = g(z) - (1 + z^2/2)(C + ln z)
// kappa_3(z) = C + ln z - g(z)
// both continued to 0 at z = 0.
double kappa(int n, double z);

namespace detail {
// individual representations, exposed so branch-consistency tests can
// evaluate both at the same argument
double ei_series_positive(double x);
double ei_asymptotic_positive(double x);
double symmetric_ei_direct(double z);
double symmetric_ei_asymptotic(double z);
double antisymmetric_ei_direct(double z);
double antisymmetric_ei_asymptotic(double z);
}  // namespace detail

// coth(x/2) with series guard below 1e-4 and saturation to 1 above 40.
double coth_half(double x);

struct OdeSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 200000;
    double initial_step = 0.0;  // 0: pick automatically
};

namespace detail {

// Dormand-Prince 5(4) step on a fixed-size state.
template <std::size_t N, typename Rhs>
void dp45_step(const Rhs& rhs, double t, const std::array<double, N>& y, double h,
               std::array<double, N>& y5, std::array<double, N>& err) {
    using V = std::array<double, N>;
    auto axpy = [](const V& base, double c, const V& k) {
        V r = base;
        for (std::size_t i = 0; i < N; ++i) r[i] += c * k[i];
        return r;
    };
    V k1, k2, k3, k4, k5, k6, k7, tmp;
    rhs(t, y, k1);
    tmp = axpy(y, h * (1.0 / 5.0), k1);
    rhs(t + h / 5.0, tmp, k2);
    tmp = y;
    for (std::size_t i = 0; i < N; ++i) tmp[i] += h * (3.0 / 40.0 * k1[i] + 9.0 / 40.0 * k2[i]);
    rhs(t + 3.0 * h / 10.0, tmp, k3);
    tmp = y;
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] += h * (44.0 / 45.0 * k1[i] - 56.0 / 15.0 * k2[i] + 32.0 / 9.0 * k3[i]);
    rhs(t + 4.0 * h / 5.0, tmp, k4);
    tmp = y;
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] += h * (19372.0 / 6561.0 * k1[i] - 25360.0 / 2187.0 * k2[i] +
                       64448.0 / 6561.0 * k3[i] - 212.0 / 729.0 * k4[i]);
    rhs(t + 8.0 * h / 9.0, tmp, k5);
    tmp = y;
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] += h * (9017.0 / 3168.0 * k1[i] - 355.0 / 33.0 * k2[i] + 46732.0 / 5247.0 * k3[i] +
                       49.0 / 176.0 * k4[i] - 5103.0 / 18656.0 * k5[i]);
    rhs(t + h, tmp, k6);
    y5 = y;
    for (std::size_t i = 0; i < N; ++i)
        y5[i] += h * (35.0 / 384.0 * k1[i] + 500.0 / 1113.0 * k3[i] + 125.0 / 192.0 * k4[i] -
                      2187.0 / 6784.0 * k5[i] + 11.0 / 84.0 * k6[i]);
    rhs(t + h, y5, k7);
    // embedded 4th-order difference
    for (std::size_t i = 0; i < N; ++i) {
        const double y4 = y[i] + h * (5179.0 / 57600.0 * k1[i] + 7571.0 / 16695.0 * k3[i] +
                                      393.0 / 640.0 * k4[i] - 92097.0 / 339200.0 * k5[i] +
                                      187.0 / 2100.0 * k6[i] + 1.0 / 40.0 * k7[i]);
        err[i] = y5[i] - y4;
    }
}

}  // namespace detail

// Integrates y' = rhs(t, y) from (t_start, y_start) to t_end with adaptive
// Dormand-Prince 5(4); t_end may lie before t_start (backward integration).
template <std::size_t N, typename Rhs>
std::array<double, N> ode_integrate(const Rhs& rhs, std::array<double, N> y, double t_start,
                                    double t_end, const OdeSettings& settings = {}) {
    if (t_start == t_end) return y;
    const double dir = (t_end > t_start) ? 1.0 : -1.0;
    const double span = std::abs(t_end - t_start);
    double h = settings.initial_step > 0.0 ? settings.initial_step * dir : dir * span / 100.0;
    double t = t_start;
    std::array<double, N> y5, err;
    long steps = 0;
    while (dir * (t_end - t) > 0.0) {
        if (++steps > settings.max_steps)
            throw std::runtime_error("ode_integrate: step budget exhausted");
        if (dir * (t + h - t_end) > 0.0) h = t_end - t;
        detail::dp45_step<N>(rhs, t, y, h, y5, err);
        double scale = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double tol =
                settings.abs_tol + settings.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            scale = std::max(scale, std::abs(err[i]) / tol);
        }
        if (!std::isfinite(scale))
            throw std::runtime_error("ode_integrate: non-finite right-hand side");
        if (scale <= 1.0) {
            t += h;
            y = y5;
        }
        const double grow = (scale > 0.0) ? 0.9 * std::pow(scale, -0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, grow));
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
            throw std::runtime_error("ode_integrate: step size underflow");
    }
    return y;
}

// Scalar boundary-value helper: y(t_query) obtained by integrating backward
// (or forward) from the single condition y(t_end) = y_at_t_end.
double ode_solve_final(const std::function<double(double, double)>& rhs, double y_at_t_end,
                       double t_end, double t_query, const OdeSettings& settings = {});

// Root of a continuous residual on a sign-changing bracket, by a
// bisection/secant (Illinois) hybrid.
double shoot_scalar(const std::function<double(double)>& residual, double lo, double hi,
                    double tol, int max_iter = 200);

}  // namespace decolab::num
