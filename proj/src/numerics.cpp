#include "decolab/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace decolab::num {

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr int kGK = 8;
constexpr double kXgk[kGK] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[kGK] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double m = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = m * kXgk[i];
        const double fs = f(c + dx) + f(c - dx);
        k15 += kWgk[i] * fs;
        if (i % 2 == 1) g7 += kWg[i / 2] * fs;
    }
    k15 *= m;
    g7 *= m;
    double err = std::abs(k15 - g7);
    // quadpack-style rescaling sharpens the estimate for smooth panels
    err = std::min(err, std::pow(200.0 * err, 1.5));
    if (!std::isfinite(k15))
        throw std::domain_error("integrate: non-finite integrand sample in [" +
                                std::to_string(a) + ", " + std::to_string(b) + "]");
    return {k15, err};
}

// Adaptive bisection within one panel. Consumes budget (one unit per
// Gauss-Kronrod application) and accumulates value/error.
bool adapt_panel(const std::function<double(double)>& f, double a, double b, double tol,
                 int& budget, long& evals, double& value, double& error) {
    struct Seg {
        double a, b, val, err;
    };
    PanelResult first = gk15(f, a, b);
    evals += 15;
    --budget;
    std::vector<Seg> stack{{a, b, first.value, first.error}};
    double v = 0.0, e = 0.0;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const double local_tol = tol * std::max(1e-3, (s.b - s.a) / (b - a));
        if (s.err <= local_tol || (s.b - s.a) < 1e-14 * std::max(1.0, std::abs(s.b))) {
            v += s.val;
            e += s.err;
            continue;
        }
        if (budget <= 0) {
            v += s.val;
            e += s.err;
            for (const Seg& r : stack) {
                v += r.val;
                e += r.err;
            }
            value += v;
            error += e;
            return false;
        }
        const double mid = 0.5 * (s.a + s.b);
        PanelResult l = gk15(f, s.a, mid);
        PanelResult r = gk15(f, mid, s.b);
        evals += 30;
        budget -= 2;
        stack.push_back({s.a, mid, l.value, l.error});
        stack.push_back({mid, s.b, r.value, r.error});
    }
    value += v;
    error += e;
    return true;
}

}  // namespace

double wynn_epsilon(const std::vector<double>& s, double* err_estimate) {
    const std::size_t n = s.size();
    if (n == 0) return 0.0;
    if (n == 1) {
        if (err_estimate) *err_estimate = std::abs(s[0]);
        return s[0];
    }
    std::vector<double> prev2(n, 0.0);  // epsilon_{k-2}
    std::vector<double> prev1 = s;      // epsilon_{k-1}
    double best = s.back();
    double best_err = std::numeric_limits<double>::max();
    double last_even = s.back();
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> cur(n - k, 0.0);
        for (std::size_t i = 0; i + k < n; ++i) {
            const double diff = prev1[i + 1] - prev1[i];
            if (diff == 0.0) {
                cur[i] = std::numeric_limits<double>::max();
            } else {
                cur[i] = prev2[i + 1] + 1.0 / diff;
            }
        }
        if (k % 2 == 0 && !cur.empty()) {
            const double cand = cur.back();
            const double err = std::abs(cand - last_even);
            if (std::isfinite(cand) && err < best_err) {
                best = cand;
                best_err = err;
            }
            last_even = cand;
        }
        prev2.swap(prev1);
        prev1.swap(cur);
    }
    if (err_estimate) *err_estimate = best_err;
    return best;
}

QuadResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSettings& settings) {
    // bootstrap pass against the absolute target, then refine once against
    // the relative tolerance of the value it produced
    QuadResult res;
    int budget = std::max(16, settings.panel_budget);
    res.converged =
        adapt_panel(f, a, b, settings.abs_tol, budget, res.evaluations, res.value, res.error);
    if (res.converged && res.error > settings.abs_tol + settings.rel_tol * std::abs(res.value)) {
        QuadResult redo;
        int budget2 = std::max(16, settings.panel_budget);
        const double tol = settings.abs_tol + settings.rel_tol * std::abs(res.value);
        redo.converged = adapt_panel(f, a, b, tol, budget2, redo.evaluations, redo.value, redo.error);
        redo.evaluations += res.evaluations;
        return redo;
    }
    return res;
}

QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   const QuadratureSettings& settings) {
    if (!(settings.abs_tol > 0.0) || !(settings.rel_tol > 0.0))
        throw std::domain_error("QuadratureSettings: tolerances must be > 0");
    if (settings.panel_budget < 16)
        throw std::domain_error("QuadratureSettings: panel budget >= 16 required");

    QuadResult res;
    int budget = settings.panel_budget;
    const bool osc = settings.period_hint.has_value() && *settings.period_hint > 0.0 &&
                     std::isfinite(*settings.period_hint);

    double sum = 0.0, err = 0.0;
    std::vector<double> partial;
    partial.reserve(256);

    auto tol_now = [&]() { return settings.abs_tol + settings.rel_tol * std::abs(sum); };

    if (osc) {
        // Half-period panels; extrapolate the alternating tail.
        const double h = 0.5 * *settings.period_hint;
        double a = 0.0;
        int small_streak = 0;
        std::size_t panel_count = 0;
        double eps_prev = 0.0;
        bool eps_prev_valid = false;
        while (budget > 0) {
            const double b = a + h;
            double pv = 0.0, pe = 0.0;
            const bool ok = adapt_panel(f, a, b, 0.25 * tol_now(), budget, res.evaluations, pv, pe);
            sum += pv;
            err += pe;
            partial.push_back(sum);
            ++panel_count;
            a = b;
            if (!ok) break;

            if (std::abs(pv) < 0.25 * tol_now() && pe < 0.25 * tol_now()) {
                if (++small_streak >= 3 && panel_count >= 8) {
                    res.value = sum;
                    res.error = err;
                    res.converged = true;
                    return res;
                }
            } else {
                small_streak = 0;
            }

            if (panel_count >= 12 && panel_count % 4 == 0) {
                const std::size_t m = std::min<std::size_t>(partial.size(), 40);
                std::vector<double> tailseq(partial.end() - m, partial.end());
                double eerr = 0.0;
                const double ev = wynn_epsilon(tailseq, &eerr);
                if (eps_prev_valid && std::isfinite(ev) &&
                    std::abs(ev - eps_prev) < 0.5 * tol_now() && eerr < tol_now()) {
                    res.value = ev;
                    res.error = std::abs(ev - eps_prev) + err;
                    res.converged = true;
                    return res;
                }
                eps_prev = ev;
                eps_prev_valid = std::isfinite(ev);
            }
        }
        // budget exhausted: report the accelerated estimate if available
        if (partial.size() >= 12) {
            const std::size_t m = std::min<std::size_t>(partial.size(), 40);
            std::vector<double> tailseq(partial.end() - m, partial.end());
            double eerr = 0.0;
            const double ev = wynn_epsilon(tailseq, &eerr);
            if (std::isfinite(ev)) {
                res.value = ev;
                res.error = eerr + err;
                res.converged = false;
                return res;
            }
        }
        res.value = sum;
        res.error = err;
        res.converged = false;
        return res;
    }

    // Geometrically growing panels: [0,1], [1,2], [2,4], ...
    double a = 0.0, width = 1.0;
    int small_streak = 0;
    std::size_t panel_count = 0;
    // far beyond any scale the physics integrands carry; a non-decaying
    // integrand is reported as non-converged instead of running away
    const double edge_cap = 1e30;
    while (budget > 0 && a < edge_cap) {
        const double b = a + width;
        double pv = 0.0, pe = 0.0;
        const bool ok = adapt_panel(f, a, b, 0.25 * tol_now(), budget, res.evaluations, pv, pe);
        sum += pv;
        err += pe;
        ++panel_count;
        a = b;
        if (panel_count >= 1) width = a;  // doubling edges 1, 2, 4, 8, ...
        if (!ok) break;
        if (std::abs(pv) < 0.5 * tol_now() && pe < 0.5 * tol_now()) {
            // require some coverage before trusting emptiness
            if (++small_streak >= 3 && panel_count >= 20) {
                res.value = sum;
                res.error = err;
                res.converged = true;
                return res;
            }
        } else {
            small_streak = 0;
        }
    }
    res.value = sum;
    res.error = err;
    res.converged = false;
    return res;
}

namespace {

// E1(z) for z > 0 through the Lentz continued fraction, with the e^{-z}
// factored analytically: E1(z) = e^{-z} * cf(z).
double e1_cf_scaled(double z) {
    const double tiny = 1e-300;
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 300; ++i) {
        const double an = -double(i) * double(i);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

double ei_series_negative(double x) {
    // x < 0, |x| small: alternating series in x.
    double sum = 0.0, term = 1.0;
    for (int n = 1; n <= 1000; ++n) {
        term *= x / double(n);
        const double add = term / double(n);
        sum += add;
        if (std::abs(add) < 1e-17 * std::max(std::abs(sum), 1e-300)) break;
    }
    return kEulerGamma + std::log(-x) + sum;
}

}  // namespace

namespace detail {

double ei_series_positive(double x) {
    // C + ln x + sum x^n/(n n!) ; all terms positive, no cancellation.
    double sum = 0.0, term = 1.0;
    for (int n = 1; n <= 1000; ++n) {
        term *= x / double(n);
        const double add = term / double(n);
        sum += add;
        if (add < 1e-17 * sum) break;
    }
    return kEulerGamma + std::log(x) + sum;
}

double ei_asymptotic_positive(double x) {
    // Ei(x) ~ e^x/x (1 + 1!/x + 2!/x^2 + ...), truncated at the smallest term.
    double sum = 1.0, term = 1.0;
    for (int n = 1; n <= 200; ++n) {
        const double next = term * double(n) / x;
        if (next >= term) break;  // smallest term reached
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return std::exp(x) / x * sum;
}

double symmetric_ei_direct(double z) {
    return 0.5 * (std::exp(z) * exp_integral_ei(-z) + std::exp(-z) * exp_integral_ei(z));
}

double symmetric_ei_asymptotic(double z) {
    // odd-factorial series: 1/z^2 + 3!/z^4 + 5!/z^6 + ...
    const double z2 = z * z;
    double term = 1.0 / z2, sum = term;
    for (int j = 1; j <= 100; ++j) {
        const double next = term * double(2 * j) * double(2 * j + 1) / z2;
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

double antisymmetric_ei_direct(double z) {
    return 0.5 * (std::exp(-z) * exp_integral_ei(z) - std::exp(z) * exp_integral_ei(-z));
}

double antisymmetric_ei_asymptotic(double z) {
    // even-factorial series: 1/z + 2!/z^3 + 4!/z^5 + ...
    const double z2 = z * z;
    double term = 1.0 / z, sum = term;
    for (int j = 1; j <= 100; ++j) {
        const double next = term * double(2 * j - 1) * double(2 * j) / z2;
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

}  // namespace detail

double exp_integral_ei(double x) {
    if (x == 0.0 || !std::isfinite(x))
        throw std::domain_error("exp_integral_ei: x must be finite and nonzero");
    if (x > 0.0) {
        if (x <= 30.0) return detail::ei_series_positive(x);
        return detail::ei_asymptotic_positive(x);
    }
    const double z = -x;
    if (z <= 5.0) return ei_series_negative(x);
    return -std::exp(-z) * e1_cf_scaled(z);  // Ei(-z) = -E1(z)
}

double symmetric_ei(double z) {
    if (!(z > 0.0)) throw std::domain_error("symmetric_ei: z > 0 required");
    return z <= 30.0 ? detail::symmetric_ei_direct(z) : detail::symmetric_ei_asymptotic(z);
}

double antisymmetric_ei(double z) {
    if (!(z > 0.0)) throw std::domain_error("antisymmetric_ei: z > 0 required");
    return z <= 30.0 ? detail::antisymmetric_ei_direct(z) : detail::antisymmetric_ei_asymptotic(z);
}

double kappa(int n, double z) {
    if (n != 1 && n != 3) throw std::invalid_argument("kappa: n must be 1 or 3");
    if (z < 0.0 || !std::isfinite(z)) throw std::domain_error("kappa: z >= 0 required");
    if (z == 0.0) return 0.0;  // both vanish as z^2 log z
    if (z < 1e-2) {
        const double l = kEulerGamma + std::log(z);
        const double z2 = z * z;
        if (n == 1) return -0.75 * z2 + z2 * z2 * (l / 24.0 - 25.0 / 288.0);
        return 0.5 * z2 * (1.5 - l) + z2 * z2 * (25.0 / 288.0 - l / 24.0);
    }
    const double g = symmetric_ei(z);
    const double l = kEulerGamma + std::log(z);
    if (n == 1) return g - (1.0 + 0.5 * z * z) * l;
    return l - g;
}

double coth_half(double x) {
    if (!(x > 0.0)) throw std::domain_error("coth_half: x > 0 required");
    if (x < 1e-4) return 2.0 / x + x / 6.0;
    if (x > 40.0) return 1.0;
    return 1.0 / std::tanh(0.5 * x);
}

double ode_solve_final(const std::function<double(double, double)>& rhs, double y_at_t_end,
                       double t_end, double t_query, const OdeSettings& settings) {
    auto sys = [&rhs](double t, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = rhs(t, y[0]);
    };
    const auto out = ode_integrate<1>(sys, std::array<double, 1>{y_at_t_end}, t_end, t_query, settings);
    return out[0];
}

double shoot_scalar(const std::function<double(double)>& residual, double lo, double hi,
                    double tol, int max_iter) {
    if (!(hi > lo)) throw std::invalid_argument("shoot_scalar: need hi > lo");
    double fa = residual(lo);
    double fb = residual(hi);
    if (fa == 0.0) return lo;
    if (fb == 0.0) return hi;
    if (fa * fb > 0.0)
        throw std::runtime_error("shoot_scalar: no sign change on [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
    double a = lo, b = hi;
    for (int it = 0; it < max_iter; ++it) {
        // Illinois secant point, bisection fallback
        double m = b - fb * (b - a) / (fb - fa);
        if (!(m > a) || !(m < b)) m = 0.5 * (a + b);
        const double fm = residual(m);
        if (fm == 0.0 || (b - a) <= tol) return m;
        if (fa * fm < 0.0) {
            b = m;
            fb = fm;
            fa *= 0.5;  // Illinois weighting keeps the bracket moving
        } else {
            a = m;
            fa = fm;
            fb *= 0.5;
        }
        if ((b - a) <= tol) return 0.5 * (a + b);
        // refresh endpoint values to honest residuals when bracket shrank a lot
        if (it % 8 == 7) {
            fa = residual(a);
            fb = residual(b);
            if (fa == 0.0) return a;
            if (fb == 0.0) return b;
        }
    }
    throw std::runtime_error("shoot_scalar: max iterations reached");
}

}  // namespace decolab::num
