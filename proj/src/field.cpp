#include "decolab/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace decolab::field {

namespace {

// 1 - sinc(x) without cancellation near 0
double one_minus_sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-2) {
        const double x2 = x * x;
        return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return 1.0 - std::sin(x) / x;
}

// (sin x / x - cos x) / x^2 -> 1/3 at 0
double j1_over_x(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-2) {
        const double x2 = x * x;
        return (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0)) / 3.0;
    }
    return (std::sin(x) / x - std::cos(x)) / (x * x);
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// radial measure: Int d^n k/(2 pi)^n F(|k|) = coeff * Int_0^inf k^{n-1} F dk
double radial_coeff(int n) { return n == 1 ? 1.0 / kPi : 1.0 / (2.0 * kPi * kPi); }

double thermal_coth(double beta, double k) {
    if (!std::isfinite(beta)) return 1.0;
    return num::coth_half(beta * k);
}

// sinh(bw) / (cosh(bw) - cos(bL)) and sin(bL)/(cosh(bw) - cos(bL)), evaluated
// with the e^{bw} scaled out so large bw cannot overflow.
struct ThermalRatios {
    double symmetric;
    double mixed;
};

ThermalRatios damped_thermal_ratios(double beta, double w, double lambda) {
    if (!std::isfinite(beta)) return {1.0, 0.0};
    const double bw = beta * w;
    const double bl = beta * lambda;
    if (bw < 30.0) {
        const double denom = std::cosh(bw) - std::cos(bl);
        if (denom <= 1e-12)
            throw std::domain_error("propagators_damped: degenerate denominator cosh - cos <= 1e-12");
        return {std::sinh(bw) / denom, std::sin(bl) / denom};
    }
    const double e1 = std::exp(-bw);
    const double e2 = e1 * e1;
    const double denom = 1.0 + e2 - 2.0 * e1 * std::cos(bl);
    return {(1.0 - e2) / denom, 2.0 * e1 * std::sin(bl) / denom};
}

}  // namespace

FieldSpec make_field_spec(int n, double g, double beta, CouplingProfile window) {
    if (n != 1 && n != 3) throw std::domain_error("FieldSpec: n must be 1 or 3");
    if (!(g > 0.0)) throw std::domain_error("FieldSpec: g > 0 required");
    if (!(beta > 0.0)) throw std::domain_error("FieldSpec: beta > 0 (or infinity) required");
    if (window.role() != CouplingProfile::Role::spectral)
        throw std::domain_error("FieldSpec: spectral window required");
    return FieldSpec{n, g, beta, std::move(window)};
}

FieldSpec make_field_spec_T(int n, double g, double Gamma, double T) {
    const double beta = T > 0.0 ? 1.0 / T : std::numeric_limits<double>::infinity();
    return make_field_spec(n, g, beta, CouplingProfile::lorentzian_k(Gamma));
}

PropagatorPair propagators_free(double k, double dt, double beta) {
    if (!(k > 0.0)) throw std::domain_error("propagators_free: k > 0 required");
    PropagatorPair p;
    p.G_r = std::sin(k * dt) / (2.0 * k);
    p.G_h = std::cos(k * dt) * thermal_coth(beta, k) / (2.0 * k);
    return p;
}

PropagatorPair propagators_damped(const DampedPropagatorSpec& pspec, double k, double dt) {
    if (!(k > 0.0)) throw std::domain_error("propagators_damped: k > 0 required");
    const double w = pspec.omega(k);
    const double lam = pspec.lambda(k);
    if (!(w > 0.0)) throw std::domain_error("propagators_damped: omega(k) > 0 required");
    if (lam < 0.0) throw std::domain_error("propagators_damped: lambda(k) >= 0 required");
    const double damp = std::exp(-lam * std::abs(dt));
    const ThermalRatios ratios = damped_thermal_ratios(pspec.beta, w, lam);
    PropagatorPair p;
    p.G_r = damp * std::sin(w * dt) / (2.0 * w);
    p.G_h = damp *
            (ratios.symmetric * std::cos(w * dt) + ratios.mixed * std::sin(w * std::abs(dt))) /
            (2.0 * w);
    return p;
}

namespace {

DipoleKernels dipole_common(const FieldSpec& fspec, double t,
                            const std::function<PropagatorPair(double)>& props,
                            const num::QuadratureSettings& settings, WarningSink* sink) {
    const double coeff = fspec.g * fspec.g / (2.0 * fspec.n) * radial_coeff(fspec.n);
    const int kpow = fspec.n == 1 ? 2 : 4;  // k^{n-1} * k^2

    num::QuadratureSettings qs = settings;
    if (t != 0.0 && !qs.period_hint) qs.period_hint = 2.0 * kPi / std::abs(t);

    auto env = [&](double k) {
        double kp = 1.0;
        for (int i = 0; i < kpow; ++i) kp *= k;
        return kp * fspec.window.f2(k);
    };
    DipoleKernels out;
    const num::QuadResult r_eta =
        num::integrate_semi_infinite([&](double k) { return k <= 0.0 ? 0.0 : env(k) * props(k).G_r; }, qs);
    const num::QuadResult r_nu =
        num::integrate_semi_infinite([&](double k) { return k <= 0.0 ? 0.0 : env(k) * props(k).G_h; }, qs);
    out.eta = coeff * r_eta.value;
    out.nu = coeff * r_nu.value;
    out.eta_converged = r_eta.converged;
    out.nu_converged = r_nu.converged;
    if (!r_eta.converged)
        warn(sink, "dipole_kernels: eta quadrature tolerance not met at t = " + std::to_string(t));
    if (!r_nu.converged)
        warn(sink, "dipole_kernels: nu quadrature tolerance not met at t = " + std::to_string(t));
    return out;
}

}  // namespace

DipoleKernels dipole_kernels(const FieldSpec& fspec, double t,
                             const num::QuadratureSettings& settings, WarningSink* sink) {
    return dipole_common(
        fspec, t, [&](double k) { return propagators_free(k, t, fspec.beta); }, settings, sink);
}

DipoleKernels dipole_kernels(const FieldSpec& fspec, const DampedPropagatorSpec& pspec, double t,
                             const num::QuadratureSettings& settings, WarningSink* sink) {
    return dipole_common(
        fspec, t, [&](double k) { return propagators_damped(pspec, k, t); }, settings, sink);
}

OverdampedCoefficients overdamped_Vn_Vd(const FieldSpec& fspec, const DampedPropagatorSpec& pspec,
                                        double r, const num::QuadratureSettings& settings,
                                        WarningSink* sink) {
    if (r < 0.0) throw std::domain_error("overdamped_Vn_Vd: r >= 0 required");
    const double coeff = radial_coeff(fspec.n);
    const double g2 = fspec.g * fspec.g;
    const int n = fspec.n;

    auto vn_integrand = [&](double k) {
        if (k <= 0.0) return 0.0;
        const double w = pspec.omega(k);
        const double lam = pspec.lambda(k);
        const ThermalRatios ratios = damped_thermal_ratios(pspec.beta, w, lam);
        const double angular = (n == 1) ? (1.0 - std::cos(k * r)) : one_minus_sinc(k * r);
        const double kfac = (n == 1) ? 1.0 : k * k;
        return kfac * fspec.window.f2(k) / (lam * w) * ratios.symmetric * angular;
    };
    // angular average of k.r e^{i k.r} / r^2 reduces to k^2 sinc(kr) for n=1
    // and k^2 j1(kr)/(kr) for n=3; both smooth through r = 0.
    auto vd_integrand = [&](double k) {
        if (k <= 0.0) return 0.0;
        const double lam = pspec.lambda(k);
        const double lam3 = lam * lam * lam;
        const double angular = (n == 1) ? sinc(k * r) : j1_over_x(k * r);
        const double kfac = (n == 1) ? 1.0 : k * k;
        return kfac * fspec.window.f2(k) / lam3 * k * k * angular;
    };

    num::QuadratureSettings qs = settings;
    if (r > 0.0 && !qs.period_hint) qs.period_hint = 2.0 * kPi / r;
    const num::QuadResult rn = num::integrate_semi_infinite(vn_integrand, qs);
    const num::QuadResult rd = num::integrate_semi_infinite(vd_integrand, qs);
    OverdampedCoefficients out;
    out.V_n = 0.5 * g2 * coeff * rn.value;
    out.V_d = 0.5 * g2 * coeff * rd.value;
    out.converged = rn.converged && rd.converged;
    if (!out.converged)
        warn(sink, "overdamped_Vn_Vd: quadrature tolerance not met at r = " + std::to_string(r));
    return out;
}

double decoherence_DL_numeric(const FieldSpec& fspec, double t, double L,
                              const num::QuadratureSettings& settings, WarningSink* sink) {
    if (t < 0.0 || L < 0.0) throw std::domain_error("decoherence_DL_numeric: t, L >= 0 required");
    if (t == 0.0 || L == 0.0) return 0.0;
    const double g2 = fspec.g * fspec.g;
    const int n = fspec.n;
    const double pref = (n == 1) ? 2.0 * g2 / kPi : g2 / (kPi * kPi);

    auto integrand = [&](double k) {
        if (k <= 0.0) return 0.0;
        const double st = std::sin(0.5 * k * t);
        const double sep = (n == 1) ? 2.0 * std::pow(std::sin(0.5 * k * L), 2) : one_minus_sinc(k * L);
        const double kfac = (n == 1) ? 1.0 / (k * k * k) : 1.0 / k;
        return kfac * fspec.window.f2(k) * st * st * thermal_coth(fspec.beta, k) * sep;
    };
    num::QuadratureSettings qs = settings;
    // mixed monotone + oscillatory integrand: geometric panels, generous budget
    if (qs.abs_tol == num::QuadratureSettings{}.abs_tol)
        qs.abs_tol = 1e-13 * (1.0 + fspec.temperature());
    const num::QuadResult res = num::integrate_semi_infinite(integrand, qs);
    if (!res.converged)
        warn(sink, "decoherence_DL_numeric: quadrature tolerance not met at (t, L) = (" +
                       std::to_string(t) + ", " + std::to_string(L) + ")");
    return pref * res.value;
}

namespace {

void require_lorentzian(const FieldSpec& fspec, const char* who) {
    if (fspec.window.kind() != CouplingProfile::Kind::lorentzian_k)
        throw std::domain_error(std::string(who) + ": Lorentzian window required");
}

// n=1 branch term of the high-T closed form
double highT_n1_branch(double u, double v) {
    // u <= v assumed: u^2 (v - u/3)/2 - u + e^{-v} sinh(u)
    return 0.5 * u * u * (v - u / 3.0) - u + std::exp(-v) * std::sinh(u);
}

}  // namespace

double decoherence_DL_highT(const FieldSpec& fspec, double t, double L, ClosedForm form) {
    if (t < 0.0 || L < 0.0) throw std::domain_error("decoherence_DL_highT: t, L >= 0 required");
    require_lorentzian(fspec, "decoherence_DL_highT");
    const double G = fspec.cutoff();
    const double T = fspec.temperature();
    const double g2 = fspec.g * fspec.g;
    const double u = G * t;
    const double v = G * L;

    if (fspec.n == 1) {
        // scale g^2 T / Gamma^3; both transcription and validation agree here
        const double cross = (-std::expm1(-u)) * (-std::expm1(-v));
        const double branch = (u <= v) ? highT_n1_branch(u, v) : highT_n1_branch(v, u);
        return g2 * T / (G * G * G) * (cross + branch);
    }

    if (form == ClosedForm::printed) {
        // literal transcription, including the inner dimensionful prefactor
        const double scale = g2 * T / (2.0 * kPi * G);
        const double cross = -(-std::expm1(-v)) * (-std::expm1(-u));
        const double mn = std::min(u, v);
        const double mx = std::max(u, v);
        return scale * (cross + scale * (mn - std::exp(-mx) * std::sinh(mn)));
    }

    // shipped form, derived from the radial integral
    if (u == 0.0 || v == 0.0) return 0.0;
    const double scale = g2 * T / kPi;
    if (v < 1e-4 && u >= v) {
        // quadratic small-separation onset
        return scale * G * L * L * (-std::expm1(-u)) / 12.0;
    }
    double bracket;
    if (u <= v) {
        const double sh = std::sinh(0.5 * u);
        bracket = (u + std::expm1(-u)) / (2.0 * G)  // t/2 - (1 - e^{-u})/(2G)
                  - t * t / (4.0 * L) + std::exp(-v) * 2.0 * sh * sh / (2.0 * G * G * L);
    } else {
        bracket = L / 4.0 + std::expm1(-u) / (2.0 * G) +
                  (-std::expm1(-v) - std::exp(-u) * std::sinh(v)) / (2.0 * G * G * L);
    }
    return scale * bracket;
}

namespace {

// odd auxiliary xi(z) = z ln|z| + h(z) entering the n = 3 zero-temperature form
double xi_odd(double z) {
    if (z == 0.0) return 0.0;
    const double az = std::abs(z);
    const double val = az * std::log(az) + num::antisymmetric_ei(az);
    return z > 0.0 ? val : -val;
}

}  // namespace

double decoherence_DL_zeroT(const FieldSpec& fspec, double t, double L, ClosedForm form) {
    if (t < 0.0 || L < 0.0) throw std::domain_error("decoherence_DL_zeroT: t, L >= 0 required");
    require_lorentzian(fspec, "decoherence_DL_zeroT");
    const double G = fspec.cutoff();
    const double g2 = fspec.g * fspec.g;
    const double u = G * t;
    const double v = G * L;
    const int n = fspec.n;

    const double scale1 = g2 / (kPi * G * G);
    const double scale3 = g2 / (2.0 * kPi * kPi);

    auto kappa_combination = [&](int order) {
        return num::kappa(order, u) + num::kappa(order, v) - 0.5 * num::kappa(order, u + v) -
               0.5 * num::kappa(order, std::abs(u - v));
    };

    if (n == 1) return scale1 * kappa_combination(1);

    if (form == ClosedForm::printed) return scale3 * kappa_combination(3);

    // shipped n = 3 form, derived from the radial integral:
    // D = scale3 [ kappa_3(u) + (xi(v) - xi(v+u)/2 - xi(v-u)/2) / v ]
    if (u == 0.0 || v == 0.0) return 0.0;
    if (v < 1e-4) {
        const double lead =
            11.0 / 36.0 - (kEulerGamma + std::log(v)) / 6.0 + num::symmetric_ei(u) / 6.0;
        return scale3 * v * v * lead;
    }
    const double comb = xi_odd(v) - 0.5 * xi_odd(v + u) - 0.5 * xi_odd(v - u);
    return scale3 * (num::kappa(3, u) + comb / v);
}

std::vector<std::string> ValidationReport::to_lines() const {
    std::vector<std::string> lines;
    auto fmt = [](double v) {
        std::ostringstream os;
        os.precision(6);
        os << v;
        return os.str();
    };
    lines.push_back("closed_form_tolerance: " + fmt(tolerance));
    for (const auto& c : cases) {
        lines.push_back(c.name + ".max_rel_dev_shipped: " + fmt(c.max_rel_dev_shipped));
        lines.push_back(c.name + ".max_rel_dev_printed: " + fmt(c.max_rel_dev_printed));
        lines.push_back(c.name + ".max_pair_asymmetry: " + fmt(c.max_pair_asymmetry));
        lines.push_back(c.name + ".shipped_ok: " + (c.shipped_ok ? "yes" : "no"));
        lines.push_back(c.name + ".printed_ok: " + (c.printed_ok ? "yes" : "no"));
    }
    return lines;
}

ValidationReport validate_closed_forms(double g, double Gamma, double T_high, int grid_n,
                                       double span, double tol, WarningSink* sink) {
    if (grid_n < 3) throw std::domain_error("validate_closed_forms: grid_n >= 3 required");
    ValidationReport report;
    report.tolerance = tol;

    struct Case {
        std::string name;
        FieldSpec fspec;
        bool highT;
    };
    const std::vector<Case> cases = {
        {"n1_highT", make_field_spec_T(1, g, Gamma, T_high), true},
        {"n3_highT", make_field_spec_T(3, g, Gamma, T_high), true},
        {"n1_T0", make_field_spec_T(1, g, Gamma, 0.0), false},
        {"n3_T0", make_field_spec_T(3, g, Gamma, 0.0), false},
    };

    for (const auto& c : cases) {
        ClosedFormCaseReport r;
        r.name = c.name;
        const int n = grid_n;
        std::vector<double> numeric(std::size_t(n) * n, 0.0);
        double dmax = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = span / Gamma * double(i) / double(n - 1);
            for (int j = 0; j < n; ++j) {
                const double L = span / Gamma * double(j) / double(n - 1);
                const double D = decoherence_DL_numeric(c.fspec, t, L, {}, sink);
                numeric[std::size_t(i) * n + j] = D;
                dmax = std::max(dmax, D);
            }
        }
        r.max_value = dmax;
        for (int i = 0; i < n; ++i) {
            const double t = span / Gamma * double(i) / double(n - 1);
            for (int j = 0; j < n; ++j) {
                const double L = span / Gamma * double(j) / double(n - 1);
                const double D = numeric[std::size_t(i) * n + j];
                r.max_pair_asymmetry =
                    std::max(r.max_pair_asymmetry, std::abs(D - numeric[std::size_t(j) * n + i]));
                if (D <= 1e-6 * dmax) continue;
                const double ship = c.highT ? decoherence_DL_highT(c.fspec, t, L)
                                            : decoherence_DL_zeroT(c.fspec, t, L);
                const double prin = c.highT
                                        ? decoherence_DL_highT(c.fspec, t, L, ClosedForm::printed)
                                        : decoherence_DL_zeroT(c.fspec, t, L, ClosedForm::printed);
                r.max_rel_dev_shipped = std::max(r.max_rel_dev_shipped, std::abs(ship - D) / D);
                r.max_rel_dev_printed = std::max(r.max_rel_dev_printed, std::abs(prin - D) / D);
            }
        }
        r.shipped_ok = r.max_rel_dev_shipped <= tol;
        r.printed_ok = r.max_rel_dev_printed <= tol;
        if (!r.printed_ok)
            warn(sink, "closed-form discrepancy: " + c.name + " printed form deviates " +
                           std::to_string(r.max_rel_dev_printed) + " from quadrature");
        if (!r.shipped_ok)
            warn(sink, "closed-form discrepancy: " + c.name + " shipped form deviates " +
                           std::to_string(r.max_rel_dev_shipped) + " from quadrature");
        report.cases.push_back(std::move(r));
    }
    return report;
}

DensityGrid make_density_grid(double x_start, double x_step, int count, double mass) {
    if (count < 3 || !(x_step > 0.0) || !(mass > 0.0))
        throw std::domain_error("DensityGrid: need count >= 3, step > 0, mass > 0");
    DensityGrid g;
    g.x_start = x_start;
    g.x_step = x_step;
    g.count = count;
    g.mass = mass;
    g.values.assign(std::size_t(count) * count, {0.0, 0.0});
    return g;
}

double density_trace(const DensityGrid& grid) {
    double tr = 0.0;
    for (int i = 0; i < grid.count; ++i) tr += grid.at(i, i).real();
    return tr * grid.x_step;
}

double density_hermiticity_defect(const DensityGrid& grid) {
    double worst = 0.0;
    for (int i = 0; i < grid.count; ++i)
        for (int j = i; j < grid.count; ++j)
            worst = std::max(worst, std::abs(grid.at(i, j) - std::conj(grid.at(j, i))));
    return worst;
}

MasterCoefficients make_master_coefficients(const FieldSpec& fspec,
                                            const DampedPropagatorSpec& pspec,
                                            const DensityGrid& grid,
                                            const num::QuadratureSettings& settings,
                                            WarningSink* sink) {
    MasterCoefficients coeffs;
    coeffs.V_n.resize(grid.count);
    coeffs.V_d.resize(grid.count);
    for (int m = 0; m < grid.count; ++m) {
        const OverdampedCoefficients c =
            overdamped_Vn_Vd(fspec, pspec, grid.x_step * double(m), settings, sink);
        coeffs.V_n[m] = c.V_n;
        coeffs.V_d[m] = c.V_d;
    }
    return coeffs;
}

namespace {

std::vector<double> potential_on_axis(const DensityGrid& grid, const Hamiltonian1D& ham) {
    std::vector<double> V(grid.count, 0.0);
    if (ham.kind == Hamiltonian1D::Kind::harmonic)
        for (int i = 0; i < grid.count; ++i) {
            const double x = grid.x(i);
            V[i] = 0.5 * grid.mass * ham.Omega * ham.Omega * x * x;
        }
    return V;
}

}  // namespace

DensityGrid evolve_master(const DensityGrid& grid, const MasterCoefficients& coeffs,
                          const Hamiltonian1D& ham, double dt, int steps) {
    if (!(dt > 0.0) || steps < 0) throw std::domain_error("evolve_master: dt > 0, steps >= 0");
    if (int(coeffs.V_n.size()) < grid.count || int(coeffs.V_d.size()) < grid.count)
        throw std::domain_error("evolve_master: coefficient tables shorter than the grid");
    if (density_hermiticity_defect(grid) > 1e-8)
        throw std::domain_error("evolve_master: input density matrix is not Hermitian (> 1e-8)");
    if (!std::isfinite(density_trace(grid)))
        throw std::domain_error("evolve_master: non-finite trace");

    const int n = grid.count;
    const double h = grid.x_step;
    const double M = grid.mass;
    const double kinetic = (ham.kind == Hamiltonian1D::Kind::zero) ? 0.0 : 1.0;
    const std::vector<double> V = potential_on_axis(grid, ham);

    // explicit-scheme stability estimate: kinetic spread + potential detuning
    // + decoherence rate + advection, all against the RK4 stability radius
    double vmax = 0.0, vnmax = 0.0, advmax = 0.0;
    for (int i = 0; i < n; ++i) vmax = std::max(vmax, std::abs(V[i]));
    for (int m = 0; m < n; ++m) {
        vnmax = std::max(vnmax, std::abs(coeffs.V_n[m]));
        advmax = std::max(advmax, std::abs(coeffs.V_d[m]) * h * double(m));
    }
    const double lambda_est =
        kinetic * 4.0 / (M * h * h) + 2.0 * vmax + vnmax + 2.0 * advmax / (M * h);
    if (dt * lambda_est > 2.5)
        throw std::domain_error("evolve_master: dt = " + std::to_string(dt) +
                                " violates the stability bound (dt * " +
                                std::to_string(lambda_est) + " > 2.5)");

    using C = std::complex<double>;
    const C I(0.0, 1.0);
    std::vector<C> rho(grid.values);
    std::vector<C> k1(rho.size()), k2(rho.size()), k3(rho.size()), k4(rho.size()),
        tmp(rho.size());

    auto rhs = [&](const std::vector<C>& src, std::vector<C>& dst) {
        auto val = [&](int i, int j) -> C {
            if (i < 0 || i >= n || j < 0 || j >= n) return {0.0, 0.0};
            return src[std::size_t(i) * n + j];
        };
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const C c = val(i, j);
                const C dxx = (val(i + 1, j) - 2.0 * c + val(i - 1, j)) / (h * h);
                const C dyy = (val(i, j + 1) - 2.0 * c + val(i, j - 1)) / (h * h);
                const C dx = (val(i + 1, j) - val(i - 1, j)) / (2.0 * h);
                const C dy = (val(i, j + 1) - val(i, j - 1)) / (2.0 * h);
                const int m = std::abs(i - j);
                const double sep = h * double(i - j);
                dst[std::size_t(i) * n + j] = kinetic * I / (2.0 * M) * (dxx - dyy) -
                                              I * (V[i] - V[j]) * c +
                                              (coeffs.V_d[m] / M) * sep * (dx - dy) -
                                              coeffs.V_n[m] * c;
            }
        }
    };

    for (int s = 0; s < steps; ++s) {
        rhs(rho, k1);
        for (std::size_t q = 0; q < rho.size(); ++q) tmp[q] = rho[q] + 0.5 * dt * k1[q];
        rhs(tmp, k2);
        for (std::size_t q = 0; q < rho.size(); ++q) tmp[q] = rho[q] + 0.5 * dt * k2[q];
        rhs(tmp, k3);
        for (std::size_t q = 0; q < rho.size(); ++q) tmp[q] = rho[q] + dt * k3[q];
        rhs(tmp, k4);
        for (std::size_t q = 0; q < rho.size(); ++q)
            rho[q] += dt / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
    }

    DensityGrid out = grid;
    out.values = std::move(rho);
    out.time = grid.time + dt * double(steps);
    return out;
}

double plate_power(double Q, double resistivity, double v, double z,
                   std::optional<double> layer_b) {
    if (!(Q > 0.0) || !(resistivity > 0.0) || !(v > 0.0) || !(z > 0.0))
        throw std::domain_error("plate_power: Q, resistivity, v, z must be > 0");
    double P = Q * Q * resistivity * v * v / (16.0 * kPi * z * z * z);
    if (layer_b) {
        if (!(*layer_b > 0.0) || !(*layer_b < z))
            throw std::domain_error("plate_power: layer thickness must satisfy 0 < b < z");
        P *= 2.0 * (*layer_b) / (3.0 * z);
    }
    return P;
}

}  // namespace decolab::field
