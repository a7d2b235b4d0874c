// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. argv[1] optionally names the CLI binary for the
// determinism check.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "decolab/driven.hpp"
#include "decolab/field.hpp"
#include "decolab/mattress.hpp"
#include "decolab/numerics.hpp"
#include "decolab/ohmic.hpp"
#include "decolab/run.hpp"

using namespace decolab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Ohmic closed-form agreement: quadrature vs high-T closed form, < 1%
//    relative over Gamma t in [0.01, 10] at T/Gamma = 100, 50 sample times.
Outcome ohmic_closed_form() {
    const auto spec = make_oscillator_spec(1.0, 1.0, 0.01, 1.0, 100.0, 1.0, false);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double t = 0.01 * std::pow(10.0 / 0.01, i / 49.0);
        const double quad = ohmic::decoherence_exponent_ohmic(spec, t);
        const double closed = ohmic::decoherence_exponent_highT(spec, t);
        worst = std::max(worst, std::abs(quad - closed) / closed);
    }
    std::ostringstream os;
    os << "max rel dev " << worst;
    return {worst < 0.01, os.str()};
}

// ---------------------------------------------------------------------------
// 2. Timescale consistency: D(tau_dec) in [0.95, 1] deep in the linear
//    regime; D(tau'_dec) = 1 +/- 5% in the quadratic regime.
Outcome timescales() {
    const auto lin = make_oscillator_spec(1.0, 1.0, 0.01, 1000.0, 100.0, 1.0, false);
    const auto ts1 = ohmic::decoherence_timescales(lin);
    const double d1 = ohmic::decoherence_exponent_highT(lin, ts1.tau_dec);
    const bool ok1 = lin.Gamma * ts1.tau_dec >= 100.0 && d1 >= 0.95 && d1 <= 1.0;

    const auto quad = make_oscillator_spec(1.0, 1.0, 1.0, 1.0, 1e7, 10.0, false);
    const auto ts2 = ohmic::decoherence_timescales(quad);
    const double d2 = ohmic::decoherence_exponent_highT(quad, ts2.tau_dec_prime);
    const bool ok2 = quad.Gamma * ts2.tau_dec_prime <= 0.1 && std::abs(d2 - 1.0) <= 0.05;

    std::ostringstream os;
    os << "D(tau_dec) = " << d1 << " at Gamma tau = " << lin.Gamma * ts1.tau_dec
       << "; D(tau'_dec) = " << d2 << " at Gamma tau' = " << quad.Gamma * ts2.tau_dec_prime;
    return {ok1 && ok2, os.str()};
}

// ---------------------------------------------------------------------------
// 3. Kernel endpoints to 1e-8 and the damped-oscillation shape bound at
//    Gamma/Omega = 1e3, gamma/Omega = 1e-3, 256 samples on [0, 10/Omega].
Outcome kernel_shape() {
    const auto spec = make_oscillator_spec(1.0, 1.0, 1e-3, 1e3, 0.0, 1.0, true);
    const auto ks = driven::kernels(spec, 10.0, 256);
    const double e_r = std::abs(ks.r.eval(0.0) - 1.0);
    const double e_y = std::abs(ks.y.eval(0.0) - 1.0);
    const double e_s = std::abs(ks.s.eval(0.0));
    const double e_z = std::abs(ks.z.eval(0.0));
    const double bound = 5.0 * (spec.gamma / spec.Omega + spec.Omega / spec.Gamma);
    double sup = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double t = 10.0 * i / 255.0;
        sup = std::max(sup, std::abs(ks.r.eval(t) -
                                     std::exp(-spec.gamma * t) * std::cos(spec.Omega * t)));
    }
    std::ostringstream os;
    os << "endpoint defects " << std::max({e_r, e_y, e_s, e_z}) << "; sup|r - damped cos| = " << sup
       << " vs bound " << bound;
    return {e_r < 1e-8 && e_y < 1e-8 && e_s < 1e-8 && e_z < 1e-8 && sup <= bound, os.str()};
}

// ---------------------------------------------------------------------------
// 4. Cutoff-insensitivity contrast at t = 10/Gamma: the visibility factor
//    e^{-D} moves >= 5x more for the delta kick than for alpha = sin(Omega t)
//    when Gamma doubles (its relative change is the exponent shift).
Outcome cutoff_contrast() {
    const double Gamma = 1000.0;
    const double t = 10.0 / Gamma;
    const auto lo = make_oscillator_spec(1.0, 1.0, 1e-3, Gamma, 0.0, 1.0, true);
    const auto hi = make_oscillator_spec(1.0, 1.0, 1e-3, 2.0 * Gamma, 0.0, 1.0, true);
    const auto ks_lo = driven::kernels(lo, t, 128);
    const auto ks_hi = driven::kernels(hi, t, 128);

    auto shift = [&](const DriveProfile& d) {
        return std::abs(driven::decoherence_exponent_driven(hi, d, t, ks_hi) -
                        driven::decoherence_exponent_driven(lo, d, t, ks_lo));
    };
    const double delta_shift = shift(DriveProfile::delta());
    const double sine_shift = shift(DriveProfile::sine(1.0, lo.Omega));
    std::ostringstream os;
    os << "|dD_delta| = " << delta_shift << ", |dD_sine| = " << sine_shift << ", contrast "
       << delta_shift / sine_shift << "x";
    return {delta_shift >= 5.0 * sine_shift, os.str()};
}

// ---------------------------------------------------------------------------
// 5. Mattress exactness against the analytic linear model: trajectory,
//    shooting, Jacobian, full grid propagation to 1e-6; trace pinned to 1;
//    Jacobian matches second-order central differences.
Outcome mattress_exactness() {
    const double M = 1.0, mu = 0.5, u2 = 0.5, T = 1.5, t = 1.0;
    const auto spec = mattress::make_mattress_spec(M, mu, T, mattress::OverlapModel::parabolic(u2));
    const double lambda = 2.0 * mu * u2 / M;
    const auto B = [&](double k) { return k / (2.0 * mu * u2); };
    auto traj = [&](double k, double df, double tq) {
        return (df + B(k)) * std::exp(lambda * (tq - t)) - B(k);
    };

    double worst = 0.0;
    // trajectory + shooting + Jacobian
    for (double k : {-1.5, 0.0, 0.8})
        for (double df : {-2.0, 0.5, 3.0}) {
            worst = std::max(worst, std::abs(mattress::delta_trajectory(spec, k, df, t, 0.0) -
                                             traj(k, df, 0.0)));
            const double di = traj(k, df, 0.0);
            const double K_exact = 2.0 * mu * u2 * (df * std::exp(-lambda * t) - di) /
                                   (1.0 - std::exp(-lambda * t));
            worst = std::max(worst, std::abs(mattress::shoot_K(spec, df, di, t) - K_exact));
        }
    const double jac_exact = -(1.0 - std::exp(-lambda * t)) / (2.0 * mu * u2);
    worst = std::max(worst, std::abs(mattress::jacobian_dDelta0_dk(spec, 0.3, 0.7, t) - jac_exact));

    // full pipeline on a grid vs the assembled oracle
    const mattress::Axis ka{-2.0, 0.2, 21};
    const mattress::Axis da{-6.0, 0.5, 25};
    mattress::RengiwGrid R0 = mattress::make_rengiw_grid(ka, da);
    for (int ik = 0; ik < ka.count; ++ik)
        for (int id = 0; id < da.count; ++id) {
            const double k = ka.at(ik);
            const double d = da.at(id);
            const double env = std::exp(-k * k / 4.0 - d * d / 8.0);
            R0.at(ik, id) = {env * std::cos(k * d / 4.0), 0.2 * env * std::sin(k + d)};
        }
    const auto Rt = mattress::propagate_rengiw(spec, R0, t);
    const double N = 2.0 * mu * u2 / (1.0 - std::exp(-lambda * t));
    double worst_grid = 0.0;
    for (int ik = 0; ik < ka.count; ++ik)
        for (int id = 0; id < da.count; ++id) {
            const double k = ka.at(ik);
            const double df = da.at(id);
            const double A = df + B(k);
            const double intU =
                0.5 * u2 *
                (A * A * (1.0 - std::exp(-2.0 * lambda * t)) / (2.0 * lambda) -
                 2.0 * A * B(k) * (1.0 - std::exp(-lambda * t)) / lambda + B(k) * B(k) * t);
            const std::complex<double> expect =
                N * std::exp(-4.0 * mu * T * intU) * std::abs(jac_exact) *
                mattress::rengiw_interpolate(R0, k, traj(k, df, 0.0));
            worst_grid = std::max(worst_grid, std::abs(Rt.at(ik, id) - expect) /
                                                  std::max(std::abs(expect), 1e-12));
        }

    // trace at the origin node for the scheduled times (gaussian overlap)
    const auto gspec = mattress::make_mattress_spec(1.0, 1.0, 2.0, mattress::OverlapModel::gaussian(1.0));
    const double rate = 2.0 * gspec.mu * mattress::overlap_U_second(gspec, 0.0) / gspec.M;
    const mattress::Axis gka{-0.1, 0.02, 11};
    const mattress::Axis gda_in{-10.0, 0.5, 41};
    const mattress::Axis gda_out{-8.0, 0.5, 33};
    mattress::RengiwGrid G0 = mattress::make_rengiw_grid(gka, gda_in);
    for (int ik = 0; ik < gka.count; ++ik)
        for (int id = 0; id < gda_in.count; ++id) {
            const double k = gka.at(ik);
            const double d = gda_in.at(id);
            G0.at(ik, id) = std::exp(-k * k - d * d / 16.0);
        }
    double trace_dev = 0.0;
    for (double tu : {0.1, 1.0, 10.0}) {
        const auto Gt = mattress::propagate_rengiw(gspec, G0, tu / rate, gka, gda_out);
        trace_dev = std::max(trace_dev, std::abs(Gt.at(5, 16).real() - 1.0));
    }

    // finite-difference order of the Jacobian on the gaussian overlap
    auto fd = [&](double h) {
        return (mattress::delta_trajectory(gspec, 0.4 + h, 0.6, 1.2, 0.0) -
                mattress::delta_trajectory(gspec, 0.4 - h, 0.6, 1.2, 0.0)) /
               (2.0 * h);
    };
    const double jax = mattress::jacobian_dDelta0_dk(gspec, 0.4, 0.6, 1.2);
    const double fd_ratio = std::abs(fd(2e-2) - jax) / std::abs(fd(1e-2) - jax);

    std::ostringstream os;
    os << "analytic dev " << std::max(worst, worst_grid) << "; trace dev " << trace_dev
       << "; FD order ratio " << fd_ratio;
    return {worst < 1e-6 && worst_grid < 1e-6 && trace_dev < 1e-6 && fd_ratio > 3.5, os.str()};
}

// ---------------------------------------------------------------------------
// 6. Fixed-point classification against a dense scan, 20 k values across
//    the fold.
Outcome fixed_points_scan() {
    const auto spec = mattress::make_mattress_spec(1.0, 0.7, 1.0, mattress::OverlapModel::gaussian(1.0));
    const double fold = 2.0 * spec.mu * std::exp(-0.5);
    int mismatches = 0;
    for (int i = 0; i < 20; ++i) {
        const double k = -1.3 * fold + 2.6 * fold * i / 19.0;
        const auto fast = mattress::fixed_points(spec, k);
        // dense brute force over the same window
        std::vector<mattress::FixedPoint> slow;
        const int n = 400000;
        const double w = 10.0;
        double prev = 2.0 * spec.mu * mattress::overlap_U_prime(spec, -w) + k;
        for (int j = 1; j <= n; ++j) {
            const double x = -w + 2.0 * w * j / n;
            const double cur = 2.0 * spec.mu * mattress::overlap_U_prime(spec, x) + k;
            if (prev * cur < 0.0 || cur == 0.0) {
                const double mid = x - w / n;
                slow.push_back({mid, mattress::overlap_U_second(spec, mid) > 0.0
                                         ? mattress::Stability::unstable
                                         : mattress::Stability::stable});
            }
            prev = cur;
        }
        if (fast.size() != slow.size()) {
            ++mismatches;
            continue;
        }
        for (std::size_t j = 0; j < fast.size(); ++j)
            if (fast[j].stability != slow[j].stability ||
                std::abs(fast[j].delta_star - slow[j].delta_star) > 1e-3)
                ++mismatches;
    }
    std::ostringstream os;
    os << "20 k values, " << mismatches << " mismatches";
    return {mismatches == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 7. Field closed-form validation on a 21 x 21 grid per case: shipped forms
//    within 0.5% where D > 1e-6 max, printed discrepancies logged.
Outcome field_validation() {
    WarningSink sink;
    const auto report = field::validate_closed_forms(1.0, 1.0, 1000.0, 21, 10.0, 0.005, &sink);
    bool ok = true;
    std::ostringstream os;
    for (const auto& c : report.cases) {
        ok = ok && c.shipped_ok;
        // a failing printed form must be logged in the machine-readable report
        if (!c.printed_ok) {
            bool logged = false;
            for (const auto& w : sink.snapshot())
                if (w.find(c.name) != std::string::npos) logged = true;
            ok = ok && logged;
        }
        os << c.name << " shipped " << c.max_rel_dev_shipped << (c.printed_ok ? "" : " (printed logged)")
           << "; ";
    }
    return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// 8. Saturation and growth laws on the Fig. 2 phenomenology.
Outcome growth_laws() {
    const double g = 1.0, Gamma = 1.0, T = 1000.0;
    const auto n1h = field::make_field_spec_T(1, g, Gamma, T);
    const auto n3h = field::make_field_spec_T(3, g, Gamma, T);
    const auto n1z = field::make_field_spec_T(1, g, Gamma, 0.0);
    const auto n3z = field::make_field_spec_T(3, g, Gamma, 0.0);
    auto D = [&](const field::FieldSpec& fs, double t, double L) {
        return fs.zero_temperature() ? field::decoherence_DL_zeroT(fs, t, L)
                                     : field::decoherence_DL_highT(fs, t, L);
    };

    std::ostringstream os;
    bool ok = true;

    // quadratic small-L onset: log-log fit exponent on L in (0, 0.2/Gamma]
    const char* names[4] = {"n1_highT", "n3_highT", "n1_T0", "n3_T0"};
    const field::FieldSpec* specs[4] = {&n1h, &n3h, &n1z, &n3z};
    os << "onset exponents:";
    for (int c = 0; c < 4; ++c) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int npts = 9;
        for (int i = 0; i < npts; ++i) {
            const double L = 0.02 * std::pow(10.0, i / double(npts - 1));  // 0.02 .. 0.2
            const double x = std::log(L);
            const double y = std::log(D(*specs[c], 1.0 / Gamma, L));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
        os << " " << names[c] << " " << slope;
        ok = ok && std::abs(slope - 2.0) <= 0.1;
    }

    // n = 3 high-T saturation beyond Gamma L = 20. The quadrature-validated
    // exponent approaches its plateau algebraically (a t^2/4L tail), so the
    // doubling change at Gamma L = 20 sits well above the 1% threshold;
    // report where 1% is actually reached.
    double sat = 0.0;
    for (double t : {1.0, 2.0, 3.0})
        for (double L : {20.0, 30.0}) {
            const double rel = std::abs(D(n3h, t, 2.0 * L) - D(n3h, t, L)) / D(n3h, t, L);
            sat = std::max(sat, rel);
        }
    double L_1pct = 20.0;
    while (L_1pct < 1e4 &&
           std::abs(D(n3h, 3.0, 2.0 * L_1pct) - D(n3h, 3.0, L_1pct)) / D(n3h, 3.0, L_1pct) >= 0.01)
        L_1pct *= 1.25;
    os << "; n3 highT saturation " << sat << " at Gamma L = 20 (reaches 1% near Gamma L = "
       << L_1pct << ")";
    ok = ok && sat < 0.01;

    // n = 1 high-T linear large-L growth: vanishing second difference
    double second = 0.0;
    for (double L : {40.0, 60.0, 80.0}) {
        const double h = 10.0;
        const double d2 = D(n1h, 3.0, L + h) - 2.0 * D(n1h, 3.0, L) + D(n1h, 3.0, L - h);
        const double d1 = D(n1h, 3.0, L + h) - D(n1h, 3.0, L);
        second = std::max(second, std::abs(d2 / d1));
    }
    os << "; n1 highT second-difference ratio " << second;
    ok = ok && second < 1e-3;

    // n = 1 T = 0 logarithmic growth: R^2 of D against ln L on [10, 100]
    {
        std::vector<double> xs, ys;
        for (int i = 0; i <= 12; ++i) {
            const double L = 10.0 * std::pow(10.0, i / 12.0);
            xs.push_back(std::log(L));
            ys.push_back(D(n1z, 3.0, L));
        }
        const int n = int(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        for (int i = 0; i < n; ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
            syy += ys[i] * ys[i];
        }
        const double r_num = n * sxy - sx * sy;
        const double r2 = r_num * r_num / ((n * sxx - sx * sx) * (n * syy - sy * sy));
        os << "; n1 T0 log-growth R^2 " << r2;
        ok = ok && r2 >= 0.99;
    }
    return {ok, os.str()};
}

// ---------------------------------------------------------------------------
// 9. Master-equation oracle: 256^2 grid, 1000 steps, pure decoherence
//    matches rho0 e^{-V_n t} to 1e-8; hermiticity and trace drift < 1e-6.
Outcome master_oracle() {
    const int n = 256;
    field::DensityGrid grid = field::make_density_grid(-8.0, 16.0 / (n - 1), n, 1.0);
    auto psi = [](double x) {
        return std::pow(1.0 / kPi, 0.25) * (std::exp(-0.5 * (x - 2.0) * (x - 2.0)) +
                                            std::exp(-0.5 * (x + 2.0) * (x + 2.0)));
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) grid.at(i, j) = psi(grid.x(i)) * psi(grid.x(j));
    const double tr0 = field::density_trace(grid);
    for (auto& v : grid.values) v /= tr0;

    field::MasterCoefficients coeffs;
    coeffs.V_n.resize(n);
    coeffs.V_d.assign(n, 0.0);
    for (int m = 0; m < n; ++m) {
        const double r = grid.x_step * m;
        coeffs.V_n[m] = 0.5 * (1.0 - std::exp(-0.25 * r * r));
    }
    const double dt = 0.002;
    const int steps = 1000;
    const auto out = field::evolve_master(grid, coeffs, field::Hamiltonian1D::none(), dt, steps);

    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::complex<double> expect =
                grid.at(i, j) * std::exp(-coeffs.V_n[std::abs(i - j)] * dt * steps);
            worst = std::max(worst, std::abs(out.at(i, j) - expect));
        }
    const double herm = field::density_hermiticity_defect(out);
    const double drift = std::abs(field::density_trace(out) - 1.0) / (dt * steps);
    std::ostringstream os;
    os << "max dev " << worst << "; hermiticity " << herm << "; trace drift/time " << drift;
    return {worst < 1e-8 && herm < 1e-6 && drift < 1e-6, os.str()};
}

// ---------------------------------------------------------------------------
// 10. Special functions: kappa against an independent long-double
//     series/continued-fraction oracle over z in [1e-3, 50]; branch
//     consistency at the asymptotic switchover.
namespace oracle {

long double ei_pos(long double z) {
    if (z <= 40.0L) {
        long double sum = 0.0L, term = 1.0L;
        for (int k = 1; k <= 400; ++k) {
            term *= z / k;
            sum += term / k;
            if (term / k < 1e-22L * sum) break;
        }
        return 0.577215664901532860606512090082L + std::log(z) + sum;
    }
    long double sum = 1.0L, term = 1.0L;
    for (int k = 1; k <= 60; ++k) {
        const long double next = term * k / z;
        if (next >= term) break;
        term = next;
        sum += term;
    }
    return std::exp(z) / z * sum;
}

long double e1(long double z) {
    if (z <= 1.0L) {
        long double sum = 0.0L, term = 1.0L;
        for (int k = 1; k <= 200; ++k) {
            term *= -z / k;
            sum += term / k;
        }
        return -0.577215664901532860606512090082L - std::log(z) - sum;
    }
    // Lentz continued fraction with the exponential factored out
    const long double tiny = 1e-300L;
    long double b = z + 1.0L, c = 1.0L / tiny, d = 1.0L / b, h = d;
    for (int i = 1; i <= 400; ++i) {
        const long double an = -static_cast<long double>(i) * i;
        b += 2.0L;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0L / d;
        const long double del = d * c;
        h *= del;
        if (std::abs(del - 1.0L) < 1e-21L) break;
    }
    return std::exp(-z) * h;
}

long double g_sym(long double z) {
    if (z <= 40.0L)
        return 0.5L * (std::exp(-z) * ei_pos(z) - std::exp(z) * e1(z));
    long double term = 1.0L / (z * z), sum = term;
    for (int j = 1; j <= 60; ++j) {
        const long double next = term * (2.0L * j) * (2.0L * j + 1.0L) / (z * z);
        if (next >= term) break;
        term = next;
        sum += term;
    }
    return sum;
}

long double kappa(int n, long double z) {
    const long double C = 0.577215664901532860606512090082L;
    const long double l = C + std::log(z);
    return n == 1 ? g_sym(z) - (1.0L + 0.5L * z * z) * l : l - g_sym(z);
}

}  // namespace oracle

Outcome special_functions() {
    double worst = 0.0;
    for (int i = 0; i <= 300; ++i) {
        const double z = 1e-3 * std::pow(50.0 / 1e-3, i / 300.0);
        for (int n : {1, 3}) {
            const long double expect = oracle::kappa(n, z);
            const double got = num::kappa(n, z);
            const double rel =
                std::abs(got - double(expect)) / std::max(std::abs(double(expect)), 1e-12);
            worst = std::max(worst, rel);
        }
    }
    // branch-switch consistency: both representations at the same argument
    const double glo = num::detail::symmetric_ei_direct(30.0);
    const double ghi = num::detail::symmetric_ei_asymptotic(30.0);
    const double jump = std::abs(glo - ghi) / std::abs(glo);
    std::ostringstream os;
    os << "max rel dev vs oracle " << worst << "; branch jump " << jump;
    return {worst < 1e-8 && jump < 1e-10, os.str()};
}

// ---------------------------------------------------------------------------
// 11. Determinism: two CLI fig1 runs with identical configuration produce
//     bit-identical CSVs.
Outcome determinism(const std::string& tool) {
    if (tool.empty()) return {false, "no CLI binary path supplied"};
    const fs::path base = fs::temp_directory_path() / "decolab_acceptance";
    fs::remove_all(base);
    const fs::path d1 = base / "run1";
    const fs::path d2 = base / "run2";
    auto invoke = [&](const fs::path& dir) {
        const std::string cmd = tool + " fig1 --points 41 --tmax 10 --Lmax 10 --no-validate --out " +
                                dir.string() + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    if (invoke(d1) != 0 || invoke(d2) != 0) return {false, "CLI invocation failed"};
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(d1 / "fig1_n3_highT.csv");
    const std::string b = slurp(d2 / "fig1_n3_highT.csv");
    fs::remove_all(base);
    if (a.empty()) return {false, "no output produced"};
    std::ostringstream os;
    os << a.size() << " bytes, checksums " << (a == b ? "identical" : "differ");
    return {a == b, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string tool = argc > 1 ? argv[1] : "";
    struct Entry {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> entries = {
        {"ohmic-closed-form-agreement", ohmic_closed_form},
        {"timescale-consistency", timescales},
        {"kernel-endpoint-and-shape", kernel_shape},
        {"cutoff-insensitivity-contrast", cutoff_contrast},
        {"mattress-exactness", mattress_exactness},
        {"fixed-point-classification", fixed_points_scan},
        {"field-closed-form-validation", field_validation},
        {"saturation-and-growth-laws", growth_laws},
        {"master-equation-oracle", master_oracle},
        {"special-functions", special_functions},
        {"determinism", [&]() { return determinism(tool); }},
    };

    int failures = 0;
    for (const auto& e : entries) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = e.run();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s (%s; %.2fs)\n", out.pass ? "PASS" : "FAIL", e.name,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
