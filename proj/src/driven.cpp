#include "decolab/driven.hpp"

#include <cmath>
#include <thread>
#include <vector>

namespace decolab::driven {

namespace {

double p2_over_pow(const OscillatorSpec& spec, double w, int pow) {
    if (w <= 0.0) return 0.0;
    double v = spectral_weight_p2(spec, w);
    for (int i = 0; i < pow; ++i) v /= w;
    return v;
}

enum class Trig { one, cos, sin };

double kernel_moment(const OscillatorSpec& spec, int pow, Trig trig, double t,
                     const num::QuadratureSettings& base) {
    num::QuadratureSettings qs = base;
    auto f = [&spec, pow, trig, t](double w) {
        const double env = p2_over_pow(spec, w, pow);
        switch (trig) {
            case Trig::one: return env;
            case Trig::cos: return env * std::cos(w * t);
            case Trig::sin: return env * std::sin(w * t);
        }
        return 0.0;
    };
    if (trig != Trig::one && t > 0.0) qs.period_hint = 2.0 * kPi / t;
    num::QuadResult res = num::integrate_semi_infinite(f, qs);
    if (!res.converged) {
        // one retry with a larger budget before giving up
        qs.panel_budget *= 4;
        res = num::integrate_semi_infinite(f, qs);
        if (!res.converged)
            throw std::runtime_error("kernels: quadrature failed at t = " + std::to_string(t));
    }
    return res.value;
}

num::QuadratureSettings kernel_defaults(const num::QuadratureSettings& settings) {
    num::QuadratureSettings qs = settings;
    if (qs.abs_tol == num::QuadratureSettings{}.abs_tol) qs.abs_tol = 1e-11;
    if (qs.rel_tol == num::QuadratureSettings{}.rel_tol) qs.rel_tol = 1e-8;
    return qs;
}

}  // namespace

double spectral_weight_p2(const OscillatorSpec& spec, double w) {
    if (!(w > 0.0)) throw std::domain_error("spectral_weight_p2: w > 0 required");
    const double g2 = spec.coupling_g2();
    const double w2 = w * w;
    const double G2 = spec.Gamma * spec.Gamma;
    const double res = w2 - spec.Omega * spec.Omega + spec.gamma * spec.gamma;
    const double denom =
        kPi * (w2 + G2) * (res * res + 4.0 * spec.Omega * spec.Omega * spec.gamma * spec.gamma);
    return g2 * w2 * w2 * G2 / denom;
}

SpectralMoments spectral_moments(const OscillatorSpec& spec,
                                 const num::QuadratureSettings& settings) {
    require_strict_regime(spec);
    const num::QuadratureSettings qs = kernel_defaults(settings);
    SpectralMoments m{};
    m.over_w = kernel_moment(spec, 1, Trig::one, 0.0, qs);
    m.over_w2 = kernel_moment(spec, 2, Trig::one, 0.0, qs);
    m.over_w3 = kernel_moment(spec, 3, Trig::one, 0.0, qs);
    return m;
}

Frequencies frequencies_omega12(const OscillatorSpec& spec,
                                const num::QuadratureSettings& settings) {
    const SpectralMoments m = spectral_moments(spec, settings);
    return {m.over_w / m.over_w2, m.over_w2 / m.over_w3};
}

KernelSet kernels(const OscillatorSpec& spec, double t_max, int n_samples,
                  const num::QuadratureSettings& settings) {
    require_strict_regime(spec);
    if (!(t_max > 0.0)) throw std::domain_error("kernels: t_max > 0 required");
    if (n_samples < 64) throw std::domain_error("kernels: n_samples >= 64 required");

    const num::QuadratureSettings qs = kernel_defaults(settings);
    const SpectralMoments m = spectral_moments(spec, qs);
    const double dt = t_max / double(n_samples - 1);

    std::vector<double> r(n_samples), s(n_samples), y(n_samples), z(n_samples);
    r[0] = 1.0;  // shares the defining integral with the mass moment
    y[0] = 1.0;
    s[0] = 0.0;
    z[0] = 0.0;

    auto fill = [&](int begin, int stride) {
        for (int j = begin; j < n_samples; j += stride) {
            if (j == 0) continue;
            const double t = dt * double(j);
            r[j] = kernel_moment(spec, 2, Trig::cos, t, qs) / m.over_w2;
            y[j] = kernel_moment(spec, 1, Trig::cos, t, qs) / m.over_w;
            s[j] = kernel_moment(spec, 1, Trig::sin, t, qs) * m.over_w3 / (m.over_w2 * m.over_w2);
            z[j] = kernel_moment(spec, 2, Trig::sin, t, qs) / m.over_w2;
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = int(std::min<unsigned>(hw, 8));
    if (workers > 1 && n_samples > 32) {
        std::vector<std::thread> pool;
        std::exception_ptr first_error;
        std::mutex err_mu;
        for (int wix = 0; wix < workers; ++wix)
            pool.emplace_back([&, wix]() {
                try {
                    fill(wix, workers);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    } else {
        fill(0, 1);
    }

    KernelSet ks;
    ks.r = SampledCurve(0.0, dt, std::move(r));
    ks.s = SampledCurve(0.0, dt, std::move(s));
    ks.y = SampledCurve(0.0, dt, std::move(y));
    ks.z = SampledCurve(0.0, dt, std::move(z));
    ks.Omega1 = m.over_w / m.over_w2;
    ks.Omega2 = m.over_w2 / m.over_w3;
    ks.mass_moment = m.over_w2;
    return ks;
}

namespace {

void check_coverage(const DriveProfile& drive, const SampledCurve& kernel, double t) {
    const double slack = 1e-9 * std::max(1.0, std::abs(t));
    if (kernel.x_max() + slack < t)
        throw std::out_of_range("drive_convolution: kernel grid covers [0, " +
                                std::to_string(kernel.x_max()) + "], need t = " + std::to_string(t));
    if (!drive.is_delta() && drive.coverage_max() + slack < t)
        throw std::out_of_range("drive_convolution: drive not defined up to t = " + std::to_string(t));
}

// trapezoid weights on [0, t] with spacing tied to the kernel grid
int convolution_points(const SampledCurve& kernel, double t) {
    return std::max(2, int(std::ceil(t / kernel.step())) + 1);
}

}  // namespace

double drive_convolution(const DriveProfile& drive, const SampledCurve& kernel, double t) {
    if (t < 0.0) throw std::domain_error("drive_convolution: t >= 0 required");
    check_coverage(drive, kernel, t);
    if (drive.is_delta()) return drive.delta_strength() * kernel.eval(std::min(t, kernel.x_max()));
    if (t == 0.0) return 0.0;
    const int n = convolution_points(kernel, t);
    const double h = t / double(n - 1);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double tp = h * double(i);
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        sum += w * drive.eval(tp) * kernel.eval(std::min(t - tp, kernel.x_max()));
    }
    return sum * h;
}

double drive_double_convolution_direct(const DriveProfile& drive, const SampledCurve& kernel,
                                       double t) {
    if (t < 0.0) throw std::domain_error("drive_double_convolution: t >= 0 required");
    check_coverage(drive, kernel, t);
    if (drive.is_delta()) {
        const double s = drive.delta_strength();
        return s * s * kernel.eval(0.0);
    }
    if (t == 0.0) return 0.0;
    const int n = convolution_points(kernel, t);
    const double h = t / double(n - 1);
    std::vector<double> alpha(n);
    for (int i = 0; i < n; ++i) alpha[i] = drive.eval(h * double(i));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            row += wj * alpha[j] * kernel.eval(std::abs(double(i - j)) * h);
        }
        sum += wi * alpha[i] * row;
    }
    return sum * h * h;
}

double drive_double_convolution_iterated(const DriveProfile& drive, const SampledCurve& kernel,
                                         double t) {
    if (t < 0.0) throw std::domain_error("drive_double_convolution: t >= 0 required");
    check_coverage(drive, kernel, t);
    if (drive.is_delta()) {
        const double s = drive.delta_strength();
        return s * s * kernel.eval(0.0);
    }
    if (t == 0.0) return 0.0;
    const int n = convolution_points(kernel, t);
    const double h = t / double(n - 1);
    double outer = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ti = h * double(i);
        const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        // inner integral at fixed t': Int alpha(t'') K(|t' - t''|) dt''
        double inner = 0.0;
        for (int j = 0; j < n; ++j) {
            const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            inner += wj * drive.eval(h * double(j)) * kernel.eval(std::abs(ti - h * double(j)));
        }
        outer += wi * drive.eval(ti) * inner * h;
    }
    return outer * h;
}

double decoherence_exponent_driven(const OscillatorSpec& spec, const DriveProfile& drive,
                                   double t, const KernelSet& ks, bool displacement_scale,
                                   WarningSink* sink) {
    if (t < 0.0) throw std::domain_error("decoherence_exponent_driven: t >= 0 required");
    if (t == 0.0) return 0.0;
    const double scale = displacement_scale ? spec.a * spec.a : 1.0;

    double dbl, conv_y, conv_z;
    if (drive.is_delta()) {
        const double s = drive.delta_strength();
        dbl = s * s;  // y(0) = 1
        conv_y = s * ks.y.eval(t);
        conv_z = s * ks.z.eval(t);
    } else {
        dbl = drive_double_convolution_direct(drive, ks.y, t);
        conv_y = drive_convolution(drive, ks.y, t);
        conv_z = drive_convolution(drive, ks.z, t);
    }
    const double D = scale * (spec.M * ks.Omega1 * (dbl - conv_y * conv_y) -
                              spec.M * ks.Omega2 * conv_z * conv_z);
    if (D < 0.0)
        warn(sink, "decoherence_exponent_driven: negative exponent D_alpha = " + std::to_string(D) +
                       " at t = " + std::to_string(t));
    return D;
}

double decoherence_exponent_driven(const OscillatorSpec& spec, const DriveProfile& drive,
                                   double t, int n_samples, bool displacement_scale,
                                   WarningSink* sink) {
    const KernelSet ks = kernels(spec, std::max(t, 1e-12), std::max(n_samples, 64));
    return decoherence_exponent_driven(spec, drive, t, ks, displacement_scale, sink);
}

}  // namespace decolab::driven
