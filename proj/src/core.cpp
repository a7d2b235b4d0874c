#include "decolab/core.hpp"

#include <cmath>
#include <sstream>

namespace decolab {

namespace {

void check_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw std::domain_error(std::string("OscillatorSpec: ") + name + " must be finite");
}

}  // namespace

OscillatorSpec make_oscillator_spec(double M, double Omega, double gamma, double Gamma,
                                    double T, double a, bool strict_regime) {
    check_finite(M, "M");
    check_finite(Omega, "Omega");
    check_finite(gamma, "gamma");
    check_finite(Gamma, "Gamma");
    check_finite(T, "T");
    check_finite(a, "a");
    if (!(M > 0.0)) throw std::domain_error("OscillatorSpec: M > 0 violated");
    if (!(Omega > 0.0)) throw std::domain_error("OscillatorSpec: Omega > 0 violated");
    if (!(Gamma > 0.0)) throw std::domain_error("OscillatorSpec: Gamma > 0 violated");
    if (gamma < 0.0) throw std::domain_error("OscillatorSpec: gamma >= 0 violated");
    if (T < 0.0) throw std::domain_error("OscillatorSpec: T >= 0 violated");
    if (!(a > 0.0)) throw std::domain_error("OscillatorSpec: a > 0 violated");

    OscillatorSpec spec{M, Omega, gamma, Gamma, T, a, strict_regime};
    if (strict_regime) require_strict_regime(spec);
    return spec;
}

void require_strict_regime(const OscillatorSpec& spec) {
    std::ostringstream msg;
    if (spec.Gamma < 10.0 * spec.Omega) {
        msg << "regime Gamma >> Omega >> gamma violated (Gamma/Omega = "
            << spec.Gamma / spec.Omega << " < 10)";
        throw std::domain_error(msg.str());
    }
    if (spec.gamma > 0.0 && spec.Omega < 10.0 * spec.gamma) {
        msg << "regime Gamma >> Omega >> gamma violated (Omega/gamma = "
            << spec.Omega / spec.gamma << " < 10)";
        throw std::domain_error(msg.str());
    }
}

DriveProfile DriveProfile::delta(double strength) {
    if (!std::isfinite(strength)) throw std::domain_error("DriveProfile: strength must be finite");
    DriveProfile d;
    d.kind_ = Kind::delta;
    d.strength_ = strength;
    return d;
}

DriveProfile DriveProfile::sine(double amplitude, double lambda) {
    if (!std::isfinite(amplitude) || !(lambda > 0.0))
        throw std::domain_error("DriveProfile: sine needs finite amplitude and lambda > 0");
    DriveProfile d;
    d.kind_ = Kind::sine;
    d.amplitude_ = amplitude;
    d.lambda_ = lambda;
    return d;
}

DriveProfile DriveProfile::sampled(SampledCurve curve) {
    if (std::abs(curve.values().front()) > 1e-12)
        throw std::domain_error("DriveProfile: sampled drive must start at alpha(0) = 0");
    if (std::abs(curve.start()) > 1e-12)
        throw std::domain_error("DriveProfile: sampled drive must start at t = 0");
    DriveProfile d;
    d.kind_ = Kind::sampled;
    d.curve_ = std::move(curve);
    return d;
}

double DriveProfile::delta_strength() const {
    if (kind_ != Kind::delta) throw std::logic_error("DriveProfile: not a delta drive");
    return strength_;
}

double DriveProfile::eval(double t) const {
    switch (kind_) {
        case Kind::delta:
            throw std::logic_error("DriveProfile: delta drive has no pointwise value");
        case Kind::sine:
            return amplitude_ * std::sin(lambda_ * t);
        case Kind::sampled:
            return curve_.eval(t);
    }
    return 0.0;
}

double DriveProfile::coverage_max() const {
    switch (kind_) {
        case Kind::delta:
        case Kind::sine:
            return std::numeric_limits<double>::infinity();
        case Kind::sampled:
            return curve_.x_max();
    }
    return 0.0;
}

CouplingProfile CouplingProfile::gaussian(double width_a) {
    if (!(width_a > 0.0)) throw std::domain_error("CouplingProfile: gaussian width must be > 0");
    CouplingProfile p;
    p.kind_ = Kind::gaussian;
    p.role_ = Role::spatial;
    p.width_a_ = width_a;
    return p;
}

CouplingProfile CouplingProfile::lorentzian_k(double Gamma) {
    if (!(Gamma > 0.0)) throw std::domain_error("CouplingProfile: cutoff must be > 0");
    CouplingProfile p;
    p.kind_ = Kind::lorentzian_k;
    p.role_ = Role::spectral;
    p.cutoff_ = Gamma;
    return p;
}

CouplingProfile CouplingProfile::sampled(SampledCurve f, Role role) {
    CouplingProfile p;
    p.kind_ = Kind::sampled;
    p.role_ = role;

    double peak = 0.0;
    for (double v : f.values()) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) throw std::domain_error("CouplingProfile: sampled profile is identically zero");
    if (role == Role::spatial) {
        if (std::abs(f.values().front()) > 1e-6 * peak || std::abs(f.values().back()) > 1e-6 * peak)
            throw std::domain_error(
                "CouplingProfile: sampled spatial profile must decay below 1e-6 of peak at grid edges");
        // trapezoid integral of f^2; rescale so it equals 1
        double s = 0.0;
        const auto& v = f.values();
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            s += 0.5 * (v[i] * v[i] + v[i + 1] * v[i + 1]) * f.step();
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::domain_error("CouplingProfile: int f^2 must be finite and positive");
        p.norm_ = 1.0 / std::sqrt(s);
    }
    p.curve_ = std::move(f);
    return p;
}

double CouplingProfile::gaussian_width() const {
    if (kind_ != Kind::gaussian) throw std::logic_error("CouplingProfile: not a gaussian profile");
    return width_a_;
}

double CouplingProfile::cutoff() const {
    if (kind_ != Kind::lorentzian_k) throw std::logic_error("CouplingProfile: not a lorentzian window");
    return cutoff_;
}

double CouplingProfile::f(double x) const {
    switch (kind_) {
        case Kind::gaussian:
            return std::pow(2.0 * width_a_ / kPi, 0.25) * std::exp(-width_a_ * x * x);
        case Kind::lorentzian_k:
            return cutoff_ / std::sqrt(x * x + cutoff_ * cutoff_);
        case Kind::sampled: {
            if (x < curve_.start() || x > curve_.x_max()) return 0.0;
            return norm_ * curve_.eval(x);
        }
    }
    return 0.0;
}

double CouplingProfile::f2(double x) const {
    if (kind_ == Kind::lorentzian_k)
        return cutoff_ * cutoff_ / (x * x + cutoff_ * cutoff_);
    const double v = f(x);
    return v * v;
}

}  // namespace decolab
