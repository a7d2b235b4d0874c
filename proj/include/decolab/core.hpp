#pragma once
// Parameter records, drive/coupling profiles, and sampled-curve containers
// shared by the model modules. Everything is in natural units (hbar = kB = 1),
// so temperatures are inverse times and masses carry time/length^2.

#include <cmath>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace decolab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Collects non-fatal diagnostics (quadrature fallbacks, negative-exponent
// flags, closed-form discrepancies). Shareable across worker threads.
class WarningSink {
public:
    void push(std::string msg) {
        std::lock_guard<std::mutex> lock(mu_);
        messages_.push_back(std::move(msg));
    }
    std::vector<std::string> snapshot() const {
        std::lock_guard<std::mutex> lock(mu_);
        return messages_;
    }
    bool empty() const {
        std::lock_guard<std::mutex> lock(mu_);
        return messages_.empty();
    }

private:
    mutable std::mutex mu_;
    std::vector<std::string> messages_;
};

inline void warn(WarningSink* sink, const std::string& msg) {
    if (sink) sink->push(msg);
}

// Uniform-grid sampling of a scalar function of one variable. Evaluation
// between samples is linear interpolation; outside the grid it is an error.
class SampledCurve {
public:
    SampledCurve() = default;
    SampledCurve(double start, double step, std::vector<double> values)
        : start_(start), step_(step), values_(std::move(values)) {
        if (!(step_ > 0.0)) throw std::domain_error("SampledCurve: step must be > 0");
        if (values_.size() < 2) throw std::domain_error("SampledCurve: need at least 2 samples");
    }

    double eval(double x) const {
        const double tol = 1e-12 * (std::abs(x_max()) + std::abs(start_) + step_);
        if (x < start_ - tol || x > x_max() + tol)
            throw std::out_of_range("SampledCurve: x = " + std::to_string(x) +
                                    " outside [" + std::to_string(start_) + ", " +
                                    std::to_string(x_max()) + "]");
        double u = (x - start_) / step_;
        if (u <= 0.0) return values_.front();
        if (u >= double(values_.size() - 1)) return values_.back();
        const std::size_t i = static_cast<std::size_t>(u);
        const double f = u - double(i);
        return values_[i] * (1.0 - f) + values_[i + 1] * f;
    }

    double start() const { return start_; }
    double step() const { return step_; }
    double x_max() const { return start_ + step_ * double(values_.size() - 1); }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

private:
    double start_ = 0.0;
    double step_ = 1.0;
    std::vector<double> values_{0.0, 0.0};
};

// Brownian-particle and bath parameters. The strict flag records that the
// Gamma >> Omega >> gamma working regime was requested at construction.
struct OscillatorSpec {
    double M = 1.0;       // particle mass
    double Omega = 1.0;   // natural frequency
    double gamma = 0.0;   // dissipation rate
    double Gamma = 1.0;   // UV cutoff of the bath spectrum
    double T = 0.0;       // temperature (0 allowed)
    double a = 1.0;       // branch separation scale
    bool strict = true;

    // coupling strength from the dissipation rate: g^2 = 4 M gamma / pi
    double coupling_g2() const { return 4.0 * M * gamma / kPi; }
    // Lorentzian spectral window f_w^2 = Gamma^2 / (w^2 + Gamma^2)
    double window_f2(double w) const { return Gamma * Gamma / (w * w + Gamma * Gamma); }
};

OscillatorSpec make_oscillator_spec(double M, double Omega, double gamma, double Gamma,
                                    double T, double a, bool strict_regime = true);

// Enforces Gamma/Omega >= 10 and Omega/gamma >= 10; throws std::domain_error.
void require_strict_regime(const OscillatorSpec& spec);

// The c-number drive alpha(t). The delta variant stands for
// alpha(t) = strength * delta(t) with full boundary weight at t = 0.
class DriveProfile {
public:
    enum class Kind { delta, sine, sampled };

    static DriveProfile delta(double strength = 2.0);
    static DriveProfile sine(double amplitude, double lambda);
    static DriveProfile sampled(SampledCurve curve);

    Kind kind() const { return kind_; }
    bool is_delta() const { return kind_ == Kind::delta; }
    double delta_strength() const;
    // Pointwise value; not defined for the delta variant.
    double eval(double t) const;
    double coverage_max() const;  // largest t at which eval() is defined

private:
    DriveProfile() = default;
    Kind kind_ = Kind::delta;
    double strength_ = 2.0;    // delta
    double amplitude_ = 0.0;   // sine
    double lambda_ = 0.0;      // sine
    SampledCurve curve_;       // sampled
};

// Spatial window f(x) or spectral window f_k. Spatial profiles are
// normalized so that the squared integral is 1.
class CouplingProfile {
public:
    enum class Role { spatial, spectral };
    enum class Kind { gaussian, lorentzian_k, sampled };

    // f(y) = (2 a_g / pi)^(1/4) exp(-a_g y^2), int f^2 dy = 1
    static CouplingProfile gaussian(double width_a);
    // f_k^2 = Gamma^2 / (k^2 + Gamma^2)
    static CouplingProfile lorentzian_k(double Gamma);
    static CouplingProfile sampled(SampledCurve f, Role role);

    Kind kind() const { return kind_; }
    Role role() const { return role_; }
    double gaussian_width() const;
    double cutoff() const;

    double f(double x) const;    // amplitude (normalized for spatial profiles)
    double f2(double x) const;   // squared amplitude
    const SampledCurve& curve() const { return curve_; }

private:
    CouplingProfile() = default;
    Kind kind_ = Kind::gaussian;
    Role role_ = Role::spatial;
    double width_a_ = 1.0;
    double cutoff_ = 1.0;
    double norm_ = 1.0;  // multiplies sampled values so that int f^2 = 1
    SampledCurve curve_;
};

}  // namespace decolab
