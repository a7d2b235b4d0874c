#include "decolab/mattress.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace decolab::mattress {

OverlapModel OverlapModel::gaussian(double width_a) {
    if (!(width_a > 0.0)) throw std::domain_error("OverlapModel: gaussian width must be > 0");
    OverlapModel m;
    m.kind_ = Kind::gaussian;
    m.width_a_ = width_a;
    return m;
}

OverlapModel OverlapModel::from_profile(const CouplingProfile& profile) {
    if (profile.role() != CouplingProfile::Role::spatial)
        throw std::domain_error("OverlapModel: spatial profile required");
    if (profile.kind() == CouplingProfile::Kind::gaussian)
        return gaussian(profile.gaussian_width());
    OverlapModel m;
    m.kind_ = Kind::sampled;
    m.profile_ = profile;
    return m;
}

OverlapModel OverlapModel::parabolic(double u2) {
    if (!(u2 > 0.0)) throw std::domain_error("OverlapModel: parabolic curvature must be > 0");
    OverlapModel m;
    m.kind_ = Kind::parabolic;
    m.u2_ = u2;
    return m;
}

namespace {

// overlap of a sampled profile with its own shift: 1 - Int f(y) f(y - d) dy
double sampled_overlap(const CouplingProfile& p, double d) {
    const SampledCurve& c = p.curve();
    const double h = c.step();
    double corr = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double y = c.start() + h * double(i);
        const double w = (i == 0 || i + 1 == c.size()) ? 0.5 : 1.0;
        corr += w * p.f(y) * p.f(y - d);
    }
    return 1.0 - corr * h;  // profile is normalized to Int f^2 = 1
}

}  // namespace

double OverlapModel::u(double d) const {
    switch (kind_) {
        case Kind::gaussian:
            return -std::expm1(-0.5 * width_a_ * d * d);
        case Kind::parabolic:
            return 0.5 * u2_ * d * d;
        case Kind::sampled:
            return sampled_overlap(profile_, d);
    }
    return 0.0;
}

double OverlapModel::du(double d) const {
    switch (kind_) {
        case Kind::gaussian:
            return width_a_ * d * std::exp(-0.5 * width_a_ * d * d);
        case Kind::parabolic:
            return u2_ * d;
        case Kind::sampled: {
            // stencil spacing = whole grid steps: the interpolation error is
            // periodic in the grid phase and cancels between same-phase points
            const double h = 2.0 * profile_.curve().step();
            return (-u(d + 2 * h) + 8 * u(d + h) - 8 * u(d - h) + u(d - 2 * h)) / (12 * h);
        }
    }
    return 0.0;
}

double OverlapModel::d2u(double d) const {
    switch (kind_) {
        case Kind::gaussian:
            return width_a_ * (1.0 - width_a_ * d * d) * std::exp(-0.5 * width_a_ * d * d);
        case Kind::parabolic:
            return u2_;
        case Kind::sampled: {
            const double h = 2.0 * profile_.curve().step();
            return (-u(d + 2 * h) + 16 * u(d + h) - 30 * u(d) + 16 * u(d - h) - u(d - 2 * h)) /
                   (12 * h * h);
        }
    }
    return 0.0;
}

double OverlapModel::suggested_window() const {
    switch (kind_) {
        case Kind::gaussian:
            return 10.0 / std::sqrt(width_a_);
        case Kind::parabolic:
            return 100.0;
        case Kind::sampled:
            return profile_.curve().x_max() - profile_.curve().start();
    }
    return 10.0;
}

MattressSpec make_mattress_spec(double M, double mu, double T, OverlapModel overlap) {
    // mu = 0 is admitted: it recovers the free-particle and dissipationless
    // reference limits used by the oracles
    if (!(M > 0.0) || mu < 0.0 || !(T > 0.0))
        throw std::domain_error("MattressSpec: need M > 0, mu >= 0, T > 0");
    return MattressSpec{M, mu, T, std::move(overlap)};
}

double overlap_U(const MattressSpec& spec, double delta) { return spec.overlap.u(delta); }
double overlap_U_prime(const MattressSpec& spec, double delta) { return spec.overlap.du(delta); }
double overlap_U_second(const MattressSpec& spec, double delta) { return spec.overlap.d2u(delta); }

double delta_trajectory(const MattressSpec& spec, double k, double delta_f, double t,
                        double t_query, const num::OdeSettings& settings) {
    if (!(t >= t_query) || t_query < 0.0)
        throw std::domain_error("delta_trajectory: need t >= t_query >= 0");
    if (t == t_query) return delta_f;
    auto rhs = [&](double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = (k + 2.0 * spec.mu * spec.overlap.du(y[0])) / spec.M;
    };
    return num::ode_integrate<1>(rhs, {delta_f}, t, t_query, settings)[0];
}

double shoot_K(const MattressSpec& spec, double delta_f, double delta_i, double t,
               const num::OdeSettings& settings) {
    if (!(t > 0.0)) throw std::domain_error("shoot_K: t > 0 required");
    auto residual = [&](double k) {
        return delta_trajectory(spec, k, delta_f, t, 0.0, settings) - delta_i;
    };
    // Delta(0) is strictly decreasing in k, so expand a bracket around the
    // free-particle guess until the residual changes sign.
    const double k0 = spec.M * (delta_f - delta_i) / t;
    double width = std::max(1.0, std::abs(k0));
    double lo = k0 - width, hi = k0 + width;
    double flo = residual(lo), fhi = residual(hi);
    int tries = 0;
    while (flo * fhi > 0.0) {
        if (++tries > 60)
            throw std::runtime_error("shoot_K: no bracket found in [" + std::to_string(lo) + ", " +
                                     std::to_string(hi) + "]");
        width *= 2.0;
        lo = k0 - width;
        hi = k0 + width;
        flo = residual(lo);
        fhi = residual(hi);
    }
    const double tol = 1e-12 * std::max(1.0, std::abs(k0));
    return num::shoot_scalar(residual, lo, hi, tol);
}

double jacobian_dDelta0_dk(const MattressSpec& spec, double k, double delta_f, double t,
                           const num::OdeSettings& settings) {
    if (!(t > 0.0)) throw std::domain_error("jacobian_dDelta0_dk: t > 0 required");
    return solve_node(spec, k, delta_f, t, settings).jacobian;
}

double normalization_N(const MattressSpec& spec, double t) {
    if (!(t > 0.0)) throw std::domain_error("normalization_N: t > 0 required");
    const double u2 = spec.overlap.d2u(0.0);
    const double x = (2.0 * spec.mu / spec.M) * u2 * t;
    if (std::abs(x) < 1e-12) return spec.M / t;  // mu -> 0 limit
    return 2.0 * spec.mu * u2 / (-std::expm1(-x));
}

RengiwGrid make_rengiw_grid(Axis k_axis, Axis d_axis) {
    if (k_axis.count < 2 || d_axis.count < 2 || !(k_axis.step > 0.0) || !(d_axis.step > 0.0))
        throw std::domain_error("RengiwGrid: axes need step > 0 and at least 2 nodes");
    RengiwGrid g;
    g.k_axis = k_axis;
    g.d_axis = d_axis;
    g.values.assign(std::size_t(k_axis.count) * d_axis.count, {0.0, 0.0});
    return g;
}

std::complex<double> rengiw_interpolate(const RengiwGrid& grid, double k, double d) {
    const auto& ka = grid.k_axis;
    const auto& da = grid.d_axis;
    const double uk = (k - ka.start) / ka.step;
    const double ud = (d - da.start) / da.step;
    const double tol = 1e-9;
    if (uk < -tol || uk > ka.count - 1 + tol || ud < -tol || ud > da.count - 1 + tol)
        throw std::out_of_range("rengiw_interpolate: point outside grid");
    const int ik = std::clamp(int(uk), 0, ka.count - 2);
    const int id = std::clamp(int(ud), 0, da.count - 2);
    const double fk = std::clamp(uk - ik, 0.0, 1.0);
    const double fd = std::clamp(ud - id, 0.0, 1.0);
    return grid.at(ik, id) * ((1 - fk) * (1 - fd)) + grid.at(ik + 1, id) * (fk * (1 - fd)) +
           grid.at(ik, id + 1) * ((1 - fk) * fd) + grid.at(ik + 1, id + 1) * (fk * fd);
}

double hermiticity_defect(const RengiwGrid& grid) {
    double worst = 0.0;
    const auto& ka = grid.k_axis;
    const auto& da = grid.d_axis;
    for (int ik = 0; ik < ka.count; ++ik) {
        const double mk = -ka.at(ik);
        const double ukm = (mk - ka.start) / ka.step;
        const int jk = int(std::lround(ukm));
        if (jk < 0 || jk >= ka.count || std::abs(ukm - jk) > 1e-9) continue;
        for (int id = 0; id < da.count; ++id) {
            const double md = -da.at(id);
            const double udm = (md - da.start) / da.step;
            const int jd = int(std::lround(udm));
            if (jd < 0 || jd >= da.count || std::abs(udm - jd) > 1e-9) continue;
            worst = std::max(worst, std::abs(grid.at(ik, id) - std::conj(grid.at(jk, jd))));
        }
    }
    return worst;
}

NodeSolution solve_node(const MattressSpec& spec, double k, double delta_f, double t,
                        const num::OdeSettings& settings) {
    if (!(t > 0.0)) throw std::domain_error("solve_node: t > 0 required");
    // One backward pass: trajectory, running Int U, and the Jacobian through
    // H(s) = (2 mu/M) Int_s^t U'', K(s) = Int_s^t e^H.
    auto rhs = [&](double, const std::array<double, 4>& y, std::array<double, 4>& dy) {
        dy[0] = (k + 2.0 * spec.mu * spec.overlap.du(y[0])) / spec.M;
        dy[1] = spec.overlap.u(y[0]);
        dy[2] = -(2.0 * spec.mu / spec.M) * spec.overlap.d2u(y[0]);
        dy[3] = -std::exp(y[2]);
    };
    const auto out = num::ode_integrate<4>(rhs, {delta_f, 0.0, 0.0, 0.0}, t, 0.0, settings);
    NodeSolution n;
    n.delta0 = out[0];
    n.weight_exponent = -out[1];                        // Int_0^t U(Delta) dt'
    n.jacobian = -std::exp(-out[2]) * out[3] / spec.M;  // -(1/M) e^{-H(0)} K(0)
    return n;
}

RengiwGrid propagate_rengiw(const MattressSpec& spec, const RengiwGrid& R0, double t,
                            const num::OdeSettings& settings, WarningSink* sink) {
    return propagate_rengiw(spec, R0, t, R0.k_axis, R0.d_axis, settings, sink);
}

RengiwGrid propagate_rengiw(const MattressSpec& spec, const RengiwGrid& R0, double t,
                            const Axis& out_k_axis, const Axis& out_d_axis,
                            const num::OdeSettings& settings, WarningSink* sink) {
    if (!(t > 0.0)) throw std::domain_error("propagate_rengiw: t > 0 required");
    const Axis& ka = out_k_axis;
    const Axis& da = out_d_axis;
    const Axis& src_d = R0.d_axis;

    // Coverage pre-check: Delta(0) is monotone in both k and Delta_f, so the
    // four output-grid corners bound every back-propagated separation.
    const double corner_k[2] = {ka.start, ka.max()};
    const double corner_d[2] = {da.start, da.max()};
    for (double k : corner_k)
        for (double d : corner_d) {
            const double d0 = solve_node(spec, k, d, t, settings).delta0;
            if (d0 < src_d.start - 1e-9 * std::max(1.0, std::abs(src_d.start)) ||
                d0 > src_d.max() + 1e-9 * std::max(1.0, std::abs(src_d.max())))
                throw std::out_of_range(
                    "propagate_rengiw: Delta axis does not cover Delta(0) = " + std::to_string(d0) +
                    " back-propagated from corner (k = " + std::to_string(k) +
                    ", Delta_f = " + std::to_string(d) + ")");
        }

    RengiwGrid out = make_rengiw_grid(ka, da);
    const double N = normalization_N(spec, t);

    std::atomic<bool> premise_flagged{false};
    auto run_rows = [&](int begin, int stride) {
        for (int ik = begin; ik < ka.count; ik += stride) {
            const double k = ka.at(ik);
            for (int id = 0; id < da.count; ++id) {
                const double df = da.at(id);
                const NodeSolution n = solve_node(spec, k, df, t, settings);
                const double weight = std::exp(-4.0 * spec.mu * spec.T * n.weight_exponent);
                const std::complex<double> r0 = rengiw_interpolate(R0, k, n.delta0);
                out.at(ik, id) = N * weight * std::abs(n.jacobian) * r0;
                if (sink && !premise_flagged.load(std::memory_order_relaxed)) {
                    // thermal-validity diagnostic: U'' > 2 M T U at the endpoint
                    const double u = spec.overlap.u(df);
                    const double u2 = spec.overlap.d2u(df);
                    if (df != 0.0 && u2 > 2.0 * spec.M * spec.T * u && u2 > 0.0) {
                        premise_flagged.store(true, std::memory_order_relaxed);
                        warn(sink, "propagate_rengiw: thermal premise U'' <= 2 M T U violated near "
                                   "Delta_f = " + std::to_string(df) + " (diagnostic, not an error)");
                    }
                }
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = int(std::min<unsigned>(hw, 8));
    if (workers > 1 && ka.count >= workers) {
        std::vector<std::thread> pool;
        std::exception_ptr first_error;
        std::mutex err_mu;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w]() {
                try {
                    run_rows(w, workers);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    } else {
        run_rows(0, 1);
    }
    return out;
}

SigmaDeltaGrid rho_from_rengiw(const RengiwGrid& R) {
    const auto& ka = R.k_axis;
    const int n = ka.count;
    SigmaDeltaGrid out;
    out.d_axis = R.d_axis;
    const double dsigma = 2.0 * kPi / (n * ka.step);
    out.sigma_axis = Axis{-dsigma * double(n / 2), dsigma, n};  // Sigma = 0 on-grid
    out.values.assign(std::size_t(n) * R.d_axis.count, {0.0, 0.0});
    for (int is = 0; is < n; ++is) {
        const double sigma = out.sigma_axis.at(is);
        for (int id = 0; id < R.d_axis.count; ++id) {
            std::complex<double> acc{0.0, 0.0};
            for (int ik = 0; ik < n; ++ik) {
                const double phase = ka.at(ik) * sigma;
                acc += R.at(ik, id) * std::complex<double>(std::cos(phase), std::sin(phase));
            }
            out.at(is, id) = acc * (ka.step / (2.0 * kPi));
        }
    }
    return out;
}

RengiwGrid rengiw_from_rho(const SigmaDeltaGrid& rho, const Axis& k_axis) {
    RengiwGrid out = make_rengiw_grid(k_axis, rho.d_axis);
    const auto& sa = rho.sigma_axis;
    for (int ik = 0; ik < k_axis.count; ++ik) {
        const double k = k_axis.at(ik);
        for (int id = 0; id < rho.d_axis.count; ++id) {
            std::complex<double> acc{0.0, 0.0};
            for (int is = 0; is < sa.count; ++is) {
                const double phase = -k * sa.at(is);
                acc += rho.at(is, id) * std::complex<double>(std::cos(phase), std::sin(phase));
            }
            out.at(ik, id) = acc * sa.step;
        }
    }
    return out;
}

std::vector<FixedPoint> fixed_points(const MattressSpec& spec, double k, double window,
                                     int scan_points) {
    if (window <= 0.0) window = spec.overlap.suggested_window();
    if (scan_points < 16) throw std::domain_error("fixed_points: scan_points >= 16 required");
    auto g = [&](double d) { return 2.0 * spec.mu * spec.overlap.du(d) + k; };

    std::vector<FixedPoint> roots;
    const double h = 2.0 * window / double(scan_points - 1);
    double x_prev = -window;
    double g_prev = g(x_prev);
    auto push_root = [&](double d) {
        const double u2 = spec.overlap.d2u(d);
        roots.push_back({d, u2 > 0.0 ? Stability::unstable : Stability::stable});
    };
    if (g_prev == 0.0) push_root(x_prev);
    for (int i = 1; i < scan_points; ++i) {
        const double x = -window + h * double(i);
        const double gx = g(x);
        if (gx == 0.0) {
            push_root(x);
        } else if (g_prev * gx < 0.0) {
            const double root = num::shoot_scalar(g, x_prev, x, 1e-13 * std::max(1.0, window));
            push_root(root);
        }
        x_prev = x;
        g_prev = gx;
    }
    // a sign change in the outermost cells means the window clipped a root
    if (!roots.empty()) {
        const double edge = window - h;
        for (const FixedPoint& r : roots)
            if (std::abs(r.delta_star) > edge)
                throw std::runtime_error("fixed_points: root at the scan boundary, enlarge window");
    }
    return roots;
}

}  // namespace decolab::mattress
