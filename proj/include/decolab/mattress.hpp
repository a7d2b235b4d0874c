#pragma once
// Exact-solution machinery for the locally coupled "mattress" environment:
// overlap function U, the first-order characteristic ODE, shooting between
// endpoint separations, the trajectory Jacobian, normalization, propagation
// of the (k, Delta) representation, and fixed-point classification.

#include <complex>
#include <functional>
#include <vector>

#include "decolab/core.hpp"
#include "decolab/numerics.hpp"

namespace decolab::mattress {

// Overlap noise kernel U(Delta) = Int f(y)[f(y) - f(y - Delta)] dy together
// with its first two derivatives. The parabolic variant u2 Delta^2 / 2 is the
// linear (Caldeira-Leggett) reference model used by the exactness oracles.
class OverlapModel {
public:
    static OverlapModel gaussian(double width_a);
    static OverlapModel from_profile(const CouplingProfile& profile);
    static OverlapModel parabolic(double u2);

    double u(double d) const;
    double du(double d) const;
    double d2u(double d) const;
    double suggested_window() const;  // root-scan half-width

private:
    OverlapModel() = default;
    enum class Kind { gaussian, sampled, parabolic } kind_ = Kind::gaussian;
    double width_a_ = 1.0;
    double u2_ = 1.0;
    CouplingProfile profile_ = CouplingProfile::gaussian(1.0);
};

struct MattressSpec {
    double M = 1.0;   // particle mass
    double mu = 1.0;  // continuum coupling g^2 / 4d
    double T = 1.0;   // temperature
    OverlapModel overlap = OverlapModel::gaussian(1.0);
};

MattressSpec make_mattress_spec(double M, double mu, double T, OverlapModel overlap);

double overlap_U(const MattressSpec& spec, double delta);
double overlap_U_prime(const MattressSpec& spec, double delta);
double overlap_U_second(const MattressSpec& spec, double delta);

// Characteristic trajectory: M dDelta/dt' = k + 2 mu U'(Delta), integrated
// backward from the single condition Delta(t) = delta_f down to t_query.
double delta_trajectory(const MattressSpec& spec, double k, double delta_f, double t,
                        double t_query, const num::OdeSettings& settings = {});

// The constant K with delta_trajectory(spec, K, delta_f, t, 0) = delta_i.
double shoot_K(const MattressSpec& spec, double delta_f, double delta_i, double t,
               const num::OdeSettings& settings = {});

// dDelta(0)/dk = -(1/M) Int_0^t dt' exp[-(2 mu/M) Int_0^{t'} U''(Delta)],
// evaluated along the back-propagated trajectory in one pass.
double jacobian_dDelta0_dk(const MattressSpec& spec, double k, double delta_f, double t,
                           const num::OdeSettings& settings = {});

// N(t) = 2 mu U''(0) / (1 - e^{-(2 mu / M) U''(0) t}).
double normalization_N(const MattressSpec& spec, double t);

// Everything one grid node needs from its back-propagated trajectory.
struct NodeSolution {
    double delta0;           // Delta(0)
    double weight_exponent;  // Int_0^t U(Delta(t')) dt'
    double jacobian;         // dDelta(0)/dk (signed)
};

NodeSolution solve_node(const MattressSpec& spec, double k, double delta_f, double t,
                        const num::OdeSettings& settings = {});

struct Axis {
    double start = 0.0;
    double step = 1.0;
    int count = 0;
    double at(int i) const { return start + step * i; }
    double max() const { return start + step * (count - 1); }
};

struct RengiwGrid {
    Axis k_axis;
    Axis d_axis;
    std::vector<std::complex<double>> values;  // row-major over (k, Delta)

    std::complex<double>& at(int ik, int id) { return values[std::size_t(ik) * d_axis.count + id]; }
    const std::complex<double>& at(int ik, int id) const {
        return values[std::size_t(ik) * d_axis.count + id];
    }
};

RengiwGrid make_rengiw_grid(Axis k_axis, Axis d_axis);

// Bilinear interpolation in (k, Delta); error outside the axes.
std::complex<double> rengiw_interpolate(const RengiwGrid& grid, double k, double d);

// Full Hermiticity defect max |R(k, Delta) - conj(R(-k, -Delta))| over nodes
// whose mirror lies on the grid.
double hermiticity_defect(const RengiwGrid& grid);

// One-step propagation by time t: back-solve each node's trajectory,
// accumulate the thermal weight exp[-4 mu T Int U], pick up R0 at Delta(0)
// and the Jacobian |dDelta(0)/dk|, normalize with N(t). Output nodes whose
// back-propagated Delta(0) leaves R0's Delta axis are a coverage error;
// because the flow drifts outward at the axis ends for one sign of k, the
// optional output axes let the result live on a narrower window than R0.
// Nodes violating the thermal-validity premise U'' > 2 M T U (natural
// units) raise a per-node diagnostic warning, not an error.
RengiwGrid propagate_rengiw(const MattressSpec& spec, const RengiwGrid& R0, double t,
                            const num::OdeSettings& settings = {}, WarningSink* sink = nullptr);
RengiwGrid propagate_rengiw(const MattressSpec& spec, const RengiwGrid& R0, double t,
                            const Axis& out_k_axis, const Axis& out_d_axis,
                            const num::OdeSettings& settings = {}, WarningSink* sink = nullptr);

struct SigmaDeltaGrid {
    Axis sigma_axis;
    Axis d_axis;
    std::vector<std::complex<double>> values;  // row-major over (sigma, Delta)

    std::complex<double>& at(int is, int id) {
        return values[std::size_t(is) * d_axis.count + id];
    }
    const std::complex<double>& at(int is, int id) const {
        return values[std::size_t(is) * d_axis.count + id];
    }
};

// rho(Sigma + Delta/2, Sigma - Delta/2) = Int dk/(2 pi) e^{i k Sigma} R(k, Delta)
// as a discrete transform along k, for each Delta row; Sigma on the grid
// conjugate to the k axis.
SigmaDeltaGrid rho_from_rengiw(const RengiwGrid& R);

// Inverse transform, for round-trip checks.
RengiwGrid rengiw_from_rho(const SigmaDeltaGrid& rho, const Axis& k_axis);

enum class Stability { stable, unstable };

struct FixedPoint {
    double delta_star;
    Stability stability;
};

// All real roots of 2 mu U'(Delta) + k = 0 in [-window, window] by sign scan
// plus bisection; stability from the sign of U''. window <= 0 selects the
// profile's suggested scan width.
std::vector<FixedPoint> fixed_points(const MattressSpec& spec, double k, double window = 0.0,
                                     int scan_points = 4096);

}  // namespace decolab::mattress
