#pragma once
// Quantum-field environments: thermal propagators, dipole noise/dissipation
// kernels, overdamped master-equation coefficients V_n/V_d, the
// constant-separation decoherence exponent D_L(t) (radial quadrature and
// validated closed forms), a 1-D grid master-equation evolver, and the
// conducting-plate dissipation formula.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "decolab/core.hpp"
#include "decolab/numerics.hpp"

namespace decolab::field {

struct FieldSpec {
    int n = 3;          // spatial dimension, 1 or 3
    double g = 1.0;     // coupling
    double beta = 1.0;  // inverse temperature; infinity means T = 0
    CouplingProfile window = CouplingProfile::lorentzian_k(1.0);

    bool zero_temperature() const { return !std::isfinite(beta); }
    double cutoff() const { return window.cutoff(); }
    double temperature() const { return zero_temperature() ? 0.0 : 1.0 / beta; }
};

FieldSpec make_field_spec(int n, double g, double beta,
                          CouplingProfile window = CouplingProfile::lorentzian_k(1.0));
// Convenience: T = 0 selects beta = infinity.
FieldSpec make_field_spec_T(int n, double g, double Gamma, double T);

struct DampedPropagatorSpec {
    std::function<double(double)> omega;   // dispersion w(k) > 0 for k > 0
    std::function<double(double)> lambda;  // damping L(k) >= 0
    double beta = 1.0;                     // infinity allowed
};

struct PropagatorPair {
    double G_r;
    double G_h;
};

// Free massless field: G_r = sin(k dt)/(2k), G_h = cos(k dt) coth(beta k/2)/(2k).
PropagatorPair propagators_free(double k, double dt, double beta);

// Damped form G_r = e^{-L|dt|} sin(w dt)/(2w),
// G_h = e^{-L|dt|} [sinh(bw) cos(w dt) + sin(bL) sin(w|dt|)] / (2w (cosh bw - cos bL)).
PropagatorPair propagators_damped(const DampedPropagatorSpec& pspec, double k, double dt);

struct DipoleKernels {
    double eta = 0.0;  // dissipation kernel
    double nu = 0.0;   // noise kernel
    bool eta_converged = false;
    bool nu_converged = false;
};

// eta(t), nu(t) as radial integrals of k^2 f_k^2 G_{r,h}(k, t) with the
// n-dimensional measure and the 1/(2n) dipole prefactor. Free-field overload
// and damped overload.
DipoleKernels dipole_kernels(const FieldSpec& fspec, double t,
                             const num::QuadratureSettings& settings = {},
                             WarningSink* sink = nullptr);
DipoleKernels dipole_kernels(const FieldSpec& fspec, const DampedPropagatorSpec& pspec, double t,
                             const num::QuadratureSettings& settings = {},
                             WarningSink* sink = nullptr);

struct OverdampedCoefficients {
    double V_n = 0.0;  // decoherence rate coefficient
    double V_d = 0.0;  // dissipation coefficient
    bool converged = false;
};

// V_n(r), V_d(r) of the overdamped (local) limit; the angular averages are
// n=1: 1 - cos kr and k^2 sinc kr, n=3: 1 - sinc kr and k^2 j1(kr)/(kr).
// Real forms throughout (the formal -i has no place in a decay rate).
OverdampedCoefficients overdamped_Vn_Vd(const FieldSpec& fspec,
                                        const DampedPropagatorSpec& pspec, double r,
                                        const num::QuadratureSettings& settings = {},
                                        WarningSink* sink = nullptr);

// Constant-separation decoherence exponent by radial quadrature:
// n=1: (2 g^2/pi) Int dk/k^3 f_k^2 sin^2(kt/2) coth(beta k/2) (1 - cos kL)
// n=3: (g^2/pi^2) Int dk/k  f_k^2 sin^2(kt/2) coth(beta k/2) (1 - sinc kL)
double decoherence_DL_numeric(const FieldSpec& fspec, double t, double L,
                              const num::QuadratureSettings& settings = {},
                              WarningSink* sink = nullptr);

// Closed forms. `printed` evaluates the transcribed formulas verbatim;
// `shipped` evaluates the quadrature-validated ones (they differ for n = 3,
// see the validation report). Lorentzian window required.
enum class ClosedForm { shipped, printed };

// High temperature (T >> Gamma), overall scale g^2 T / Gamma^3 (n=1) and
// g^2 T / (2 pi Gamma) (n=3).
double decoherence_DL_highT(const FieldSpec& fspec, double t, double L,
                            ClosedForm form = ClosedForm::shipped);

// Zero temperature, in terms of kappa_n; scale g^2/(pi Gamma^2) for n=1 and
// g^2/(2 pi^2) for n=3.
double decoherence_DL_zeroT(const FieldSpec& fspec, double t, double L,
                            ClosedForm form = ClosedForm::shipped);

struct ClosedFormCaseReport {
    std::string name;
    double max_rel_dev_shipped = 0.0;
    double max_rel_dev_printed = 0.0;
    double max_pair_asymmetry = 0.0;  // max |D(t,L) - D(L,t)| from the quadrature
    double max_value = 0.0;
    bool shipped_ok = false;
    bool printed_ok = false;
};

struct ValidationReport {
    std::vector<ClosedFormCaseReport> cases;
    double tolerance = 0.005;
    std::vector<std::string> to_lines() const;  // machine-readable key: value rows
};

// Compares quadrature against both closed-form variants on an (t, L) grid
// spanning [0, span/Gamma]^2; deviations are measured where
// D > 1e-6 * max(D). Discrepancies are also pushed to the sink.
ValidationReport validate_closed_forms(double g, double Gamma, double T_high, int grid_n = 21,
                                       double span = 10.0, double tol = 0.005,
                                       WarningSink* sink = nullptr);

struct DensityGrid {
    // square grid rho(x_i, x'_j), shared axis
    double x_start = 0.0;
    double x_step = 1.0;
    int count = 0;
    std::vector<std::complex<double>> values;  // row-major
    double mass = 1.0;
    double time = 0.0;

    double x(int i) const { return x_start + x_step * i; }
    std::complex<double>& at(int i, int j) { return values[std::size_t(i) * count + j]; }
    const std::complex<double>& at(int i, int j) const {
        return values[std::size_t(i) * count + j];
    }
};

DensityGrid make_density_grid(double x_start, double x_step, int count, double mass);

double density_trace(const DensityGrid& grid);          // diagonal sum x step
double density_hermiticity_defect(const DensityGrid& grid);

struct Hamiltonian1D {
    enum class Kind { zero, free_particle, harmonic } kind = Kind::free_particle;
    double Omega = 0.0;
    static Hamiltonian1D none() { return {Kind::zero, 0.0}; }  // pure-decoherence runs
    static Hamiltonian1D free_particle() { return {Kind::free_particle, 0.0}; }
    static Hamiltonian1D harmonic(double Omega) { return {Kind::harmonic, Omega}; }
};

// V_n, V_d tabulated on the |x - x'| lattice (index = node distance).
struct MasterCoefficients {
    std::vector<double> V_n;
    std::vector<double> V_d;
};

MasterCoefficients make_master_coefficients(const FieldSpec& fspec,
                                            const DampedPropagatorSpec& pspec,
                                            const DensityGrid& grid,
                                            const num::QuadratureSettings& settings = {},
                                            WarningSink* sink = nullptr);

// i drho/dt = [H(x) - H(x')] rho + i (1/M) V_d (x - x')(d_x - d_x') rho - i V_n rho,
// centered differences in space, classical RK4 in time. An up-front
// stability estimate rejects dt beyond the explicit-scheme limit.
DensityGrid evolve_master(const DensityGrid& grid, const MasterCoefficients& coeffs,
                          const Hamiltonian1D& ham, double dt, int steps);

// P = Q^2 rho_r v^2 / (16 pi z^3), times 2b/(3z) for a semiconductor layer.
double plate_power(double Q, double resistivity, double v, double z,
                   std::optional<double> layer_b = std::nullopt);

}  // namespace decolab::field
