#pragma once
// Command-line front end: flat key=value configs with a model section header,
// sweep execution with deterministic CSV output, manifest emission, and the
// figure-data generators.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "decolab/core.hpp"

namespace decolab::cli {

inline constexpr const char* kToolVersion = "decolab 0.1.0";

struct SweepAxis {
    std::string param;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
};

struct RunConfig {
    std::string model;  // ohmic | driven | mattress | field | plate
    std::map<std::string, double> params;
    std::string quantity;  // per-model default when empty
    std::vector<SweepAxis> sweeps;  // at most 2
    std::string out_dir;
    std::optional<double> tol_override;
    int workers = 1;
    std::vector<std::string> config_lines;  // echo for the manifest
    std::string origin;                     // path or "<inline>"
};

// Parses and validates a config; throws std::invalid_argument with the line
// and key named on any problem (unknown model, unknown parameter, malformed
// sweep, more than two sweep axes).
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

struct RunOutput {
    int exit_code = 0;  // 0 clean, 1 warnings, 2 error
    std::vector<std::string> files;
    std::vector<std::string> warnings;
    std::string error;
};

// Executes a config: one CSV per requested quantity plus a manifest.
RunOutput run(const RunConfig& config);

struct FigParams {
    double g = 1.0;
    double Gamma = 1.0;
    double T = 1.0;  // high-temperature scale for the thermal cases
};

// Long-format (Gamma t, Gamma L, D) grid for the n = 3 high-temperature
// surface; axes in cutoff units. The manifest carries the symmetric-pair
// report max |D(t, L) - D(L, t)| measured on the emitted grid.
RunOutput fig1_grid(const FigParams& params, double t_max_gamma, double L_max_gamma,
                    int resolution, const std::string& out_dir, bool numeric = false,
                    int workers = 1, bool validate = true);

// Per-case slices D_L(m / Gamma), m = 1, 2, 3, for the four (n, T) cases.
RunOutput fig2_slices(const FigParams& params, double L_max_gamma, int points,
                      const std::string& out_dir, int workers = 1, bool validate = true);

// 17 significant digits, scientific; lossless for doubles.
std::string csv_format(double v);
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace decolab::cli
