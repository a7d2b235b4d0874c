#include "decolab/run.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "decolab/driven.hpp"
#include "decolab/field.hpp"
#include "decolab/mattress.hpp"
#include "decolab/numerics.hpp"
#include "decolab/ohmic.hpp"

namespace decolab::cli {

namespace fs = std::filesystem;

std::string csv_format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>>& model_parameters() {
    static const std::map<std::string, std::set<std::string>> table = {
        {"ohmic", {"M", "Omega", "gamma", "Gamma", "T", "a", "t", "strict"}},
        {"driven",
         {"M", "Omega", "gamma", "Gamma", "T", "a", "t", "strength", "amplitude", "Lambda",
          "samples", "drive_sine"}},
        {"mattress", {"M", "mu", "T", "a_g", "Delta", "t", "k", "window"}},
        {"field", {"n", "g", "Gamma", "T", "t", "L", "r", "Lambda0"}},
        {"plate", {"Q", "rho", "v", "z", "b"}},
    };
    return table;
}

const std::map<std::string, std::set<std::string>>& model_quantities() {
    static const std::map<std::string, std::set<std::string>> table = {
        {"ohmic", {"D", "D_highT"}},
        {"driven", {"D_alpha"}},
        {"mattress", {"U", "N", "fixed_points"}},
        {"field", {"DL", "DL_highT", "DL_zeroT", "Vn", "Vd"}},
        {"plate", {"P"}},
    };
    return table;
}

std::string default_quantity(const std::string& model) {
    if (model == "ohmic") return "D";
    if (model == "driven") return "D_alpha";
    if (model == "mattress") return "U";
    if (model == "field") return "DL";
    return "P";
}

double parse_number(const std::string& value, const std::string& key, int line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": value for '" +
                                    key + "' is not a number: " + value);
    }
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
    workers = std::max(1, workers);
    if (workers == 1 || n < 2 * workers) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct ManifestWriter {
    std::vector<std::string> lines;
    void kv(const std::string& k, const std::string& v) { lines.push_back(k + ": " + v); }
    // atomic: write to a temporary, then rename over the target
    void write(const fs::path& dir) const {
        const fs::path tmp = dir / "manifest.txt.tmp";
        const fs::path dst = dir / "manifest.txt";
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            for (const auto& l : lines) os << l << "\n";
        }
        fs::rename(tmp, dst);
    }
};

std::string write_csv(const fs::path& dir, const std::string& name,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ostringstream body;
    for (std::size_t i = 0; i < header.size(); ++i) body << (i ? "," : "") << header[i];
    body << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) body << (i ? "," : "") << csv_format(row[i]);
        body << "\n";
    }
    const std::string text = body.str();
    std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
    os << text;
    return text;
}

void manifest_output_entry(ManifestWriter& mw, const fs::path& dir, const std::string& name,
                           const std::string& content) {
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx", (unsigned long long)fnv1a64(content));
    mw.kv("output", name + " bytes=" + std::to_string(content.size()) + " fnv1a64=" + hex);
    (void)dir;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.origin = origin;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        cfg.config_lines.push_back(raw);
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": malformed section header");
            const std::string model = trim(line.substr(1, line.size() - 2));
            if (!model_parameters().count(model))
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": unknown model '" + model + "'");
            if (!cfg.model.empty())
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": exactly one model section allowed");
            cfg.model = model;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (cfg.model.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": key '" + key + "' before any model section");

        if (key == "sweep" || key == "sweep2") {
            std::istringstream ss(value);
            SweepAxis ax;
            if (!(ss >> ax.param >> ax.start >> ax.stop >> ax.count) || ax.count < 1)
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": sweep needs '<param> <start> <stop> <count>'");
            cfg.sweeps.push_back(ax);
            if (cfg.sweeps.size() > 2)
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": at most 2 sweep axes supported");
            continue;
        }
        if (key == "out") {
            cfg.out_dir = value;
            continue;
        }
        if (key == "tol") {
            cfg.tol_override = parse_number(value, key, line_no);
            continue;
        }
        if (key == "workers") {
            cfg.workers = std::max(1, int(parse_number(value, key, line_no)));
            continue;
        }
        if (key == "quantity") {
            cfg.quantity = value;
            continue;
        }
        if (key == "drive") {
            // stored as a flag parameter: sine (default) or delta
            if (value != "sine" && value != "delta")
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": drive must be 'sine' or 'delta'");
            cfg.params["drive_sine"] = (value == "sine") ? 1.0 : 0.0;
            continue;
        }
        const auto& allowed = model_parameters().at(cfg.model);
        if (!allowed.count(key))
            throw std::invalid_argument("unknown parameter " + key + " for model " + cfg.model);
        cfg.params[key] = parse_number(value, key, line_no);
    }
    if (cfg.model.empty()) throw std::invalid_argument("config: no model section found");
    if (cfg.quantity.empty()) cfg.quantity = default_quantity(cfg.model);
    if (!model_quantities().at(cfg.model).count(cfg.quantity))
        throw std::invalid_argument("unknown quantity " + cfg.quantity + " for model " + cfg.model);
    for (const auto& ax : cfg.sweeps)
        if (!model_parameters().at(cfg.model).count(ax.param))
            throw std::invalid_argument("unknown parameter " + ax.param + " for model " + cfg.model);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

namespace {

double param_or(const RunConfig& cfg, const std::string& key, double fallback) {
    const auto it = cfg.params.find(key);
    return it == cfg.params.end() ? fallback : it->second;
}

// one evaluation of the configured quantity with the sweep values substituted
struct EvalContext {
    const RunConfig& cfg;
    WarningSink& sink;
    num::QuadratureSettings qs;
    // lazily built kernel set for driven sweeps (shared across points)
    std::shared_ptr<const driven::KernelSet> kernel_cache;
};

std::vector<double> evaluate_point(EvalContext& ctx, std::map<std::string, double> p) {
    const RunConfig& cfg = ctx.cfg;
    auto get = [&](const std::string& key, double fallback) {
        const auto it = p.find(key);
        return it == p.end() ? fallback : it->second;
    };

    if (cfg.model == "ohmic") {
        const auto spec =
            make_oscillator_spec(get("M", 1.0), get("Omega", 1.0), get("gamma", 0.01),
                                 get("Gamma", 100.0), get("T", 100.0), get("a", 1.0),
                                 get("strict", 0.0) != 0.0);
        const double t = get("t", 0.0);
        if (cfg.quantity == "D") return {ohmic::decoherence_exponent_ohmic(spec, t, ctx.qs, &ctx.sink)};
        return {ohmic::decoherence_exponent_highT(spec, t)};
    }
    if (cfg.model == "driven") {
        const auto spec =
            make_oscillator_spec(get("M", 1.0), get("Omega", 1.0), get("gamma", 0.001),
                                 get("Gamma", 100.0), get("T", 0.0), get("a", 1.0), true);
        const bool sine = get("drive_sine", 1.0) != 0.0;
        const DriveProfile drive = sine
                                       ? DriveProfile::sine(get("amplitude", 1.0),
                                                            get("Lambda", spec.Omega))
                                       : DriveProfile::delta(get("strength", 2.0));
        const double t = get("t", 1.0);
        // the shared kernel grid is valid only while the bath parameters
        // stay at their base values; a sweep over them rebuilds per point
        bool cache_valid = ctx.kernel_cache != nullptr;
        for (const char* key : {"M", "Omega", "gamma", "Gamma"})
            if (p.count(key) && cfg.params.count(key) && p.at(key) != cfg.params.at(key))
                cache_valid = false;
        if (cache_valid)
            return {driven::decoherence_exponent_driven(spec, drive, t, *ctx.kernel_cache, true,
                                                        &ctx.sink)};
        const int samples = std::max(64, int(get("samples", 256.0)));
        return {driven::decoherence_exponent_driven(spec, drive, t, samples, true, &ctx.sink)};
    }
    if (cfg.model == "mattress") {
        const auto spec = mattress::make_mattress_spec(
            get("M", 1.0), get("mu", 1.0), get("T", 1.0),
            mattress::OverlapModel::gaussian(get("a_g", 1.0)));
        if (cfg.quantity == "U") return {mattress::overlap_U(spec, get("Delta", 0.0))};
        if (cfg.quantity == "N") return {mattress::normalization_N(spec, get("t", 1.0))};
        const auto roots = mattress::fixed_points(spec, get("k", 0.0), get("window", 0.0));
        double stable = 0.0, unstable = 0.0;
        for (const auto& r : roots)
            (r.stability == mattress::Stability::stable ? stable : unstable) += 1.0;
        return {stable, unstable};
    }
    if (cfg.model == "field") {
        const auto fspec = field::make_field_spec_T(int(get("n", 3.0)), get("g", 1.0),
                                                    get("Gamma", 1.0), get("T", 0.0));
        const double t = get("t", 1.0);
        const double L = get("L", 1.0);
        if (cfg.quantity == "DL")
            return {field::decoherence_DL_numeric(fspec, t, L, ctx.qs, &ctx.sink)};
        if (cfg.quantity == "DL_highT") return {field::decoherence_DL_highT(fspec, t, L)};
        if (cfg.quantity == "DL_zeroT") return {field::decoherence_DL_zeroT(fspec, t, L)};
        const double lambda0 = get("Lambda0", 100.0 * fspec.cutoff());
        const field::DampedPropagatorSpec pspec{[](double k) { return k; },
                                                [lambda0](double) { return lambda0; }, fspec.beta};
        const auto c = field::overdamped_Vn_Vd(fspec, pspec, get("r", 1.0), ctx.qs, &ctx.sink);
        return {cfg.quantity == "Vn" ? c.V_n : c.V_d};
    }
    // plate
    std::optional<double> b;
    if (p.count("b")) b = p.at("b");
    return {field::plate_power(get("Q", 1.0), get("rho", 1.0), get("v", 1.0), get("z", 1.0), b)};
}

}  // namespace

RunOutput run(const RunConfig& config) {
    RunOutput out;
    WarningSink sink;
    try {
        if (config.out_dir.empty())
            throw std::invalid_argument("run: no output directory (set --out, DECOLAB_OUT, or out=)");
        fs::create_directories(config.out_dir);

        ManifestWriter mw;
        mw.kv("tool", kToolVersion);
        mw.kv("started", iso_now());
        mw.kv("config_file", config.origin);
        for (const auto& l : config.config_lines) mw.kv("config", l);

        EvalContext ctx{config, sink, {}, nullptr};
        if (config.tol_override) {
            ctx.qs.abs_tol = *config.tol_override;
            ctx.qs.rel_tol = *config.tol_override;
        }

        // resolve the sweep lattice (0, 1 or 2 axes)
        std::vector<SweepAxis> sweeps = config.sweeps;
        std::vector<std::vector<double>> axis_values;
        for (const auto& ax : sweeps) {
            std::vector<double> vals(ax.count);
            for (int i = 0; i < ax.count; ++i)
                vals[i] = ax.count == 1
                              ? ax.start
                              : ax.start + (ax.stop - ax.start) * double(i) / double(ax.count - 1);
            axis_values.push_back(std::move(vals));
        }
        int total = 1;
        for (const auto& v : axis_values) total *= int(v.size());

        // driven sweeps share one kernel grid covering the largest time
        if (config.model == "driven") {
            double t_max = param_or(config, "t", 1.0);
            for (std::size_t ai = 0; ai < sweeps.size(); ++ai)
                if (sweeps[ai].param == "t")
                    t_max = std::max(std::abs(sweeps[ai].start), std::abs(sweeps[ai].stop));
            const auto spec = make_oscillator_spec(
                param_or(config, "M", 1.0), param_or(config, "Omega", 1.0),
                param_or(config, "gamma", 0.001), param_or(config, "Gamma", 100.0),
                param_or(config, "T", 0.0), param_or(config, "a", 1.0), true);
            const int samples = std::max(64, int(param_or(config, "samples", 256.0)));
            ctx.kernel_cache = std::make_shared<const driven::KernelSet>(
                driven::kernels(spec, std::max(t_max, 1e-9), samples));
        }

        std::vector<std::vector<double>> rows(total);
        parallel_for(total, config.workers, [&](int idx) {
            std::map<std::string, double> p = config.params;
            std::vector<double> coords;
            int rem = idx;
            for (int ai = int(sweeps.size()) - 1; ai >= 0; --ai) {
                const int n = int(axis_values[ai].size());
                const int pos = rem % n;
                rem /= n;
                p[sweeps[ai].param] = axis_values[ai][pos];
            }
            for (std::size_t ai = 0; ai < sweeps.size(); ++ai) coords.push_back(p[sweeps[ai].param]);
            EvalContext local{config, sink, ctx.qs, ctx.kernel_cache};
            const std::vector<double> vals = evaluate_point(local, p);
            std::vector<double> row = coords;
            row.insert(row.end(), vals.begin(), vals.end());
            rows[idx] = std::move(row);
        });

        std::vector<std::string> header;
        for (const auto& ax : sweeps) header.push_back(ax.param);
        if (config.model == "mattress" && config.quantity == "fixed_points") {
            header.push_back("n_stable");
            header.push_back("n_unstable");
        } else {
            header.push_back(config.quantity);
        }
        const std::string filename = config.model + "_" + config.quantity + ".csv";
        const std::string content = write_csv(config.out_dir, filename, header, rows);
        out.files.push_back(filename);
        manifest_output_entry(mw, config.out_dir, filename, content);

        out.warnings = sink.snapshot();
        for (const auto& w : out.warnings) mw.kv("warning", w);
        out.exit_code = out.warnings.empty() ? 0 : 1;
        mw.kv("finished", iso_now());
        mw.kv("exit", std::to_string(out.exit_code));
        mw.write(config.out_dir);
        out.files.push_back("manifest.txt");
    } catch (const std::exception& e) {
        out.exit_code = 2;
        out.error = e.what();
    }
    return out;
}

RunOutput fig1_grid(const FigParams& params, double t_max_gamma, double L_max_gamma,
                    int resolution, const std::string& out_dir, bool numeric, int workers,
                    bool validate) {
    RunOutput out;
    WarningSink sink;
    try {
        if (out_dir.empty()) throw std::invalid_argument("fig1: no output directory");
        if (resolution < 2) throw std::invalid_argument("fig1: resolution >= 2 required");
        fs::create_directories(out_dir);
        const auto fspec = field::make_field_spec_T(3, params.g, params.Gamma, params.T);

        const int n = resolution;
        std::vector<double> D(std::size_t(n) * n, 0.0);
        parallel_for(n, workers, [&](int i) {
            const double t = t_max_gamma / params.Gamma * double(i) / double(n - 1);
            for (int j = 0; j < n; ++j) {
                const double L = L_max_gamma / params.Gamma * double(j) / double(n - 1);
                D[std::size_t(i) * n + j] =
                    numeric ? field::decoherence_DL_numeric(fspec, t, L, {}, &sink)
                            : field::decoherence_DL_highT(fspec, t, L);
            }
        });

        std::vector<std::vector<double>> rows;
        rows.reserve(std::size_t(n) * n);
        double asym = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double u = t_max_gamma * double(i) / double(n - 1);
                const double v = L_max_gamma * double(j) / double(n - 1);
                rows.push_back({u, v, D[std::size_t(i) * n + j]});
                if (t_max_gamma == L_max_gamma)
                    asym = std::max(asym,
                                    std::abs(D[std::size_t(i) * n + j] - D[std::size_t(j) * n + i]));
            }

        ManifestWriter mw;
        mw.kv("tool", kToolVersion);
        mw.kv("started", iso_now());
        mw.kv("figure", "fig1 n=3 high-T decoherence surface");
        mw.kv("route", numeric ? "quadrature" : "closed-form");
        const std::string content =
            write_csv(out_dir, "fig1_n3_highT.csv", {"Gamma_t", "Gamma_L", "D"}, rows);
        out.files.push_back("fig1_n3_highT.csv");
        manifest_output_entry(mw, out_dir, "fig1_n3_highT.csv", content);
        mw.kv("fig1.max_pair_asymmetry", csv_format(asym));

        if (validate) {
            const auto report =
                field::validate_closed_forms(params.g, params.Gamma, 1000.0 * params.Gamma, 7, 6.0,
                                             0.005, &sink);
            for (const auto& line : report.to_lines()) mw.kv("validation", line);
        }
        out.warnings = sink.snapshot();
        for (const auto& w : out.warnings) mw.kv("warning", w);
        out.exit_code = out.warnings.empty() ? 0 : 1;
        mw.kv("finished", iso_now());
        mw.kv("exit", std::to_string(out.exit_code));
        mw.write(out_dir);
        out.files.push_back("manifest.txt");
    } catch (const std::exception& e) {
        out.exit_code = 2;
        out.error = e.what();
    }
    return out;
}

RunOutput fig2_slices(const FigParams& params, double L_max_gamma, int points,
                      const std::string& out_dir, int workers, bool validate) {
    RunOutput out;
    WarningSink sink;
    try {
        if (out_dir.empty()) throw std::invalid_argument("fig2: no output directory");
        if (points < 2) throw std::invalid_argument("fig2: points >= 2 required");
        fs::create_directories(out_dir);

        struct Case {
            const char* name;
            int n;
            bool highT;
        };
        const Case cases[4] = {{"fig2_n1_highT.csv", 1, true},
                               {"fig2_n3_highT.csv", 3, true},
                               {"fig2_n1_T0.csv", 1, false},
                               {"fig2_n3_T0.csv", 3, false}};

        ManifestWriter mw;
        mw.kv("tool", kToolVersion);
        mw.kv("started", iso_now());
        mw.kv("figure", "fig2 D_L at Gamma t = 1, 2, 3");

        for (const auto& c : cases) {
            const auto fspec = field::make_field_spec_T(c.n, params.g, params.Gamma,
                                                        c.highT ? params.T : 0.0);
            std::vector<std::vector<double>> rows(points);
            parallel_for(points, workers, [&](int i) {
                // start just off zero so every row carries a nonzero separation
                const double gl = L_max_gamma * double(i + 1) / double(points);
                const double L = gl / params.Gamma;
                std::vector<double> row{gl};
                for (int m = 1; m <= 3; ++m) {
                    const double t = double(m) / params.Gamma;
                    row.push_back(c.highT ? field::decoherence_DL_highT(fspec, t, L)
                                          : field::decoherence_DL_zeroT(fspec, t, L));
                }
                rows[i] = std::move(row);
            });
            const std::string content =
                write_csv(out_dir, c.name, {"Gamma_L", "D_m1", "D_m2", "D_m3"}, rows);
            out.files.push_back(c.name);
            manifest_output_entry(mw, out_dir, c.name, content);
        }

        if (validate) {
            const auto report =
                field::validate_closed_forms(params.g, params.Gamma, 1000.0 * params.Gamma, 7, 6.0,
                                             0.005, &sink);
            for (const auto& line : report.to_lines()) mw.kv("validation", line);
        }
        out.warnings = sink.snapshot();
        for (const auto& w : out.warnings) mw.kv("warning", w);
        out.exit_code = out.warnings.empty() ? 0 : 1;
        mw.kv("finished", iso_now());
        mw.kv("exit", std::to_string(out.exit_code));
        mw.write(out_dir);
        out.files.push_back("manifest.txt");
    } catch (const std::exception& e) {
        out.exit_code = 2;
        out.error = e.what();
    }
    return out;
}

}  // namespace decolab::cli
