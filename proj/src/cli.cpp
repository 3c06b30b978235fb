#include "hkqk/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hkqk/correspondence.hpp"
#include "hkqk/curvature.hpp"
#include "hkqk/flat_model.hpp"
#include "hkqk/sampling.hpp"
#include "hkqk/verify.hpp"

namespace hkqk::cli {

namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
    int m = 0;
    double c = 0.0;
    std::uint64_t seed = 42;
    int samples = 20;
    double fd_step = kDefaultFdStep;
    std::vector<std::string> tol_flags;  // name=value
    std::string out_path;
    std::string format;
    std::string point;
    double rho_min = 0.1;
    double rho_max = 10.0;
    int steps = 100;
    bool corrupt_omega2 = false;
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--m", cfg.m, "family index m (dimension 4(m+1))");
    cmd->add_option("--c", cfg.c, "deformation constant c >= 0");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--out", cfg.out_path, "write the report here instead of stdout");
    cmd->add_option("--format", cfg.format, "json or csv");
}

void add_point(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--point", cfg.point, "comma-separated real coordinates, length 4(m+1); random when omitted");
}

flat_model::ModelParams model_params(const RunConfig& cfg) {
    if (cfg.m < 0) throw ConfigError("--m must be non-negative");
    if (!(cfg.c >= 0.0) || !std::isfinite(cfg.c)) throw ConfigError("--c must be a non-negative number");
    flat_model::ModelParams params;
    params.m = cfg.m;
    params.c = cfg.c;
    params.flip_omega2_sign = cfg.corrupt_omega2;
    return params;
}

std::string resolve_format(const RunConfig& cfg, const std::string& fallback) {
    const std::string format = cfg.format.empty() ? fallback : cfg.format;
    if (format != "json" && format != "csv") throw ConfigError("--format must be json or csv");
    return format;
}

Vector parse_point(const std::string& text, int dim) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--point: cannot parse '" + item + "'");
        }
    }
    if (static_cast<int>(values.size()) != dim) {
        throw ConfigError("--point needs " + std::to_string(dim) + " coordinates, got " + std::to_string(values.size()));
    }
    return Eigen::Map<const Vector>(values.data(), dim);
}

Vector point_for(const RunConfig& cfg, const flat_model::ModelParams& params) {
    if (!cfg.point.empty()) return parse_point(cfg.point, params.dim());
    return verify::sample_point(params, cfg.seed, 0);
}

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& flags) {
    std::map<std::string, double> out;
    for (const auto& flag : flags) {
        const auto eq = flag.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--tol expects name=value, got '" + flag + "'");
        const std::string name = flag.substr(0, eq);
        try {
            std::size_t used = 0;
            const std::string value = flag.substr(eq + 1);
            out[name] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ConfigError("--tol: bad value in '" + flag + "'");
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

json point_json(const Vector& coords) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < coords.size(); ++i) arr.push_back(coords[i]);
    return arr;
}

json config_json(const RunConfig& cfg, const flat_model::ModelParams& params) {
    json config;
    config["m"] = params.m;
    config["c"] = params.c;
    config["seed"] = cfg.seed;
    return config;
}

// Report text goes to --out or to the given stream.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot open --out path '" + cfg.out_path + "'");
    file << text;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    verify::VerifyOptions options;
    options.params = model_params(cfg);
    options.seed = cfg.seed;
    options.samples = cfg.samples;
    options.fd_step = cfg.fd_step;
    options.tol_scale = verify::tol_scale_from_env();
    options.tol_overrides = parse_tolerances(cfg.tol_flags);
    const std::string format = resolve_format(cfg, "json");

    const std::vector<verify::CheckResult> results = verify::run_verification(options);
    int passed = 0, failed = 0;
    for (const auto& r : results) (r.pass ? passed : failed)++;

    std::string text;
    if (format == "json") {
        json report;
        json config = config_json(cfg, options.params);
        config["samples"] = options.samples;
        config["fd_step"] = options.fd_step;
        config["tol_scale"] = options.tol_scale;
        config["tol_overrides"] = json::object();
        for (const auto& [name, value] : options.tol_overrides) config["tol_overrides"][name] = value;
        config["corrupt_omega2"] = options.params.flip_omega2_sign;
        report["config"] = config;
        report["results"] = json::array();
        for (const auto& r : results) {
            json entry;
            entry["name"] = r.name;
            entry["anchor"] = r.anchor;
            entry["max_residual"] = std::isfinite(r.max_residual) ? json(r.max_residual) : json("inf");
            entry["tolerance"] = r.tolerance;
            entry["pass"] = r.pass;
            entry["points"] = r.points;
            report["results"].push_back(entry);
        }
        report["summary"] = {{"passed", passed}, {"failed", failed}};
        text = report.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "name,anchor,max_residual,tolerance,pass,points\n";
        for (const auto& r : results) {
            csv << r.name << ',' << csv_field(r.anchor) << ',' << fmt(r.max_residual) << ',' << fmt(r.tolerance) << ','
                << (r.pass ? "true" : "false") << ',' << r.points << '\n';
        }
        csv << "# m=" << options.params.m << " c=" << fmt(options.params.c) << " seed=" << cfg.seed
            << " samples=" << options.samples << '\n';
        csv << "# passed=" << passed << " failed=" << failed << '\n';
        text = csv.str();
    }
    emit(cfg, out, text);
    return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_norm(const RunConfig& cfg, std::ostream& out) {
    const flat_model::ModelParams params = model_params(cfg);
    const std::string format = resolve_format(cfg, "json");
    const Vector coords = point_for(cfg, params);
    const curvature::NormReport report = curvature::norm_report(params, coords);

    std::string text;
    if (format == "json") {
        json j;
        j["config"] = config_json(cfg, params);
        j["point"] = point_json(coords);
        j["f_Z"] = report.f_Z;
        j["f_H"] = report.f_H;
        j["rho"] = report.rho;
        j["norm_frame"] = report.norm_frame;
        j["norm_closed"] = report.norm_closed;
        j["scal"] = report.scal;
        j["nu"] = report.nu;
        j["residuals"] = json::object();
        for (const auto& [name, value] : report.residuals) j["residuals"][name] = value;
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "key,value\n";
        csv << "f_Z," << fmt(report.f_Z) << "\nf_H," << fmt(report.f_H) << "\nrho," << fmt(report.rho)
            << "\nnorm_frame," << fmt(report.norm_frame) << "\nnorm_closed," << fmt(report.norm_closed) << "\nscal,"
            << fmt(report.scal) << "\nnu," << fmt(report.nu) << '\n';
        for (const auto& [name, value] : report.residuals) csv << name << ',' << fmt(value) << '\n';
        text = csv.str();
    }
    emit(cfg, out, text);
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    const flat_model::ModelParams params = model_params(cfg);
    const std::string format = resolve_format(cfg, "csv");
    if (!(cfg.rho_min > 0.0)) throw ConfigError("--rho-min must be positive");
    if (!(cfg.rho_min < cfg.rho_max) || !std::isfinite(cfg.rho_max)) throw ConfigError("--rho-min must be below --rho-max");
    if (cfg.steps < 2) throw ConfigError("--steps must be at least 2");

    const int q = params.quaternionic_dim();
    const std::size_t count = static_cast<std::size_t>(cfg.steps);
    struct Row {
        double rho, f_Z, f_H, norm_closed, norm_frame;
    };
    std::vector<Row> rows(count);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < count; ++i) {
        const double rho = cfg.rho_min + (cfg.rho_max - cfg.rho_min) * static_cast<double>(i) / (cfg.steps - 1);
        const double f_Z = curvature::f_z_of_rho(rho);
        const double f_H = curvature::f_h_of_rho(rho, params.c);
        sampling::Rng rng(sampling::point_seed(cfg.seed, i));
        const Vector coords = sampling::point_with_fz(params, f_Z, rng);
        const flat_model::GeometryAt geom = flat_model::geometry_at(params, coords);
        const double frame = curvature::curvature_norm_frame(geom, correspondence::rtilde_closed(geom));
        rows[i] = {rho, f_Z, f_H, curvature::curvature_norm_closed(q, f_Z, f_H), frame};
    }

    int up = 0, down = 0;
    for (std::size_t i = 1; i < count; ++i) {
        if (rows[i].norm_closed > rows[i - 1].norm_closed) ++up;
        if (rows[i].norm_closed < rows[i - 1].norm_closed) ++down;
    }
    const int steps = cfg.steps - 1;
    std::string verdict = "not monotone";
    if (up == steps) verdict = "strictly increasing";
    else if (down == steps) verdict = "strictly decreasing";
    else if (up == 0 && down == 0) verdict = "constant";

    std::string text;
    if (format == "csv") {
        std::ostringstream csv;
        csv << "rho,f_Z,f_H,norm_closed,norm_frame\n";
        for (const auto& r : rows)
            csv << fmt(r.rho) << ',' << fmt(r.f_Z) << ',' << fmt(r.f_H) << ',' << fmt(r.norm_closed) << ','
                << fmt(r.norm_frame) << '\n';
        csv << "# m=" << params.m << " c=" << fmt(params.c) << " seed=" << cfg.seed << '\n';
        csv << "# monotonicity: " << verdict << '\n';
        text = csv.str();
    } else {
        json j;
        j["config"] = config_json(cfg, params);
        j["rows"] = json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"rho", r.rho}, {"f_Z", r.f_Z}, {"f_H", r.f_H}, {"norm_closed", r.norm_closed},
                                 {"norm_frame", r.norm_frame}});
        j["monotonicity"] = verdict;
        text = j.dump(2) + "\n";
    }
    emit(cfg, out, text);
    return kExitOk;
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out) {
    const flat_model::ModelParams params = model_params(cfg);
    const std::string format = resolve_format(cfg, "json");
    const Vector coords = point_for(cfg, params);
    const flat_model::GeometryAt geom = flat_model::geometry_at(params, coords);
    const QuadCov rtilde = correspondence::rtilde_closed(geom);
    const curvature::AlekseevskySplit split = curvature::alekseevsky_split(geom, rtilde);
    const Frame frame = curvature::gh_frame(geom);
    sampling::Rng rng(sampling::point_seed(cfg.seed, 1));
    const double r0 = curvature::frame_norm(split.R0_part, frame);
    const double r1 = curvature::frame_norm(split.R1_part, frame);
    const double hk = curvature::hk_type_residual(geom, split.R1_part, rng, 50);

    std::string text;
    if (format == "json") {
        json j;
        j["config"] = config_json(cfg, params);
        j["point"] = point_json(coords);
        j["f_Z"] = geom.f_Z;
        j["f_H"] = geom.f_H;
        j["nu"] = split.nu;
        j["r0_norm"] = r0;
        j["r1_norm"] = r1;
        j["hk_commutator_residual"] = hk;
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "key,value\nnu," << fmt(split.nu) << "\nr0_norm," << fmt(r0) << "\nr1_norm," << fmt(r1)
            << "\nhk_commutator_residual," << fmt(hk) << '\n';
        text = csv.str();
    }
    emit(cfg, out, text);
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks of the hyper-Kaehler / quaternionic Kaehler correspondence on flat models"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* verify_cmd = app.add_subcommand("verify", "run every identity check over seeded random points");
    add_common(verify_cmd, cfg);
    verify_cmd->add_option("--samples", cfg.samples, "number of sample points");
    verify_cmd->add_option("--fd-step", cfg.fd_step, "finite-difference step");
    verify_cmd->add_option("--tol", cfg.tol_flags, "tolerance override name=value (repeatable)");
    verify_cmd->add_flag("--corrupt-omega2", cfg.corrupt_omega2, "negative control: flip the sign of omega_2");

    CLI::App* norm_cmd = app.add_subcommand("norm", "curvature norm at one point, frame and closed form");
    add_common(norm_cmd, cfg);
    add_point(norm_cmd, cfg);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "closed and frame norms along a rho grid");
    add_common(sweep_cmd, cfg);
    sweep_cmd->add_option("--rho-min", cfg.rho_min, "smallest rho");
    sweep_cmd->add_option("--rho-max", cfg.rho_max, "largest rho");
    sweep_cmd->add_option("--steps", cfg.steps, "grid points");

    CLI::App* decompose_cmd = app.add_subcommand("decompose", "split R~ into nu R0 + R1 at one point");
    add_common(decompose_cmd, cfg);
    add_point(decompose_cmd, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*verify_cmd) return cmd_verify(cfg, out);
        if (*norm_cmd) return cmd_norm(cfg, out);
        if (*sweep_cmd) return cmd_sweep(cfg, out);
        if (*decompose_cmd) return cmd_decompose(cfg, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainViolation& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitConfig;
}

int run(const std::vector<const char*>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("hkqk");
    argv.insert(argv.end(), args.begin(), args.end());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hkqk::cli
