#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "phiproj/asymptotics.hpp"
#include "phiproj/diagnostics.hpp"
#include "phiproj/divergence.hpp"
#include "phiproj/error.hpp"
#include "phiproj/model.hpp"
#include "phiproj/montecarlo.hpp"
#include "phiproj/projection.hpp"

namespace phiproj::cli {

using json = nlohmann::json;

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_validation = 2,
    exit_convergence = 3,
    exit_condition = 4,
};

struct SweepSettings
{
    int perturbations = 10;
    double noise_sd = 0.01;
    std::uint64_t seed = 0;
    int profile_points = 101;
};

struct CheckSettings
{
    std::vector<double> w_values{0.1, 0.5, 1.0, 2.0};
    int grid_size = 10000;
};

struct OutputSettings
{
    std::string format = "csv";
    int precision = 3;
    std::string path = ".";
};

struct RunConfig
{
    Divergence divergence;
    std::optional<ParametricModel> model;
    Vector target;
    SolverOptions solver;
    SimulationConfig simulation;
    double simulation_tolerance = 0.01;
    SweepSettings sweep;
    CheckSettings check;
    OutputSettings output;
};

/// Command-line values that take precedence over the config file.
struct Overrides
{
    std::optional<std::uint64_t> seed;
    std::optional<long> n;
    std::optional<long> N;
    std::optional<std::string> out;
    std::optional<std::string> format;
};

// ---- config parsing ------------------------------------------------------

namespace detail {

inline void allow_keys(const json& obj, std::initializer_list<const char*> keys,
                       const std::string& where)
{
    if (!obj.is_object())
        throw ValidationError(where + " must be an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
}

inline const json& need(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key))
        throw ValidationError(where + " is missing '" + key + "'");
    return obj.at(key);
}

template <class T>
T number(const json& v, const std::string& what)
{
    if (!v.is_number())
        throw ValidationError(what + " must be a number");
    return v.get<T>();
}

inline Vector vector_of(const json& v, const std::string& what)
{
    if (!v.is_array() || v.empty())
        throw ValidationError(what + " must be a non-empty array of numbers");
    Vector out(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        out[i] = number<double>(v[i], what);
    return out;
}

/// Array of rows.
inline Matrix matrix_of(const json& v, const std::string& what)
{
    if (!v.is_array() || v.empty() || !v[0].is_array() || v[0].empty())
        throw ValidationError(what + " must be a non-empty array of rows");
    Matrix out(v.size(), v[0].size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_array() || v[i].size() != v[0].size())
            throw ValidationError(what + " rows must have equal length");
        for (size_t j = 0; j < v[i].size(); ++j)
            out(i, j) = number<double>(v[i][j], what);
    }
    return out;
}

inline Divergence parse_divergence(const json& d)
{
    allow_keys(d, {"name", "alpha", "exponent"}, "divergence");
    const json& name_field = need(d, "name", "divergence");
    if (!name_field.is_string())
        throw ValidationError("divergence.name must be a string");
    std::string name = name_field.get<std::string>();
    if (name == "centered_power") {
        if (d.contains("alpha"))
            throw ValidationError("alpha given for divergence 'centered_power'");
        return centered_power_divergence(number<int>(need(d, "exponent", "divergence"),
                                                     "divergence.exponent"));
    }
    if (d.contains("exponent"))
        throw ValidationError("exponent is only valid for 'centered_power'");
    std::optional<double> alpha;
    if (d.contains("alpha"))
        alpha = number<double>(d.at("alpha"), "divergence.alpha");
    return builtin_divergence(name, alpha);
}

inline ParametricModel parse_model(const json& m)
{
    const json& type_field = need(m, "type", "model");
    if (!type_field.is_string())
        throw ValidationError("model.type must be a string");
    std::string type = type_field.get<std::string>();
    if (type == "binomial") {
        allow_keys(m, {"type", "m"}, "binomial model");
        return binomial_model(number<int>(need(m, "m", "model"), "model.m"));
    }
    if (type == "moment") {
        allow_keys(m, {"type", "x", "mu", "reference_pmf"}, "moment model");
        std::optional<Vector> reference;
        if (m.contains("reference_pmf"))
            reference = vector_of(m.at("reference_pmf"), "model.reference_pmf");
        return moment_model(vector_of(need(m, "x", "model"), "model.x"),
                            vector_of(need(m, "mu", "model"), "model.mu"), reference);
    }
    if (type == "frechet") {
        allow_keys(m, {"type", "a", "b"}, "frechet model");
        return frechet_model({vector_of(need(m, "a", "model"), "model.a"),
                              vector_of(need(m, "b", "model"), "model.b")});
    }
    if (type == "linear_equalities") {
        allow_keys(m, {"type", "B", "alpha", "s0"}, "linear_equalities model");
        return affine_from_linear_equalities(matrix_of(need(m, "B", "model"), "model.B"),
                                             vector_of(need(m, "alpha", "model"), "model.alpha"),
                                             vector_of(need(m, "s0", "model"), "model.s0"));
    }
    if (type == "affine") {
        allow_keys(m, {"type", "A", "gamma", "interior"}, "affine model");
        std::optional<Vector> interior;
        if (m.contains("interior"))
            interior = vector_of(m.at("interior"), "model.interior");
        return affine_model(matrix_of(need(m, "A", "model"), "model.A"),
                            vector_of(need(m, "gamma", "model"), "model.gamma"), interior);
    }
    throw ValidationError("unknown model type '" + type + "'");
}

}  // namespace detail

inline RunConfig parse_config(const json& doc)
{
    using namespace detail;
    allow_keys(doc,
               {"version", "description", "divergence", "model", "target", "solver",
                "simulation", "sweep", "check", "output"},
               "config");
    const json& version = need(doc, "version", "config");
    if (!version.is_number_integer() || version.get<int>() != 1)
        throw ValidationError("config version must be 1");
    if (doc.contains("description") && !doc.at("description").is_string())
        throw ValidationError("description must be a string");

    RunConfig cfg;
    cfg.divergence = parse_divergence(need(doc, "divergence", "config"));
    cfg.model = parse_model(need(doc, "model", "config"));
    cfg.target = vector_of(need(doc, "target", "config"), "target");
    if (cfg.target.size() != cfg.model->m())
        throw ValidationError("target has dimension " + std::to_string(cfg.target.size())
                              + ", model expects " + std::to_string(cfg.model->m()));
    if (!((cfg.target.array() > 0.0).all() && (cfg.target.array() < 1.0).all()))
        throw ValidationError("target must lie strictly inside (0,1)^m");

    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        allow_keys(s,
                   {"gradient_tol", "max_iterations", "barrier_initial", "barrier_shrink",
                    "multistart_count", "seed"},
                   "solver");
        if (s.contains("gradient_tol"))
            cfg.solver.gradient_tol = number<double>(s.at("gradient_tol"), "solver.gradient_tol");
        if (s.contains("max_iterations"))
            cfg.solver.max_iterations = number<int>(s.at("max_iterations"), "solver.max_iterations");
        if (s.contains("barrier_initial"))
            cfg.solver.barrier_initial = number<double>(s.at("barrier_initial"), "solver.barrier_initial");
        if (s.contains("barrier_shrink"))
            cfg.solver.barrier_shrink = number<double>(s.at("barrier_shrink"), "solver.barrier_shrink");
        if (s.contains("multistart_count"))
            cfg.solver.multistart_count = number<int>(s.at("multistart_count"), "solver.multistart_count");
        if (s.contains("seed"))
            cfg.solver.seed = number<std::uint64_t>(s.at("seed"), "solver.seed");
    }
    cfg.solver.validate();

    if (doc.contains("simulation")) {
        const json& s = doc.at("simulation");
        allow_keys(s, {"n", "N", "seed", "parallel_streams", "tolerance"}, "simulation");
        if (s.contains("n"))
            cfg.simulation.n = number<long>(s.at("n"), "simulation.n");
        if (s.contains("N"))
            cfg.simulation.N = number<long>(s.at("N"), "simulation.N");
        if (s.contains("seed"))
            cfg.simulation.seed = number<std::uint64_t>(s.at("seed"), "simulation.seed");
        if (s.contains("parallel_streams"))
            cfg.simulation.parallel_streams = number<int>(s.at("parallel_streams"), "simulation.parallel_streams");
        if (s.contains("tolerance"))
            cfg.simulation_tolerance = number<double>(s.at("tolerance"), "simulation.tolerance");
    }
    cfg.simulation.validate();

    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        allow_keys(s, {"perturbations", "noise_sd", "seed", "profile_points"}, "sweep");
        if (s.contains("perturbations"))
            cfg.sweep.perturbations = number<int>(s.at("perturbations"), "sweep.perturbations");
        if (s.contains("noise_sd"))
            cfg.sweep.noise_sd = number<double>(s.at("noise_sd"), "sweep.noise_sd");
        if (s.contains("seed"))
            cfg.sweep.seed = number<std::uint64_t>(s.at("seed"), "sweep.seed");
        if (s.contains("profile_points"))
            cfg.sweep.profile_points = number<int>(s.at("profile_points"), "sweep.profile_points");
    }

    if (doc.contains("check")) {
        const json& s = doc.at("check");
        allow_keys(s, {"w_values", "grid_size"}, "check");
        if (s.contains("w_values")) {
            Vector w = vector_of(s.at("w_values"), "check.w_values");
            cfg.check.w_values.assign(w.data(), w.data() + w.size());
        }
        if (s.contains("grid_size"))
            cfg.check.grid_size = number<int>(s.at("grid_size"), "check.grid_size");
    }

    if (doc.contains("output")) {
        const json& s = doc.at("output");
        allow_keys(s, {"format", "precision", "path"}, "output");
        if (s.contains("format")) {
            if (!s.at("format").is_string())
                throw ValidationError("output.format must be a string");
            cfg.output.format = s.at("format").get<std::string>();
        }
        if (s.contains("precision"))
            cfg.output.precision = number<int>(s.at("precision"), "output.precision");
        if (s.contains("path")) {
            if (!s.at("path").is_string())
                throw ValidationError("output.path must be a string");
            cfg.output.path = s.at("path").get<std::string>();
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

inline void apply_overrides(RunConfig& cfg, const Overrides& ov)
{
    if (ov.seed) {
        cfg.solver.seed = *ov.seed;
        cfg.simulation.seed = *ov.seed;
        cfg.sweep.seed = *ov.seed;
    }
    if (ov.n)
        cfg.simulation.n = *ov.n;
    if (ov.N)
        cfg.simulation.N = *ov.N;
    if (ov.out)
        cfg.output.path = *ov.out;
    if (ov.format)
        cfg.output.format = *ov.format;
    if (cfg.output.format != "csv" && cfg.output.format != "json")
        throw ValidationError("output format must be 'csv' or 'json'");
    if (cfg.output.precision < 0 || cfg.output.precision > 17)
        throw ValidationError("output precision must be in [0, 17]");
    cfg.simulation.validate();
}

// ---- artifact writers ----------------------------------------------------

inline std::string format17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline json to_json(const Vector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v[i]);
    return out;
}

inline json to_json(const Matrix& m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

inline void write_text(const std::filesystem::path& file, const std::string& text)
{
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write '" + file.string() + "'");
    out << text;
}

inline void write_csv(const std::filesystem::path& file, const Matrix& m)
{
    std::string text;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j)
                text += ',';
            text += format17(m(i, j));
        }
        text += '\n';
    }
    write_text(file, text);
}

inline void write_json(const std::filesystem::path& file, const json& doc)
{
    write_text(file, doc.dump(2) + "\n");
}

/// Fixed-point rendering of a matrix for the terminal.
inline std::string render(const Matrix& m, int precision)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << "  ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v = m(i, j);
            // keep -0.000 out of the report
            if (std::abs(v) < 0.5 * std::pow(10.0, -precision))
                v = 0.0;
            os << std::setw(precision + 5) << v;
        }
        os << '\n';
    }
    return os.str();
}

inline std::string render_row(const Vector& v, int precision)
{
    return render(Matrix(v.transpose()), precision);
}

inline json projection_json(const ProjectionResult& r)
{
    json mins = json::array();
    for (const auto& v : r.local_minimizers)
        mins.push_back(to_json(v));
    return {{"theta_star", to_json(r.theta_star)},
            {"s_star", to_json(r.s_star)},
            {"objective", r.objective},
            {"gradient_norm", r.gradient_norm},
            {"iterations", r.iterations},
            {"boundary_flag", r.boundary_flag},
            {"converged", r.converged},
            {"local_minimizers", mins}};
}

// ---- subcommands -----------------------------------------------------------

inline std::filesystem::path output_dir(const RunConfig& cfg)
{
    std::filesystem::path dir(cfg.output.path);
    std::filesystem::create_directories(dir);
    return dir;
}

inline int cmd_project(const RunConfig& cfg, std::ostream& out)
{
    auto res = project(cfg.divergence, *cfg.model, cfg.target, cfg.solver);
    if (!res.converged)
        throw ConvergenceError("projection did not converge (gradient norm "
                               + format_number(res.gradient_norm) + ")");
    auto dir = output_dir(cfg);
    write_json(dir / "projection.json", projection_json(res));
    if (cfg.output.format == "csv") {
        write_csv(dir / "theta_star.csv", Matrix(res.theta_star));
        write_csv(dir / "s_star.csv", Matrix(res.s_star));
    }
    const int p = cfg.output.precision;
    out << "divergence " << cfg.divergence.name << ", model " << cfg.model->kind() << "\n"
        << "theta*:\n" << render_row(res.theta_star, p) << "S(theta*):\n"
        << render_row(res.s_star, p) << "objective " << format17(res.objective)
        << "\nboundary " << (res.boundary_flag ? "yes" : "no") << ", iterations "
        << res.iterations << "\n";
    return exit_ok;
}

inline int cmd_asymptotics(const RunConfig& cfg, std::ostream& out)
{
    auto res = asymptotic_covariance(cfg.divergence, *cfg.model, cfg.target, cfg.solver);
    auto dir = output_dir(cfg);
    write_json(dir / "asymptotics.json",
               {{"theta_star", to_json(res.theta_star)},
                {"s_star", to_json(res.s_star)},
                {"hessian", to_json(res.hessian)},
                {"delta", to_json(res.delta)},
                {"jac_theta", to_json(res.jac_theta)},
                {"jac_projection", to_json(res.jac_projection)},
                {"sigma_q0", to_json(res.sigma_q0)},
                {"sigma", to_json(res.sigma)}});
    if (cfg.output.format == "csv") {
        write_csv(dir / "sigma.csv", res.sigma);
        write_csv(dir / "jac_projection.csv", res.jac_projection);
        write_csv(dir / "jac_theta.csv", res.jac_theta);
    }
    const int p = cfg.output.precision;
    out << "theta*:\n" << render_row(res.theta_star, p) << "Sigma:\n" << render(res.sigma, p);
    return exit_ok;
}

inline int cmd_montecarlo(const RunConfig& cfg, std::ostream& out)
{
    auto rep = empirical_covariance(cfg.divergence, *cfg.model, cfg.target, cfg.simulation,
                                    cfg.solver, cfg.simulation_tolerance);
    auto dir = output_dir(cfg);
    write_json(dir / "montecarlo.json",
               {{"n", cfg.simulation.n},
                {"N", cfg.simulation.N},
                {"seed", cfg.simulation.seed},
                {"sigma", to_json(rep.sigma)},
                {"sigma_empirical", to_json(rep.sigma_empirical)},
                {"elementwise_diffs", to_json(rep.elementwise_diffs)},
                {"max_abs_diff", rep.max_abs_diff},
                {"tolerance", rep.tolerance},
                {"pass", rep.pass},
                {"replicates_used", rep.replicates_used},
                {"replicates_skipped", rep.replicates_skipped}});
    if (cfg.output.format == "csv") {
        write_csv(dir / "sigma.csv", rep.sigma);
        write_csv(dir / "sigma_empirical.csv", rep.sigma_empirical);
    }
    const int p = cfg.output.precision;
    out << "Sigma:\n" << render(rep.sigma, p) << "Sigma_{n,N} (n=" << cfg.simulation.n
        << ", N=" << cfg.simulation.N << ", seed=" << cfg.simulation.seed << "):\n"
        << render(rep.sigma_empirical, p) << "max |diff| " << format_number(rep.max_abs_diff)
        << (rep.pass ? " <= " : " > ") << format_number(rep.tolerance) << "\nskipped "
        << rep.replicates_skipped << " of " << cfg.simulation.N << "\n";
    return exit_ok;
}

inline json sweep_json(const SweepReport& rep)
{
    json items = json::array();
    for (const auto& p : rep.perturbations)
        items.push_back({{"t", to_json(p.t)},
                         {"theta_star", to_json(p.theta_star)},
                         {"objective", p.objective},
                         {"dispersion", p.dispersion},
                         {"minimizer_count", p.minimizer_count},
                         {"unique", p.unique}});
    return {{"perturbations", items}, {"max_dispersion", rep.max_dispersion},
            {"unique", rep.unique}};
}

inline void write_profile(const std::filesystem::path& file, const SweepReport& rep, int k)
{
    std::string text = "perturbation";
    for (int j = 0; j < k; ++j)
        text += ",theta_" + std::to_string(j + 1);
    text += ",objective\n";
    for (const auto& pt : rep.profiles) {
        text += std::to_string(pt.perturbation);
        for (Eigen::Index j = 0; j < pt.theta.size(); ++j)
            text += "," + format17(pt.theta[j]);
        text += "," + format17(pt.objective) + "\n";
    }
    write_text(file, text);
}

inline SweepReport run_sweep(const RunConfig& cfg)
{
    return uniqueness_sweep(cfg.divergence, *cfg.model, cfg.target, cfg.sweep.perturbations,
                            cfg.sweep.noise_sd, cfg.sweep.seed, cfg.solver,
                            cfg.sweep.profile_points);
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out)
{
    auto rep = run_sweep(cfg);
    auto dir = output_dir(cfg);
    write_json(dir / "sweep.json", sweep_json(rep));
    if (cfg.model->k() <= 2)
        write_profile(dir / "sweep_profile.csv", rep, cfg.model->k());
    out << rep.perturbations.size() << " perturbations, max minimizer dispersion "
        << format_number(rep.max_dispersion) << ": "
        << (rep.unique ? "unique minimum" : "several local minima") << "\n";
    return exit_ok;
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto& div = cfg.divergence;
    const auto& model = *cfg.model;
    json doc;
    std::vector<std::string> violations;

    auto convexity = check_strong_convexity(div, cfg.check.w_values, cfg.check.grid_size);
    json conv = json::array();
    for (const auto& e : convexity.entries)
        conv.push_back({{"w", e.w},
                        {"min_phi_second", e.min_phi_second},
                        {"kappa", e.kappa ? json(*e.kappa) : json(nullptr)},
                        {"pass", e.pass}});
    doc["strong_convexity"] = {{"entries", conv}, {"pass", convexity.pass}};

    auto guarantee = classify_support_guarantee(div, model);
    doc["support_guarantee"] = to_string(guarantee);

    auto proj = project(div, model, cfg.target, cfg.solver);
    if (!proj.converged)
        throw ConvergenceError("projection did not converge (gradient norm "
                               + format_number(proj.gradient_norm) + ")");
    doc["projection"] = projection_json(proj);
    bool support = check_support(proj);
    doc["support"] = support;
    if (!support)
        violations.push_back(ConditionViolation(12, "projection leaves (0,1)^m").what());
    bool interior = model.strictly_feasible(proj.theta_star) && !proj.boundary_flag;
    if (!interior && support)
        violations.push_back(
            ConditionViolation(9, "minimizer lies on the boundary of Theta").what());

    if (interior && support) {
        auto spectrum = hessian_spectrum(objective_hessian(div, model, cfg.target, proj.theta_star));
        doc["invertibility"] = {{"min_eigenvalue", spectrum.min_eigenvalue},
                                {"max_eigenvalue", spectrum.max_eigenvalue},
                                {"pass", spectrum.positive_definite}};
        if (!spectrum.positive_definite)
            violations.push_back(
                ConditionViolation(10, "Hessian of the projection objective is not positive "
                                       "definite at theta* (min eigenvalue "
                                       + format_number(spectrum.min_eigenvalue) + ")")
                    .what());
    }

    auto sweep = run_sweep(cfg);
    doc["uniqueness_sweep"] = sweep_json(sweep);
    if (!sweep.unique)
        violations.push_back(ConditionViolation(9, "several local minimizers near the target "
                                                   "(dispersion "
                                                   + format_number(sweep.max_dispersion) + ")")
                                 .what());
    doc["violations"] = violations;

    auto dir = output_dir(cfg);
    write_json(dir / "check.json", doc);
    if (model.k() <= 2)
        write_profile(dir / "sweep_profile.csv", sweep, model.k());

    out << "strong convexity: " << (convexity.pass ? "certified" : "not certified") << "\n";
    for (const auto& e : convexity.entries)
        out << "  w=" << e.w << " min phi''=" << format_number(e.min_phi_second) << " kappa="
            << (e.kappa ? format_number(*e.kappa) : std::string("none")) << "\n";
    out << "support guarantee: " << to_string(guarantee) << "\n"
        << "support of S(theta*): " << (support ? "interior" : "touches the boundary") << "\n";
    if (doc.contains("invertibility"))
        out << "min Hessian eigenvalue: "
            << format_number(doc["invertibility"]["min_eigenvalue"].get<double>()) << "\n";
    out << "uniqueness sweep: " << (sweep.unique ? "unique" : "not unique") << "\n";
    for (const auto& v : violations)
        err << v << "\n";
    return violations.empty() ? exit_ok : exit_condition;
}

/// Runs one subcommand on a config file.  Errors are reported on `err` and
/// mapped to exit codes: 2 invalid input, 3 no convergence, 4 a violated
/// condition (named in the message).
inline int run(const std::string& subcommand, const std::string& config_path,
               const Overrides& overrides, std::ostream& out, std::ostream& err)
{
    try {
        RunConfig cfg = load_config(config_path);
        apply_overrides(cfg, overrides);
        if (subcommand == "project")
            return cmd_project(cfg, out);
        if (subcommand == "asymptotics")
            return cmd_asymptotics(cfg, out);
        if (subcommand == "montecarlo")
            return cmd_montecarlo(cfg, out);
        if (subcommand == "sweep")
            return cmd_sweep(cfg, out);
        if (subcommand == "check")
            return cmd_check(cfg, out, err);
        throw ValidationError("unknown subcommand '" + subcommand + "'");
    } catch (const ConditionViolation& e) {
        err << "error: " << e.what() << "\n";
        return exit_condition;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return exit_convergence;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const DataDegeneracyError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const json::exception& e) {
        err << "error: config: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

}  // namespace phiproj::cli
