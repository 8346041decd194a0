#include <diracint/cli.hpp>
#include <diracint/constraints.hpp>
#include <diracint/diagnostics.hpp>
#include <diracint/models.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace diracint::cli {

namespace {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        size_t pos = 0;
        const double value = std::stod(text, &pos);
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw ConfigError("malformed value for '" + key + "': " + text);
    }
}

Vec parse_vector(const std::string& key, const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_double(key, item));
    if (values.empty()) throw ConfigError("malformed value for '" + key + "': empty vector");
    Vec v(static_cast<Eigen::Index>(values.size()));
    for (size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
    return v;
}

std::string format_vector(const Vec& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

Scheme parse_scheme(const std::string& text) {
    if (text == "plus") return Scheme::Plus;
    if (text == "minus") return Scheme::Minus;
    throw ConfigError("malformed value for 'scheme': " + text + " (expected plus|minus)");
}

void apply_param_override(RunConfig& config, const std::string& key, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("malformed value for '" + key + "': " + spec + " (expected name=value)");
    config.param_overrides[spec.substr(0, eq)] = parse_double(key, spec.substr(eq + 1));
}

std::vector<double> parse_sweep(const std::string& text) {
    if (text.rfind("h=", 0) != 0) throw ConfigError("malformed value for 'sweep': " + text);
    std::vector<double> out;
    std::stringstream ss(text.substr(2));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double("sweep", item));
    if (out.empty()) throw ConfigError("malformed value for 'sweep': no step sizes");
    return out;
}

struct RawOptions {
    std::string model, scheme, h, steps, q0, q1, v0, out, diagnostics, tol, max_iters, sweep;
    std::vector<std::string> params;
    std::string config_path;
    bool dump = false;
};

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "model") config.model_id = value;
    else if (key == "scheme") config.scheme = parse_scheme(value);
    else if (key == "h") config.h = parse_double(key, value);
    else if (key == "steps") config.n_steps = static_cast<long>(parse_double(key, value));
    else if (key == "q0") config.q0 = parse_vector(key, value);
    else if (key == "q1") config.q1 = parse_vector(key, value);
    else if (key == "v0") config.v0 = parse_vector(key, value);
    else if (key == "out") config.out_path = value;
    else if (key == "diagnostics") {
        if (value != "true" && value != "false") throw ConfigError("malformed value for 'diagnostics': " + value);
        config.diagnostics_on = value == "true";
    } else if (key == "tol") config.tol = parse_double(key, value);
    else if (key == "max_iters") config.max_iters = static_cast<int>(parse_double(key, value));
    else if (key == "sweep") config.sweep_h = parse_sweep(value);
    else if (key.rfind("param.", 0) == 0) config.param_overrides[key.substr(6)] = parse_double(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

void validate_config(const RunConfig& config) {
    if (config.model_id.empty()) throw ConfigError("missing required key 'model'");
    if (config.h <= 0.0) throw ConfigError(config.h == 0.0 ? "missing required key 'h'" : "'h' must be positive");
    if (config.n_steps < 1) throw ConfigError(config.n_steps == 0 ? "missing required key 'steps'" : "'steps' must be >= 1");
    if (config.q0.size() == 0) throw ConfigError("missing required key 'q0'");
    if (config.q1.has_value() == config.v0.has_value())
        throw ConfigError(config.q1 ? "conflicting seed modes: both 'q1' and 'v0' given"
                                    : "missing seed: exactly one of 'q1' / 'v0' required");
    if (config.tol <= 0.0) throw ConfigError("'tol' must be positive");
    if (config.max_iters < 1) throw ConfigError("'max_iters' must be >= 1");
}

MechModel build_model(const RunConfig& config) {
    try {
        return make_model({config.model_id, config.param_overrides});
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::string default_out_path(const RunConfig& config) {
    return config.model_id + "_" + scheme_name(config.scheme) + ".csv";
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    };
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file line " + std::to_string(lineno) + ": expected key = value");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return entries;
}

RunConfig parse_config(const std::vector<std::string>& argv) {
    std::vector<const char*> raw;
    raw.push_back("diracint");
    for (const auto& s : argv) raw.push_back(s.c_str());
    return parse_config(static_cast<int>(raw.size()), raw.data());
}

RunConfig parse_config(int argc, const char* const* argv) {
    RawOptions opt;
    CLI::App app{"structure-preserving integrator for nonholonomic Lagrangian systems"};
    app.set_help_flag("--help", "print help and exit");
    app.add_option("--model", opt.model, "model id: rolling_disk | heisenberg | oscillator | free_particle");
    app.add_option("--scheme", opt.scheme, "scheme: plus | minus");
    app.add_option("--h", opt.h, "time step");
    app.add_option("--steps", opt.steps, "number of time intervals (CSV gets steps + 1 data rows)");
    app.add_option("--q0", opt.q0, "initial configuration, comma-separated");
    app.add_option("--q1", opt.q1, "second configuration (alternative to --v0)");
    app.add_option("--v0", opt.v0, "initial velocity; q1 = q0 + h*v0 (alternative to --q1)");
    app.add_option("--param", opt.params, "model parameter override name=value (repeatable)");
    app.add_option("--out", opt.out, "output CSV path");
    app.add_option("--diagnostics", opt.diagnostics, "true | false (default true)");
    app.add_option("--tol", opt.tol, "Newton residual tolerance (default 1e-12)");
    app.add_option("--max-iters", opt.max_iters, "Newton iteration cap (default 50)");
    app.add_option("--sweep", opt.sweep, "h=a,b,c: run each step size concurrently to its own file");
    app.add_option("--config", opt.config_path, "key = value file; flags override file values");
    app.add_flag("--dump-config", opt.dump, "print the effective config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig config;
    config.dump_config = opt.dump;

    // File values first, command line flags on top.
    if (!opt.config_path.empty())
        for (const auto& [key, value] : read_config_file(opt.config_path)) apply_key(config, key, value);

    if (!opt.model.empty()) config.model_id = opt.model;
    if (!opt.scheme.empty()) config.scheme = parse_scheme(opt.scheme);
    if (!opt.h.empty()) config.h = parse_double("h", opt.h);
    if (!opt.steps.empty()) config.n_steps = static_cast<long>(parse_double("steps", opt.steps));
    if (!opt.q0.empty()) config.q0 = parse_vector("q0", opt.q0);
    if (!opt.q1.empty()) config.q1 = parse_vector("q1", opt.q1);
    if (!opt.v0.empty()) config.v0 = parse_vector("v0", opt.v0);
    for (const auto& p : opt.params) apply_param_override(config, "param", p);
    if (!opt.out.empty()) config.out_path = opt.out;
    if (!opt.diagnostics.empty()) apply_key(config, "diagnostics", opt.diagnostics);
    if (!opt.tol.empty()) config.tol = parse_double("tol", opt.tol);
    if (!opt.max_iters.empty()) config.max_iters = static_cast<int>(parse_double("max_iters", opt.max_iters));
    if (!opt.sweep.empty()) config.sweep_h = parse_sweep(opt.sweep);

    validate_config(config);
    return config;
}

std::string dump_config(const RunConfig& config) {
    std::ostringstream os;
    os << "model = " << config.model_id << "\n";
    os << "scheme = " << scheme_name(config.scheme) << "\n";
    os << "h = " << format_double(config.h) << "\n";
    os << "steps = " << config.n_steps << "\n";
    os << "q0 = " << format_vector(config.q0) << "\n";
    if (config.q1) os << "q1 = " << format_vector(*config.q1) << "\n";
    if (config.v0) os << "v0 = " << format_vector(*config.v0) << "\n";
    for (const auto& [name, value] : config.param_overrides)
        os << "param." << name << " = " << format_double(value) << "\n";
    if (!config.out_path.empty()) os << "out = " << config.out_path << "\n";
    os << "diagnostics = " << (config.diagnostics_on ? "true" : "false") << "\n";
    os << "tol = " << format_double(config.tol) << "\n";
    os << "max_iters = " << config.max_iters << "\n";
    if (!config.sweep_h.empty()) {
        os << "sweep = h=";
        for (size_t i = 0; i < config.sweep_h.size(); ++i)
            os << (i ? "," : "") << format_double(config.sweep_h[i]);
        os << "\n";
    }
    return os.str();
}

void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& names,
               int num_constraints, bool diagnostics_on) {
    os << "step,time";
    for (const auto& name : names) os << ",q_" << name;
    for (const auto& name : names) os << ",p_" << name;
    for (int r = 0; r < num_constraints; ++r) os << ",mu_" << r;
    if (diagnostics_on) os << ",energy,constraint_norm,dirac_residual";
    os << "\n";

    for (int k = 0; k < traj.num_points(); ++k) {
        os << k << "," << format_double(traj.times[k]);
        for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) os << "," << format_double(traj.states[k][i]);
        for (Eigen::Index i = 0; i < traj.momenta[k].size(); ++i) os << "," << format_double(traj.momenta[k][i]);
        for (Eigen::Index r = 0; r < traj.multipliers[k].size(); ++r)
            os << "," << format_double(traj.multipliers[k][r]);
        if (diagnostics_on) {
            const DiagRecord& d = traj.diagnostics[k];
            os << "," << format_double(d.energy_plus) << "," << format_double(d.constraint_norm) << ",";
            if (d.dirac_residual_valid) os << format_double(d.dirac_residual);
        }
        os << "\n";
    }
}

namespace {

int run_single(const RunConfig& config, std::ostream& out, std::ostream& err) {
    MechModel model;
    try {
        model = build_model(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    if (config.q0.size() != model.dim_q) {
        err << "config error: q0 has " << config.q0.size() << " components, model needs " << model.dim_q
            << "\n";
        return kConfigError;
    }

    DiscreteSetup setup{model, config.h, config.scheme};
    Vec q1;
    if (config.q1) {
        if (config.q1->size() != model.dim_q) {
            err << "config error: q1 has wrong dimension\n";
            return kConfigError;
        }
        q1 = *config.q1;
    } else {
        if (config.v0->size() != model.dim_q) {
            err << "config error: v0 has wrong dimension\n";
            return kConfigError;
        }
        const SeedPair seed = build_q1_from_velocity(setup, config.q0, *config.v0);
        q1 = seed.q1;
    }

    SolverOptions opts;
    opts.tol = config.tol;
    opts.max_iters = config.max_iters;

    Trajectory traj;
    try {
        traj = run(setup, config.q0, q1, static_cast<int>(config.n_steps) - 1, opts);
    } catch (const std::exception& e) {
        err << "solver failure: " << e.what() << "\n";
        return kSolverError;
    }

    if (traj.seed_constraint_residual > 1e-10)
        err << "warning: seed pair violates the discrete constraint (residual "
            << format_double(traj.seed_constraint_residual) << "); dynamics enforce it from step 1\n";

    const std::string out_path = config.out_path.empty() ? default_out_path(config) : config.out_path;
    {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            err << "i/o error: cannot open " << out_path << "\n";
            return kIoError;
        }
        write_csv(file, traj, model.names, model.num_constraints, config.diagnostics_on);
        if (!file.good()) {
            err << "i/o error: write failed on " << out_path << "\n";
            return kIoError;
        }
    }

    // Summary. Row 0 describes the seed pair, so the violation statistic
    // starts at the first solved step.
    double max_violation = 0.0, e_min = 0.0, e_max = 0.0;
    long total_iters = 0;
    int max_iters_seen = 0;
    for (int k = 0; k < traj.num_points(); ++k) {
        if (k >= 1) max_violation = std::max(max_violation, traj.diagnostics[k].constraint_norm);
        const double e = traj.diagnostics[k].energy_plus;
        if (k == 0) e_min = e_max = e;
        e_min = std::min(e_min, e);
        e_max = std::max(e_max, e);
    }
    for (size_t i = 0; i < traj.newton_iters.size(); ++i) {
        total_iters += traj.newton_iters[i];
        max_iters_seen = std::max(max_iters_seen, traj.newton_iters[i]);
    }
    double max_cond = 0.0;
    for (double c : traj.cond_estimates) max_cond = std::max(max_cond, c);
    if (max_cond > opts.cond_warn)
        err << "warning: jacobian condition estimate " << format_double(max_cond)
            << " exceeds the warning threshold " << format_double(opts.cond_warn) << "\n";

    out << "model: " << config.model_id << " (" << scheme_name(config.scheme) << "), h = "
        << format_double(config.h) << ", steps = " << config.n_steps << "\n";
    out << "wrote " << out_path << " (" << traj.num_points() << " data rows)\n";
    out << "final state:";
    for (Eigen::Index i = 0; i < traj.states.back().size(); ++i)
        out << " " << model.names[static_cast<size_t>(i)] << " = " << format_double(traj.states.back()[i]);
    out << "\n";
    out << "max constraint violation (solved steps): " << format_double(max_violation) << "\n";
    out << "energy min/max: " << format_double(e_min) << " / " << format_double(e_max) << "\n";
    out << "newton iterations: total " << total_iters << ", mean "
        << format_double(traj.newton_iters.empty()
                             ? 0.0
                             : static_cast<double>(total_iters) / static_cast<double>(traj.newton_iters.size()))
        << ", max " << max_iters_seen << "\n";
    out << "max jacobian condition estimate: " << format_double(max_cond) << "\n";
    return kOk;
}

std::string sweep_out_path(const RunConfig& config, double h) {
    std::string base = config.out_path.empty() ? default_out_path(config) : config.out_path;
    const auto dot = base.rfind('.');
    const std::string suffix = "_h" + format_double(h);
    if (dot == std::string::npos) return base + suffix;
    return base.substr(0, dot) + suffix + base.substr(dot);
}

}  // namespace

int run_and_emit(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.sweep_h.empty()) return run_single(config, out, err);

    // Independent runs, one thread and one output file per step size.
    std::vector<int> codes(config.sweep_h.size(), kOk);
    std::vector<std::ostringstream> outs(config.sweep_h.size()), errs(config.sweep_h.size());
    std::vector<std::thread> workers;
    for (size_t i = 0; i < config.sweep_h.size(); ++i) {
        workers.emplace_back([&, i] {
            RunConfig single = config;
            single.h = config.sweep_h[i];
            single.sweep_h.clear();
            single.out_path = sweep_out_path(config, config.sweep_h[i]);
            codes[i] = run_single(single, outs[i], errs[i]);
        });
    }
    for (auto& w : workers) w.join();
    int worst = kOk;
    for (size_t i = 0; i < codes.size(); ++i) {
        out << outs[i].str();
        err << errs[i].str();
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_config(argc, argv);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    if (config.dump_config) {
        out << dump_config(config);
        return kOk;
    }
    return run_and_emit(config, out, err);
}

}  // namespace diracint::cli
