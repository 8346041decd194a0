#include <diracint/models.hpp>

#include <cmath>
#include <stdexcept>

namespace diracint {

MechModel rolling_disk(double m, double I, double J, double R, double pot_amp) {
    if (m <= 0.0 || I <= 0.0 || J <= 0.0 || R <= 0.0)
        throw std::invalid_argument("rolling_disk: m, I, J, R must be positive");
    MechModel model;
    model.dim_q = 4;
    model.num_constraints = 2;
    model.names = {"x", "y", "theta", "phi"};
    model.params = {{"m", m}, {"I", I}, {"J", J}, {"R", R}, {"pot_amp", pot_amp}};
    model.lagrangian = [m, I, J, pot_amp](const Vec& q, const Vec& v) {
        return 0.5 * m * (v[0] * v[0] + v[1] * v[1]) + 0.5 * I * v[2] * v[2] + 0.5 * J * v[3] * v[3] +
               pot_amp * std::sin(q[2]);
    };
    model.grad_q = [pot_amp](const Vec& q, const Vec&) {
        Vec g = Vec::Zero(4);
        g[2] = pot_amp * std::cos(q[2]);
        return g;
    };
    model.grad_v = [m, I, J](const Vec&, const Vec& v) {
        Vec g(4);
        g << m * v[0], m * v[1], I * v[2], J * v[3];
        return g;
    };
    model.constraint = [R](const Vec& q) {
        Mat w = Mat::Zero(2, 4);
        w(0, 0) = 1.0;
        w(0, 2) = -R * std::cos(q[3]);
        w(1, 1) = 1.0;
        w(1, 2) = -R * std::sin(q[3]);
        return w;
    };
    return model;
}

MechModel heisenberg() {
    MechModel model;
    model.dim_q = 3;
    model.num_constraints = 1;
    model.names = {"x", "y", "z"};
    model.lagrangian = [](const Vec&, const Vec& v) { return 0.5 * v.squaredNorm(); };
    model.grad_q = [](const Vec& q, const Vec&) { return Vec(Vec::Zero(q.size())); };
    model.grad_v = [](const Vec&, const Vec& v) { return v; };
    model.constraint = [](const Vec& q) {
        Mat w(1, 3);
        w << -q[1], q[0], 1.0;
        return w;
    };
    return model;
}

MechModel oscillator(double omega0, int n) {
    if (omega0 <= 0.0) throw std::invalid_argument("oscillator: omega0 must be positive");
    if (n < 1) throw std::invalid_argument("oscillator: n must be >= 1");
    MechModel model;
    model.dim_q = n;
    model.num_constraints = 0;
    for (int i = 0; i < n; ++i) model.names.push_back("q" + std::to_string(i));
    model.params = {{"omega0", omega0}};
    const double w2 = omega0 * omega0;
    model.lagrangian = [w2](const Vec& q, const Vec& v) {
        return 0.5 * v.squaredNorm() - 0.5 * w2 * q.squaredNorm();
    };
    model.grad_q = [w2](const Vec& q, const Vec&) { return Vec(-w2 * q); };
    model.grad_v = [](const Vec&, const Vec& v) { return v; };
    return model;
}

MechModel free_particle(int n) {
    if (n < 1) throw std::invalid_argument("free_particle: n must be >= 1");
    MechModel model;
    model.dim_q = n;
    model.num_constraints = 0;
    for (int i = 0; i < n; ++i) model.names.push_back("q" + std::to_string(i));
    model.lagrangian = [](const Vec&, const Vec& v) { return 0.5 * v.squaredNorm(); };
    model.grad_q = [](const Vec& q, const Vec&) { return Vec(Vec::Zero(q.size())); };
    model.grad_v = [](const Vec&, const Vec& v) { return v; };
    return model;
}

MechModel make_model(const ModelSpec& spec) {
    auto merged = [&](std::map<std::string, double> defaults) {
        for (const auto& [name, value] : spec.params) {
            if (defaults.find(name) == defaults.end())
                throw std::invalid_argument("unknown parameter '" + name + "' for model " + spec.id);
            defaults[name] = value;
        }
        return defaults;
    };
    if (spec.id == "rolling_disk") {
        auto p = merged({{"m", 1.0}, {"I", 0.25}, {"J", 0.5}, {"R", 1.0}, {"pot_amp", 10.0}});
        return rolling_disk(p["m"], p["I"], p["J"], p["R"], p["pot_amp"]);
    }
    if (spec.id == "heisenberg") {
        merged({});
        return heisenberg();
    }
    if (spec.id == "oscillator") {
        auto p = merged({{"omega0", 1.0}, {"n", 1.0}});
        return oscillator(p["omega0"], static_cast<int>(p["n"]));
    }
    if (spec.id == "free_particle") {
        auto p = merged({{"n", 1.0}});
        return free_particle(static_cast<int>(p["n"]));
    }
    throw std::invalid_argument("unknown model '" + spec.id + "'");
}

}  // namespace diracint
