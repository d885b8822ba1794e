#include "nle/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nle/analysis.hpp"
#include "nle/error.hpp"
#include "nle/field_io.hpp"

namespace nle {

namespace {

void only_keys(const YAML::Node& node, const std::string& where, std::set<std::string> allowed) {
    if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get(const YAML::Node& node, const std::string& key, T fallback) {
    const YAML::Node v = node[key];
    if (!v) return fallback;
    try {
        return v.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

std::vector<std::pair<double, double>> pairs(const YAML::Node& node, const std::string& what) {
    if (!node.IsSequence()) throw ConfigError(what + ": expected a list of [t, v] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& item : node) {
        if (!item.IsSequence() || item.size() != 2) throw ConfigError(what + ": entries must be [t, v]");
        out.emplace_back(item[0].as<double>(), item[1].as<double>());
    }
    return out;
}

GammaControl gamma_from(const YAML::Node& node) {
    try {
        return GammaControl::piecewise(pairs(node, "gamma"));
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
    return p.is_absolute() ? p : base / p;
}

}  // namespace

Kernel KernelSpec::build(int dimension) const {
    try {
        if (type == "zero") return Kernel::zero();
        if (type == "indicator") return Kernel::indicator(radius, dimension);
        if (type == "triangle") return Kernel::triangle(a, dimension);
        if (type == "zero_mean_wavelet") return Kernel::zero_mean_wavelet(a, l1_norm, dimension);
        if (type == "samples") return Kernel::from_samples(read_field_csv(file).field, file.filename().string());
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("kernel: ") + e.what());
    }
    throw ConfigError("kernel: unknown type '" + type + "'");
}

ExternalVelocity ExternalSpec::build() const {
    if (type == "constant") return ExternalVelocity::constant(value);
    if (type == "quadratic") return ExternalVelocity::counterexample_quadratic();
    if (type == "table") {
        try {
            return ExternalVelocity::time_table(table);
        } catch (const PreconditionError& e) {
            throw ConfigError(std::string("c1: ") + e.what());
        }
    }
    throw ConfigError("c1: unknown type '" + type + "'");
}

ScalarField InitialSpec::build(const GridSpec& grid) const {
    if (type == "hat" || type == "ball") {
        const double r = type == "hat" ? 1.0 : radius;
        const Point c = type == "hat" ? Point{0.0, 0.0}
                                      : Point{center.empty() ? 0.0 : center[0],
                                              center.size() > 1 ? center[1] : 0.0};
        if (!(r > 0.0)) throw ConfigError("u0: radius must be positive");
        return ScalarField::sample(grid, [&](const Point& x) {
            const double d = grid.dimension == 1 ? std::abs(x[0] - c[0]) : std::hypot(x[0] - c[0], x[1] - c[1]);
            return std::clamp(r - d, -1.0, 1.0);
        });
    }
    if (type == "csv") {
        FieldSnapshot s = read_field_csv(file);
        const GridSpec& g = s.field.grid();
        if (g.dimension != grid.dimension || g.nodes != grid.nodes || std::abs(g.h - grid.h) > 1e-12 * grid.h ||
            std::abs(g.lower[0] - grid.lower[0]) > 1e-9 || std::abs(g.lower[1] - grid.lower[1]) > 1e-9) {
            throw ConfigError("u0: CSV grid does not match the configured grid");
        }
        return ScalarField(grid, std::vector<double>(s.field.values().begin(), s.field.values().end()));
    }
    throw ConfigError("u0: unknown type '" + type + "'");
}

FixedPointConfig EngineSpec::build(double h) const {
    FixedPointConfig c = FixedPointConfig::defaults(h);
    if (!eps.empty()) c.eps_schedule = eps;
    if (tolerance) c.tolerance = *tolerance;
    c.max_iterations = max_iterations;
    c.damping = damping;
    c.validate();
    return c;
}

GridSpec ExperimentConfig::grid_at(double h) const {
    if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
    GridSpec g = GridSpec::box(grid.dimension, box_lower, box_upper, h);
    try {
        g.validate();
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
    return g;
}

NonlocalProblem ExperimentConfig::problem(const GridSpec& g) const {
    NonlocalProblem p;
    p.kernel = kernel.build(g.dimension);
    p.c1 = c1.build();
    p.u0 = u0.build(g);
    p.horizon = horizon;
    p.cfl = engine.cfl;
    p.snapshot_times = p.default_snapshot_times(snapshots);
    p.validate();
    return p;
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("configuration is not valid YAML: ") + e.what());
    }
    if (!root || root.IsNull()) throw ConfigError("configuration is empty");

    ExperimentConfig c;
    c.hash = fnv1a(text);
    try {
        only_keys(root, "config",
                  {"experiment", "grid", "horizon", "snapshots", "kernel", "c1", "u0", "engine", "diagnostics",
                   "output", "seed", "gamma", "counterexample", "verify", "convergence"});

        const YAML::Node grid = root["grid"];
        if (!grid) throw ConfigError("config: missing 'grid' section");
        only_keys(grid, "grid", {"dimension", "lower", "upper", "h"});
        const int dim = get(grid, "dimension", 1);
        if (dim != 1 && dim != 2) throw ConfigError("grid: dimension must be 1 or 2");
        c.box_lower = get(grid, "lower", -3.0);
        c.box_upper = get(grid, "upper", 3.0);
        if (!(c.box_upper > c.box_lower)) throw ConfigError("grid: upper must exceed lower");
        c.grid.dimension = dim;
        c.grid = c.grid_at(get(grid, "h", 0.01));

        c.horizon = get(root, "horizon", 1.0);
        if (!(c.horizon > 0.0)) throw ConfigError("horizon must be positive");
        c.snapshots = get(root, "snapshots", std::vector<double>{});
        for (double t : c.snapshots) {
            if (t < 0.0 || t > c.horizon) throw ConfigError("snapshots must lie in [0, horizon]");
        }

        if (const YAML::Node k = root["kernel"]) {
            only_keys(k, "kernel", {"type", "radius", "a", "l1_norm", "file"});
            c.kernel.type = get(k, "type", c.kernel.type);
            c.kernel.radius = get(k, "radius", c.kernel.radius);
            c.kernel.a = get(k, "a", c.kernel.a);
            c.kernel.l1_norm = get(k, "l1_norm", c.kernel.l1_norm);
            if (k["file"]) c.kernel.file = resolve(k["file"].as<std::string>(), base_dir);
        }
        if (const YAML::Node e = root["c1"]) {
            only_keys(e, "c1", {"type", "value", "table"});
            c.c1.type = get(e, "type", c.c1.type);
            c.c1.value = get(e, "value", c.c1.value);
            if (e["table"]) c.c1.table = pairs(e["table"], "c1.table");
        }
        if (const YAML::Node u = root["u0"]) {
            only_keys(u, "u0", {"type", "center", "radius", "file"});
            c.u0.type = get(u, "type", c.u0.type);
            c.u0.center = get(u, "center", c.u0.center);
            c.u0.radius = get(u, "radius", c.u0.radius);
            if (u["file"]) c.u0.file = resolve(u["file"].as<std::string>(), base_dir);
        }
        if (const YAML::Node e = root["engine"]) {
            only_keys(e, "engine", {"eps", "max_iterations", "tolerance", "damping", "cfl"});
            c.engine.eps = get(e, "eps", c.engine.eps);
            c.engine.max_iterations = get(e, "max_iterations", c.engine.max_iterations);
            if (e["tolerance"]) c.engine.tolerance = e["tolerance"].as<double>();
            c.engine.damping = get(e, "damping", c.engine.damping);
            c.engine.cfl = get(e, "cfl", c.engine.cfl);
            if (!(c.engine.cfl > 0.0) || c.engine.cfl > kMonotoneCflLimit) {
                throw ConfigError("engine: cfl must lie in (0, 1/sqrt(2)]");
            }
        }
        if (const YAML::Node d = root["diagnostics"]) {
            only_keys(d, "diagnostics", {"rho", "delta"});
            if (d["rho"]) c.diagnostics.rho = d["rho"].as<double>();
            c.diagnostics.delta = get(d, "delta", c.diagnostics.delta);
        }
        if (const YAML::Node o = root["output"]) {
            only_keys(o, "output", {"directory"});
            c.output_directory = get(o, "directory", c.output_directory.string());
        }
        c.seed = get<std::uint64_t>(root, "seed", c.seed);

        if (root["gamma"]) c.gammas.push_back(gamma_from(root["gamma"]));
        if (const YAML::Node ce = root["counterexample"]) {
            only_keys(ce, "counterexample", {"gammas"});
            if (ce["gammas"]) {
                if (!ce["gammas"].IsSequence()) throw ConfigError("counterexample.gammas: expected a list");
                for (const auto& g : ce["gammas"]) c.gammas.push_back(gamma_from(g));
            }
        }
        if (c.gammas.empty()) c.gammas = {GammaControl::constant(0.0), GammaControl::constant(1.0)};

        if (const YAML::Node v = root["verify"]) {
            only_keys(v, "verify", {"batteries", "inject_fault", "samples"});
            if (v["batteries"]) {
                c.verify.batteries = v["batteries"].as<std::vector<std::string>>();
                c.verify.batteries_given = true;
            }
            c.verify.inject_fault = get(v, "inject_fault", c.verify.inject_fault);
            if (c.verify.inject_fault != "none" && c.verify.inject_fault != "flip_upwind") {
                throw ConfigError("verify: unknown inject_fault '" + c.verify.inject_fault + "'");
            }
            c.verify.samples = get(v, "samples", c.verify.samples);
            if (c.verify.samples < 1) throw ConfigError("verify: samples must be positive");
        }
        if (const YAML::Node cv = root["convergence"]) {
            only_keys(cv, "convergence", {"experiment", "grids", "gamma"});
            c.convergence.experiment = get(cv, "experiment", c.convergence.experiment);
            if (c.convergence.experiment != "counterexample" && c.convergence.experiment != "expanding_circle") {
                throw ConfigError("convergence: unknown experiment '" + c.convergence.experiment + "'");
            }
            c.convergence.grids = get(cv, "grids", c.convergence.grids);
            if (cv["gamma"]) c.convergence.gamma = gamma_from(cv["gamma"]);
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("configuration: ") + e.what());
    }
    // Every referenced builtin or file must resolve before a run starts.
    try {
        (void)c.kernel.build(c.grid.dimension);
        (void)c.c1.build();
        (void)c.u0.build(c.grid);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("configuration: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path().empty() ? std::filesystem::current_path() : path.parent_path());
}

void check_finite_speed_box(const NonlocalProblem& problem) {
    const double r0 = far_field_radius(problem.u0);
    const double reach = r0 + problem.speed_bound() * problem.horizon;
    if (!problem.u0.grid().contains_ball(reach)) {
        std::ostringstream msg;
        msg << "grid box does not contain B(0, R0 + M T) = B(0, " << reach << ") (R0 = " << r0
            << ", M = " << problem.speed_bound() << ", T = " << problem.horizon << ")";
        throw ConfigError(msg.str());
    }
}

}  // namespace nle
