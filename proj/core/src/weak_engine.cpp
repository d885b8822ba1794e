#include "nle/weak_engine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "nle/analysis.hpp"
#include "nle/damped_iteration.hpp"
#include "nle/error.hpp"

namespace nle {

double psi(double r, double eps) {
    if (!(eps > 0.0)) throw PreconditionError("psi: eps must be positive");
    if (r >= 0.0) return 1.0;
    if (r <= -eps) return 0.0;
    return (r + eps) / eps;
}

OccupancyField psi_field(const ScalarField& u, double eps) {
    ScalarField out(u.grid());
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = psi(u[k], eps);
    return OccupancyField(std::move(out));
}

FixedPointConfig FixedPointConfig::defaults(double h) {
    FixedPointConfig c;
    c.eps_schedule = {4.0 * h, 2.0 * h, h};
    c.tolerance = h * h;
    return c;
}

void FixedPointConfig::validate() const {
    if (eps_schedule.empty()) throw ConfigError("fixed point: empty eps schedule");
    for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
        if (!(eps_schedule[k] > 0.0)) throw ConfigError("fixed point: eps values must be positive");
        if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1])) {
            throw ConfigError("fixed point: eps schedule must decrease strictly");
        }
    }
    if (!(tolerance > 0.0)) throw ConfigError("fixed point: tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("fixed point: max_iterations must be at least 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("fixed point: damping must lie in (0, 1]");
}

void NonlocalProblem::validate() const {
    u0.grid().validate();
    if (!(horizon > 0.0)) throw ConfigError("nonlocal problem: horizon must be positive");
    if (!(cfl > 0.0) || cfl > kMonotoneCflLimit) {
        throw ConfigError("nonlocal problem: CFL factor must lie in (0, 1/sqrt(2)]");
    }
    if (!(u0.min() >= -1.0 && u0.max() <= 1.0)) throw ConfigError("nonlocal problem: u0 must take values in [-1, 1]");
}

double NonlocalProblem::speed_bound() const { return velocity_bounds(kernel, c1).speed; }

std::vector<double> NonlocalProblem::default_snapshot_times(const std::vector<double>& extra) const {
    const double dt = cfl_time_step(u0.grid(), speed_bound(), cfl);
    const std::size_t n = std::isfinite(dt) ? std::max<std::size_t>(1, steps_between(0.0, horizon, 4.0 * dt)) : 1;
    std::vector<double> times;
    for (std::size_t k = 0; k <= n; ++k) times.push_back(horizon * static_cast<double>(k) / static_cast<double>(n));
    const double tol = 1e-9 * horizon;
    for (double t : extra) {
        if (t < 0.0 || t > horizon + tol) throw ConfigError("snapshot time outside [0, horizon]");
        const bool present = std::any_of(times.begin(), times.end(),
                                         [&](double s) { return std::abs(s - t) <= tol; });
        if (!present) times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    return times;
}

std::vector<double> NonlocalProblem::times() const {
    if (snapshot_times.empty()) return default_snapshot_times();
    std::vector<double> t = snapshot_times;
    if (t.front() != 0.0) t.insert(t.begin(), 0.0);
    return t;
}

std::vector<ScalarField> total_velocities(const std::vector<OccupancyField>& chi,
                                          const NonlocalProblem& problem,
                                          const std::vector<double>& times) {
    const GridSpec& g = problem.u0.grid();
    std::optional<KernelStencil> fixed;
    if (problem.kernel.time_independent()) fixed = problem.kernel.stencil(g);
    std::vector<ScalarField> out;
    out.reserve(times.size());
    for (std::size_t s = 0; s < times.size(); ++s) {
        ScalarField c = fixed ? convolve(*fixed, chi[s]) : convolve(problem.kernel, chi[s], times[s]);
        if (problem.c1.space_independent()) {
            const double v = problem.c1({0.0, 0.0}, times[s]);
            for (double& x : c.values()) x += v;
        } else {
            const ScalarField e = problem.c1.sample(g, times[s]);
            for (std::size_t k = 0; k < c.size(); ++k) c[k] += e[k];
        }
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

Trajectory solve_frozen(const NonlocalProblem& problem, const std::vector<double>& times,
                        std::vector<ScalarField> cbar) {
    EikonalProblem e;
    e.initial = problem.u0;
    e.velocity = piecewise_constant_velocity(times, std::move(cbar));
    e.horizon = problem.horizon;
    e.speed_bound = problem.speed_bound();
    e.cfl = problem.cfl;
    e.snapshot_times = times;
    e.max_steps = problem.max_steps;
    e.upwinding = problem.upwinding;
    return solve(e);
}

Trajectory blend(const Trajectory& x, const Trajectory& y, double theta) {
    if (theta >= 1.0) return y;
    Trajectory out = x;
    for (std::size_t s = 0; s < out.size(); ++s) {
        auto dst = out.fields[s].values();
        const auto src = y.fields[s].values();
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = (1.0 - theta) * dst[k] + theta * src[k];
    }
    return out;
}

}  // namespace

PicardImage picard_map(const Trajectory& u, double eps, const NonlocalProblem& problem) {
    u.validate();
    PicardImage out;
    out.chi.reserve(u.size());
    for (const auto& f : u.fields) out.chi.push_back(psi_field(f, eps));
    out.cbar = total_velocities(out.chi, problem, u.times);
    out.u = solve_frozen(problem, u.times, out.cbar);
    return out;
}

Trajectory frozen_indicator_start(const NonlocalProblem& problem) {
    problem.validate();
    const std::vector<double> times = problem.times();
    const std::vector<OccupancyField> chi(times.size(), OccupancyField::indicator_of(problem.u0));
    return solve_frozen(problem, times, total_velocities(chi, problem, times));
}

FixedPointResult fixed_point(double eps, const NonlocalProblem& problem,
                             const FixedPointConfig& config, std::optional<Trajectory> warm_start) {
    config.validate();
    problem.validate();
    Trajectory start = warm_start ? std::move(*warm_start) : frozen_indicator_start(problem);

    DampingOptions options;
    options.max_iterations = config.max_iterations;
    options.tolerance = config.tolerance;
    options.initial_damping = config.damping;
    auto result = damped_iteration(
        std::move(start), [&](const Trajectory& x) { return picard_map(x, eps, problem).u; },
        [](const Trajectory& a, const Trajectory& b) { return sup_distance(a, b); }, blend, options);

    FixedPointResult out;
    out.u = std::move(result.value);
    out.record = {eps, result.iterations, result.residual, result.converged, result.damping};
    return out;
}

std::vector<double> sandwich_check(const Trajectory& u, const std::vector<OccupancyField>& chi,
                                   double band) {
    if (chi.size() != u.size()) throw PreconditionError("sandwich_check: snapshot counts differ");
    std::vector<double> out;
    out.reserve(u.size());
    for (std::size_t s = 0; s < u.size(); ++s) {
        const ScalarField& f = u.fields[s];
        if (!(chi[s].grid() == f.grid())) throw PreconditionError("sandwich_check: grids differ");
        std::size_t count = 0;
        for (std::size_t k = 0; k < f.size(); ++k) {
            if ((chi[s][k] < 1.0 && f[k] > band) || (chi[s][k] > 0.0 && f[k] < -band)) ++count;
        }
        out.push_back(static_cast<double>(count) * f.grid().node_volume());
    }
    return out;
}

std::vector<bool> classicality_check(const Trajectory& u) {
    std::vector<bool> out;
    out.reserve(u.size());
    for (const auto& f : u.fields) {
        const double h = f.grid().h;
        const double zero_set = sublevel_measure(f, ValueInterval::closed(-2.0 * h, 2.0 * h));
        out.push_back(zero_set <= 8.0 * h * front_perimeter(f));
    }
    return out;
}

WeakSolution continuation(const NonlocalProblem& problem, const FixedPointConfig& config) {
    config.validate();
    problem.validate();
    WeakSolution w;
    std::optional<Trajectory> current;
    for (double eps : config.eps_schedule) {
        FixedPointResult level = fixed_point(eps, problem, config, std::move(current));
        w.levels.push_back(level.record);
        w.converged = w.converged && level.record.converged;
        current = std::move(level.u);
    }
    w.u = std::move(*current);
    w.eps_final = config.eps_schedule.back();
    const double h = problem.u0.grid().h;
    w.band_tolerance = w.eps_final + 2.0 * h;
    w.cfl = problem.cfl;
    w.speed_bound = problem.speed_bound();
    for (const auto& f : w.u.fields) w.chi.push_back(psi_field(f, w.eps_final));
    w.cbar = total_velocities(w.chi, problem, w.u.times);
    w.selection_note =
        "damped Picard iteration from the frozen-indicator start, warm-started along the eps "
        "schedule; weak solutions need not be unique and this is the one the iteration reached";

    const Trajectory again = solve_frozen(problem, w.u.times, w.cbar);
    const std::vector<double> sandwich = sandwich_check(w.u, w.chi, w.band_tolerance);
    const std::vector<bool> classical = classicality_check(w.u);
    for (std::size_t s = 0; s < w.u.size(); ++s) {
        SnapshotDiagnostics d;
        d.time = w.u.times[s];
        d.residual = sup_distance(again.fields[s], w.u.fields[s]);
        d.sandwich_violation = sandwich[s];
        d.classical = classical[s];
        d.min_cbar = w.cbar[s].min();
        d.lipschitz = lipschitz_estimate(w.u.fields[s]);
        d.gradient_margin = gradient_margin(w.u.fields[s]);
        w.diagnostics.push_back(d);
    }
    return w;
}

}  // namespace nle
