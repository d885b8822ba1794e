#include "nle/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nle/error.hpp"

namespace nle {

double cfl_time_step(const GridSpec& grid, double max_speed, double cfl) {
    if (!(max_speed > 0.0)) return std::numeric_limits<double>::infinity();
    return cfl * grid.h / (std::sqrt(static_cast<double>(grid.dimension)) * max_speed);
}

ScalarField step(const ScalarField& u, const ScalarField& speed, double dt,
                 const StepOptions& options) {
    const GridSpec& g = u.grid();
    if (!(speed.grid() == g)) throw PreconditionError("step: speed lives on a different grid");
    if (!(dt >= 0.0)) throw StepSizeError("step: negative time step");

    double max_speed = 0.0;
    for (double c : speed.values()) max_speed = std::max(max_speed, std::abs(c));
    const double courant = dt * std::sqrt(static_cast<double>(g.dimension)) * max_speed / g.h;
    if (courant > options.cfl_limit * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step: CFL number " << courant << " exceeds the monotone limit " << options.cfl_limit;
        throw StepSizeError(msg.str());
    }

    ScalarField out(g);
    const bool flipped = options.upwinding == Upwinding::flipped;
    for (int j = 0; j < g.nodes[1]; ++j) {
        for (int i = 0; i < g.nodes[0]; ++i) {
            const std::size_t k = g.index(i, j);
            const double c = speed[k];
            double v = u[k];
            if (c != 0.0) {
                const GodunovPair grad = godunov_at(u, i, j);
                const double up = flipped ? grad.plus : grad.minus;
                const double down = flipped ? grad.minus : grad.plus;
                v += dt * (c > 0.0 ? c * up : c * down);
            }
            out[k] = std::clamp(v, -1.0, 1.0);
        }
    }
    return out;
}

VelocityProvider piecewise_constant_velocity(std::vector<double> times,
                                             std::vector<ScalarField> speeds) {
    if (times.empty() || times.size() != speeds.size()) {
        throw PreconditionError("piecewise_constant_velocity: need one speed field per time");
    }
    return [times = std::move(times), speeds = std::move(speeds)](double t0, double) {
        // Last record time <= t0, tolerant to rounding in accumulated step times.
        const double tol = 1e-9 * std::max(1.0, std::abs(t0));
        auto it = std::upper_bound(times.begin(), times.end(), t0 + tol);
        const std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
        return speeds[k];
    };
}

void EikonalProblem::validate() const {
    if (!(horizon > 0.0)) throw PreconditionError("eikonal problem: horizon must be positive");
    if (!(cfl > 0.0) || cfl > kMonotoneCflLimit) {
        throw PreconditionError("eikonal problem: CFL factor must lie in (0, 1/sqrt(2)]");
    }
    if (!velocity) throw PreconditionError("eikonal problem: missing velocity provider");
    if (!(speed_bound >= 0.0)) throw PreconditionError("eikonal problem: negative speed bound");
    for (double v : initial.values()) {
        if (!(v >= -1.0 && v <= 1.0)) {
            throw PreconditionError("eikonal problem: initial values must lie in [-1, 1]");
        }
    }
    for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
        const double t = snapshot_times[k];
        if (t < 0.0 || t > horizon * (1.0 + 1e-12)) {
            throw PreconditionError("eikonal problem: snapshot time outside [0, horizon]");
        }
        if (k > 0 && !(t > snapshot_times[k - 1])) {
            throw PreconditionError("eikonal problem: snapshot times must increase strictly");
        }
    }
}

std::size_t steps_between(double t0, double t1, double max_dt) {
    if (!(t1 > t0)) return 0;
    if (!std::isfinite(max_dt)) return 1;
    return static_cast<std::size_t>(std::ceil((t1 - t0) / max_dt * (1.0 - 1e-12)));
}

Trajectory solve(const EikonalProblem& problem) {
    problem.validate();
    const GridSpec& g = problem.initial.grid();
    std::vector<double> times = problem.snapshot_times;
    if (times.empty()) times = {0.0, problem.horizon};

    const double max_dt = cfl_time_step(g, problem.speed_bound, problem.cfl);
    std::size_t total = steps_between(0.0, times.front(), max_dt);
    for (std::size_t k = 1; k < times.size(); ++k) total += steps_between(times[k - 1], times[k], max_dt);
    if (total > problem.max_steps) {
        throw ResourceError("eikonal solve needs " + std::to_string(total) + " steps, budget is " +
                            std::to_string(problem.max_steps));
    }

    const StepOptions options{kMonotoneCflLimit, problem.upwinding};
    Trajectory out;
    out.times = times;
    out.fields.reserve(times.size());
    ScalarField u = problem.initial;
    double t = 0.0;
    for (double target : times) {
        const std::size_t n = steps_between(t, target, max_dt);
        const double t_start = t;
        for (std::size_t s = 0; s < n; ++s) {
            const double t0 = t_start + (target - t_start) * static_cast<double>(s) / static_cast<double>(n);
            const double t1 = t_start + (target - t_start) * static_cast<double>(s + 1) / static_cast<double>(n);
            const ScalarField c = problem.velocity(t0, t1);
            u = step(u, c, t1 - t0, options);
        }
        t = target;
        out.fields.push_back(u);
    }
    return out;
}

namespace {

template <class Pick>
ScalarField oleinik_lax(const ScalarField& u0, double radius, Pick pick) {
    const GridSpec& g = u0.grid();
    if (g.dimension != 1) {
        throw UnsupportedDimensionError("Oleinik-Lax formulas are implemented in 1D only");
    }
    if (!(radius >= 0.0)) throw PreconditionError("Oleinik-Lax radius must be non-negative");
    const int w = static_cast<int>(std::floor(radius / g.h + 1e-9));
    const int n = g.nodes[0];
    ScalarField out(g);
    for (int i = 0; i < n; ++i) {
        double v = u0.at(i);
        for (int k = std::max(0, i - w); k <= std::min(n - 1, i + w); ++k) v = pick(v, u0.at(k));
        out.at(i) = v;
    }
    return out;
}

}  // namespace

ScalarField oleinik_lax_inf(const ScalarField& u0, double radius) {
    return oleinik_lax(u0, radius, [](double a, double b) { return std::min(a, b); });
}

ScalarField oleinik_lax_sup(const ScalarField& u0, double radius) {
    return oleinik_lax(u0, radius, [](double a, double b) { return std::max(a, b); });
}

}  // namespace nle
