#include "nle/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nle/analysis.hpp"
#include "nle/error.hpp"
#include "nle/field_io.hpp"
#include "nle/velocity.hpp"
#include "nle/weak_engine.hpp"

namespace nle {

namespace {
constexpr double kTimeTol = 1e-12;
}

GammaControl GammaControl::constant(double value) { return piecewise({{1.0, value}}); }

GammaControl GammaControl::piecewise(std::vector<std::pair<double, double>> pieces) {
    if (pieces.empty()) throw PreconditionError("gamma: at least one piece is required");
    if (pieces.front().first != 1.0) throw PreconditionError("gamma: the first breakpoint must be t = 1");
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto [t, v] = pieces[k];
        if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("gamma: values must lie in [0, 1]");
        if (!(t >= 1.0 && t < 2.0)) throw PreconditionError("gamma: breakpoints must lie in [1, 2)");
        if (k > 0 && !(t > pieces[k - 1].first)) {
            throw PreconditionError("gamma: breakpoints must increase strictly");
        }
    }
    return GammaControl(std::move(pieces));
}

double GammaControl::operator()(double t) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double v, const auto& p) { return v < p.first; });
    if (it == pieces_.begin()) return pieces_.front().second;
    return std::prev(it)->second;
}

std::string GammaControl::describe() const {
    std::ostringstream s;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        if (k) s << ';';
        s << format_double(pieces_[k].first) << ':' << format_double(pieces_[k].second);
    }
    return s.str();
}

double c1_of_t(double t) {
    if (!(t >= -kTimeTol && t <= 2.0 + kTimeTol)) throw PreconditionError("c1_of_t: t must lie in [0, 2]");
    return 2.0 * (t - 1.0) * (2.0 - t);
}

double x1_of_t(double t) {
    if (!(t >= -kTimeTol && t <= 1.0 + kTimeTol)) throw PreconditionError("x1_of_t: t must lie in [0, 1]");
    return (t - 1.0) * (t - 1.0);
}

YGamma::YGamma(std::vector<double> times, std::vector<double> values, std::vector<double> left_slopes,
               std::vector<double> right_slopes)
    : times_(std::move(times)),
      values_(std::move(values)),
      left_(std::move(left_slopes)),
      right_(std::move(right_slopes)) {}

double YGamma::operator()(double t) const {
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double dt = times_[k + 1] - times_[k];
    const double s = (t - times_[k]) / dt;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * values_[k] + h10 * dt * right_[k] + h01 * values_[k + 1] + h11 * dt * left_[k];
}

YGamma solve_y_gamma(const GammaControl& gamma, double mesh) {
    if (!(mesh > 0.0 && mesh <= 1e-3)) throw PreconditionError("solve_y_gamma: mesh must lie in (0, 1e-3]");
    std::vector<double> times{1.0}, values{0.0}, left, right;
    const auto& pieces = gamma.pieces();
    double y = 0.0;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        const double a = pieces[p].first;
        const double b = p + 1 < pieces.size() ? pieces[p + 1].first : 2.0;
        const double g = pieces[p].second;
        auto f = [g](double t, double v) { return 2.0 * (t - 1.0) * (2.0 - t) + 2.0 * g * v; };
        const auto n = static_cast<std::size_t>(std::ceil((b - a) / mesh - 1e-9));
        for (std::size_t k = 0; k < n; ++k) {
            const double t0 = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
            const double t1 = k + 1 == n ? b : a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(n);
            const double dt = t1 - t0;
            const double k1 = f(t0, y);
            const double k2 = f(t0 + dt / 2, y + dt / 2 * k1);
            const double k3 = f(t0 + dt / 2, y + dt / 2 * k2);
            const double k4 = f(t1, y + dt * k3);
            const double next = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            right.push_back(k1);
            left.push_back(f(t1, next));
            y = next;
            times.push_back(t1);
            values.push_back(y);
        }
    }
    return YGamma(std::move(times), std::move(values), std::move(left), std::move(right));
}

CounterexampleSolution::CounterexampleSolution(GammaControl gamma, double mesh)
    : gamma_(std::move(gamma)), y_(solve_y_gamma(gamma_, mesh)) {
    // |c1 + 2 x1| = 2(1 - t) <= 2 on [0, 1].
    speed_bound_ = 2.0;
    const auto& ts = y_.times();
    const auto& ys = y_.values();
    for (std::size_t k = 0; k < ts.size(); ++k) {
        speed_bound_ = std::max(speed_bound_, std::abs(c1_of_t(ts[k]) + 2.0 * gamma_(ts[k]) * ys[k]));
    }
    // Margin for the values between samples.
    speed_bound_ *= 1.01;
}

double CounterexampleSolution::front(double t) const { return t <= 1.0 ? x1_of_t(t) : y_(t); }

double CounterexampleSolution::U(double x, double t) const {
    if (t <= 1.0) return std::max(x1_of_t(t) - std::abs(x), -1.0);
    const double y = y_(t);
    const double ax = std::abs(x);
    return ax <= y ? 0.0 : std::max(-(ax - y), -1.0);
}

double CounterexampleSolution::chi(double x, double t) const {
    if (t <= 1.0) return std::abs(x) <= x1_of_t(t) ? 1.0 : 0.0;
    return std::abs(x) <= y_(t) ? gamma_(t) : 0.0;
}

double CounterexampleSolution::speed(double t) const {
    if (t <= 1.0) return c1_of_t(t) + 2.0 * x1_of_t(t);
    return c1_of_t(t) + 2.0 * gamma_(t) * y_(t);
}

double CounterexampleSolution::speed_average(double t0, double t1) const {
    // c_gamma is the time derivative of the front on each phase.
    if (!(t1 > t0)) return speed(t0);
    return (front(t1) - front(t0)) / (t1 - t0);
}

ScalarField CounterexampleSolution::sample_U(const GridSpec& grid, double t) const {
    return ScalarField::sample(grid, [&](const Point& p) { return U(p[0], t); });
}

OccupancyField CounterexampleSolution::sample_chi(const GridSpec& grid, double t) const {
    return OccupancyField(ScalarField::sample(grid, [&](const Point& p) { return chi(p[0], t); }));
}

bool CounterexampleVerification::passed() const {
    return sup_error <= 2.0 * h && sandwich_violation == 0.0 && consistency_error <= 2.0 * h;
}

double zero_set_measure(const ScalarField& u) {
    // Guard against node coordinates that miss multiples of h by rounding.
    const double h = u.grid().h * (1.0 - 1e-9);
    return sublevel_measure(u, {-h, h, false, false});
}

double fattening_measure(const CounterexampleSolution& solution, double t, const GridSpec& grid) {
    if (!(t >= 0.0 && t <= 2.0)) throw PreconditionError("fattening_measure: t must lie in [0, 2]");
    return zero_set_measure(solution.sample_U(grid, t));
}

double nonuniqueness_gap(const CounterexampleSolution& a, const CounterexampleSolution& b, double t,
                         const GridSpec& grid) {
    if (!(t >= 1.0 && t <= 2.0)) throw PreconditionError("nonuniqueness_gap: t must lie in [1, 2]");
    const ScalarField ua = a.sample_U(grid, t);
    const ScalarField ub = b.sample_U(grid, t);
    std::size_t count = 0;
    for (std::size_t k = 0; k < ua.size(); ++k) {
        if ((ua[k] >= 0.0) != (ub[k] >= 0.0)) ++count;
    }
    return static_cast<double>(count) * grid.node_volume();
}

CounterexampleVerification verify_weak_solution(const CounterexampleSolution& solution,
                                                const GridSpec& grid, double cfl) {
    grid.validate();
    if (grid.dimension != 1) {
        throw UnsupportedDimensionError("the counterexample is one-dimensional");
    }
    if (!grid.contains_ball(3.0)) throw PreconditionError("verify_weak_solution: grid must contain [-3, 3]");

    const double dt_cfl = cfl_time_step(grid, solution.speed_bound(), cfl);
    const auto per_unit = static_cast<std::size_t>(std::ceil(1.0 / dt_cfl));
    std::vector<double> times;
    for (std::size_t k = 0; k <= 2 * per_unit; ++k) {
        times.push_back(static_cast<double>(k) / static_cast<double>(per_unit));
    }

    EikonalProblem problem;
    problem.initial = solution.sample_U(grid, 0.0);
    problem.velocity = [&](double t0, double t1) {
        return ScalarField(grid, solution.speed_average(t0, t1));
    };
    problem.horizon = 2.0;
    problem.speed_bound = solution.speed_bound();
    problem.cfl = cfl;
    problem.snapshot_times = times;

    CounterexampleVerification out;
    out.h = grid.h;
    WeakSolution& w = out.solution;
    w.u = solve(problem);
    w.cfl = cfl;
    w.speed_bound = solution.speed_bound();
    w.eps_final = 0.0;
    w.band_tolerance = 2.0 * grid.h;
    w.selection_note = "closed-form family member gamma = " + solution.gamma().describe();

    const Kernel indicator = Kernel::indicator(4.0, 1);
    const KernelStencil stencil = indicator.stencil(grid);
    for (std::size_t s = 0; s < times.size(); ++s) {
        const double t = times[s];
        w.chi.push_back(solution.sample_chi(grid, t));
        const double next = s + 1 < times.size() ? times[s + 1] : t;
        w.cbar.emplace_back(grid, solution.speed_average(t, next));

        const ScalarField conv = convolve(stencil, w.chi.back());
        const double c = solution.speed(t);
        for (std::size_t k = 0; k < conv.size(); ++k) {
            if (std::abs(conv.position(k)[0]) > 3.0 + 1e-12) continue;
            out.consistency_error = std::max(out.consistency_error, std::abs(c - (conv[k] + c1_of_t(t))));
        }
    }

    const std::vector<double> sandwich = sandwich_check(w.u, w.chi, w.band_tolerance);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t s = 0; s < times.size(); ++s) {
        const double t = times[s];
        const ScalarField& u = w.u.fields[s];
        CounterexampleRow row;
        row.t = t;
        row.x1 = t <= 1.0 ? x1_of_t(t) : nan;
        row.y_gamma = t >= 1.0 ? solution.y()(t) : nan;
        row.front_measure = sublevel_measure(u, ValueInterval::at_least(0.0));
        row.zero_set_measure = zero_set_measure(u);
        row.sup_error = sup_distance(u, solution.sample_U(grid, t));
        row.sandwich_violation = sandwich[s];
        out.sup_error = std::max(out.sup_error, row.sup_error);
        out.sandwich_violation = std::max(out.sandwich_violation, row.sandwich_violation);
        out.rows.push_back(row);

        SnapshotDiagnostics d;
        d.time = t;
        d.sandwich_violation = row.sandwich_violation;
        d.min_cbar = w.cbar[s].min();
        d.lipschitz = lipschitz_estimate(u);
        d.gradient_margin = gradient_margin(u);
        w.diagnostics.push_back(d);
    }
    const std::vector<bool> classical = classicality_check(w.u);
    for (std::size_t s = 0; s < times.size(); ++s) w.diagnostics[s].classical = classical[s];
    return out;
}

}  // namespace nle
