#pragma once

// Monotone explicit solver for u_t = c(x, t) |Du| with a prescribed speed,
// and the 1D Oleinik-Lax inf/sup formulas used as exact oracles.

#include <cstddef>
#include <functional>
#include <vector>

#include "nle/grid.hpp"

namespace nle {

/// Largest CFL number dt sqrt(N) max|c| / h for which `step` is monotone.
/// At a local extremum both one-sided terms of an axis are active, so the
/// diagonal coefficient is 1 - dt |c| sqrt(2N) / h.
inline constexpr double kMonotoneCflLimit = 0.70710678118654752;
inline constexpr double kDefaultCfl = 0.45;

enum class Upwinding {
    godunov,
    /// Deliberately wrong upwind choice; only used to check that the verification batteries fail.
    flipped,
};

struct StepOptions {
    double cfl_limit = kMonotoneCflLimit;
    Upwinding upwinding = Upwinding::godunov;
};

/// cfl * h / (sqrt(N) * max_speed); +inf for zero speed.
double cfl_time_step(const GridSpec& grid, double max_speed, double cfl);

/// One explicit step: u + dt [max(c,0) grad- + min(c,0) grad+], clamped to [-1, 1].
/// Throws StepSizeError when dt sqrt(N) max|c| / h exceeds the CFL limit.
ScalarField step(const ScalarField& u, const ScalarField& speed, double dt,
                 const StepOptions& options = {});

/// Speed to use on the step [t0, t1). Providers that know time integrals may
/// return the step average; others return the left-endpoint value.
using VelocityProvider = std::function<ScalarField(double t0, double t1)>;

/// Speed held constant between consecutive record times (left endpoint).
VelocityProvider piecewise_constant_velocity(std::vector<double> times,
                                             std::vector<ScalarField> speeds);

struct EikonalProblem {
    ScalarField initial;
    VelocityProvider velocity;
    double horizon = 0.0;
    /// Upper bound of |c| over the run; fixes the step size.
    double speed_bound = 0.0;
    double cfl = kDefaultCfl;
    /// Output times in [0, horizon]; empty means {0, horizon}.
    std::vector<double> snapshot_times;
    std::size_t max_steps = 2'000'000;
    Upwinding upwinding = Upwinding::godunov;

    void validate() const;
};

/// Explicit time stepping with steps aligned to the snapshot times, so each
/// snapshot is an exactly completed step.
Trajectory solve(const EikonalProblem& problem);

/// Number of steps `solve` takes to cover [t0, t1].
std::size_t steps_between(double t0, double t1, double max_dt);

/// v(x) = min over nodes y with |x - y| <= radius of u0(y). 1D only.
ScalarField oleinik_lax_inf(const ScalarField& u0, double radius);
/// v(x) = max over nodes y with |x - y| <= radius of u0(y). 1D only.
ScalarField oleinik_lax_sup(const ScalarField& u0, double radius);

}  // namespace nle
