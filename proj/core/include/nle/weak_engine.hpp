#pragma once

// Existence construction as an algorithm: mollified occupancy, Picard map of
// the perturbed equation, damped fixed point per epsilon, and continuation.

#include <optional>
#include <vector>

#include "nle/eikonal.hpp"
#include "nle/grid.hpp"
#include "nle/velocity.hpp"
#include "nle/weak_solution.hpp"

namespace nle {

/// Affine ramp: 0 for r <= -eps, 1 for r >= 0.
double psi(double r, double eps);
OccupancyField psi_field(const ScalarField& u, double eps);

struct FixedPointConfig {
    std::vector<double> eps_schedule;  // strictly decreasing, positive
    int max_iterations = 200;
    double tolerance = 0.0;
    double damping = 1.0;

    /// Schedule {4h, 2h, h}, tolerance h^2.
    static FixedPointConfig defaults(double h);
    void validate() const;
};

/// u_t = (c0 * chi + c1) |Du| on [0, horizon] from u0.
struct NonlocalProblem {
    Kernel kernel = Kernel::zero();
    ExternalVelocity c1 = ExternalVelocity::constant(0.0);
    ScalarField u0;
    double horizon = 0.0;
    /// Times at which chi and cbar are refreshed; cbar is frozen in between.
    /// Empty means default_snapshot_times.
    std::vector<double> snapshot_times;
    double cfl = kDefaultCfl;
    Upwinding upwinding = Upwinding::godunov;
    std::size_t max_steps = 2'000'000;

    void validate() const;
    /// M = M0 + M1 from the declared constants.
    [[nodiscard]] double speed_bound() const;
    /// Uniform times about four CFL steps apart, plus `extra` times.
    [[nodiscard]] std::vector<double> default_snapshot_times(const std::vector<double>& extra = {}) const;
    [[nodiscard]] std::vector<double> times() const;
};

struct PicardImage {
    Trajectory u;
    std::vector<OccupancyField> chi;
    std::vector<ScalarField> cbar;
};

/// cbar_s = c0 * psi_eps(u(t_s)) + c1(t_s), frozen on [t_s, t_{s+1}); solve from u0.
PicardImage picard_map(const Trajectory& u, double eps, const NonlocalProblem& problem);

/// Speeds built from a trajectory and then used to re-solve; shared by the
/// Picard map and the frozen-indicator start.
std::vector<ScalarField> total_velocities(const std::vector<OccupancyField>& chi,
                                          const NonlocalProblem& problem,
                                          const std::vector<double>& times);

/// Solve with chi frozen to the indicator of {u0 >= 0}.
Trajectory frozen_indicator_start(const NonlocalProblem& problem);

struct FixedPointResult {
    Trajectory u;
    LevelRecord record;
};

FixedPointResult fixed_point(double eps, const NonlocalProblem& problem,
                             const FixedPointConfig& config,
                             std::optional<Trajectory> warm_start = std::nullopt);

WeakSolution continuation(const NonlocalProblem& problem, const FixedPointConfig& config);

/// Per snapshot h^N times the number of nodes with chi < 1 where u > band,
/// or chi > 0 where u < -band.
std::vector<double> sandwich_check(const Trajectory& u, const std::vector<OccupancyField>& chi,
                                   double band);

/// Per snapshot: |{|u| <= 2h}| <= 8h * front_perimeter(u).
std::vector<bool> classicality_check(const Trajectory& u);

}  // namespace nle
