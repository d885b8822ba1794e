#pragma once

// Measurable diagnostics for the structural hypotheses and estimates of the
// nonlocal eikonal theory, evaluated at snapshot times only.

#include <vector>

#include "nle/grid.hpp"
#include "nle/weak_solution.hpp"

namespace nle {

/// min over nodes of |u| + max(grad+, grad-): the lower-bound gradient margin eta.
double gradient_margin(const ScalarField& u);

/// Largest max(0, -(u(x+k) + u(x-k) - 2u(x)) / |k|^2) over lattice offsets 0 < |k| <= max_offset.
/// When `restrict_to` is given only centres x with u(x) in that interval count.
double semiconvexity_modulus(const ScalarField& u, double max_offset,
                             const ValueInterval* restrict_to = nullptr);

/// Per snapshot: every node with inner >= 0 has outer > 0.
std::vector<bool> inclusion_test(const Trajectory& inner, const Trajectory& outer);

/// 1D: number of sign changes of {u >= 0} between neighbours.
/// 2D: marching-squares length of the zero contour.
double front_perimeter(const ScalarField& u);

/// Linear-interpolation points where {u >= 0} changes between axis neighbours.
std::vector<Point> zero_crossings(const ScalarField& u);

/// h^N times the number of nodes where (u1 >= 0) != (u2 >= 0).
double indicator_l1_distance(const ScalarField& u1, const ScalarField& u2);

/// Smallest R with u = -1 at every node outside B(0, R) (plus one cell).
double far_field_radius(const ScalarField& u0);

struct BandGrowthReport {
    double rho = 0.0;
    std::vector<double> times;
    std::vector<double> band_measure;
    std::vector<double> bound;
    double eta0 = 0.0;
    double eta_hat = 0.0;
    double semiconvexity = 0.0;     // C-hat, measured on the band
    double speed_max = 0.0;         // max |cbar|
    double velocity_lipschitz = 0.0;
    double growth_rate = 0.0;       // K-hat = L + 2 C M / eta
    double perimeter0 = 0.0;
    double initial_floor = 0.0;     // max(m(0), 2 rho / eta0 * perimeter0)
    /// (2C/eta0) |B(0, R0 + 1)| e^{K T} rho, logged only.
    double ball_bound = 0.0;
    bool flagged = false;
};

/// Band measures m(t) = |{-rho <= u < 0}| against 1.5 e^{K t} m(0+).
/// `velocities[k]` is the speed field of snapshot k. Requires 0 < rho < eta_hat / 2.
BandGrowthReport band_growth(const Trajectory& u, const std::vector<ScalarField>& velocities,
                             double rho);

struct DependenceRow {
    double time = 0.0;
    double gap = 0.0;
    double bound = 0.0;
    bool holds = true;
};

struct ContinuousDependenceReport {
    std::vector<DependenceRow> rows;
    double lipschitz_u0 = 0.0;
    double lambda = 0.0;
    bool holds = true;
};

/// |u1 - u2|(t) <= Lip(u0) e^{Lambda t} int_0^t |c1 - c2|_inf ds (1 + rel_tol) + abs_slack,
/// with the speeds piecewise constant on snapshot intervals.
ContinuousDependenceReport continuous_dependence_gap(const Trajectory& u1, const Trajectory& u2,
                                                     const std::vector<ScalarField>& c1,
                                                     const std::vector<ScalarField>& c2,
                                                     double rel_tol = 1e-9,
                                                     double abs_slack = 0.0);

/// Re-solves u_t = cbar |Du| from u(., 0) with the recorded speeds and returns
/// the sup-norm distance to the stored trajectory.
double l1_stability_residual(const WeakSolution& w);

}  // namespace nle
