#pragma once

#include <string>
#include <vector>

#include "nle/grid.hpp"
#include "nle/velocity.hpp"

namespace nle {

struct SnapshotDiagnostics {
    double time = 0.0;
    double residual = 0.0;
    double sandwich_violation = 0.0;
    bool classical = false;
    double min_cbar = 0.0;
    double lipschitz = 0.0;
    double gradient_margin = 0.0;
};

/// One epsilon level of the continuation.
struct LevelRecord {
    double eps = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    double damping = 1.0;
};

/// A computed weak solution: u, the occupancy chi squeezed between the
/// indicators of {u > 0} and {u >= 0}, and the velocity cbar = c0 * chi + c1.
/// cbar[k] is the speed used on [times[k], times[k+1]).
struct WeakSolution {
    Trajectory u;
    std::vector<OccupancyField> chi;
    std::vector<ScalarField> cbar;
    /// Settings of the frozen-velocity solver that produced u.
    double cfl = 0.0;
    double speed_bound = 0.0;
    double eps_final = 0.0;
    double band_tolerance = 0.0;
    std::vector<LevelRecord> levels;
    std::vector<SnapshotDiagnostics> diagnostics;
    bool converged = true;
    std::string selection_note;

    void validate() const;
};

}  // namespace nle
