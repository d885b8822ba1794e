#pragma once

// The four entry points of the command-line tool. Each returns an exit code.

#include <filesystem>
#include <iosfwd>
#include <cstdint>
#include <optional>
#include <vector>

#include "nle/config.hpp"

namespace nle {

enum ExitCode : int {
    kExitPass = 0,
    kExitPropertyFailure = 1,
    kExitConfigError = 2,
    kExitNonConvergence = 3,
};

struct RunOptions {
    /// Replaces the configured output root when set (see output_root_from_env).
    std::optional<std::filesystem::path> output_root;
    std::optional<std::uint64_t> seed;
    std::ostream* log = nullptr;  // defaults to std::cout
};

/// Value of NLE_OUTPUT_ROOT, if set and non-empty.
std::optional<std::filesystem::path> output_root_from_env();

/// Configured output directory, placed under the override root when one is given.
std::filesystem::path output_directory(const ExperimentConfig& config, const RunOptions& options);

int run_simulate(const ExperimentConfig& config, const RunOptions& options = {});
int run_counterexample(const ExperimentConfig& config, const RunOptions& options = {});
int run_verify(const ExperimentConfig& config, const RunOptions& options = {});
/// `grids` replaces convergence.grids from the configuration when non-empty.
int run_convergence(const ExperimentConfig& config, std::vector<double> grids = {},
                    const RunOptions& options = {});

/// Radius r(t) of the circle {u >= 0} for a radial kernel and a space-independent c1,
/// from r' = c1(t) + (c0 * 1_{B(0,r)})(r e1) with RK4.
double expanding_circle_radius(const Kernel& kernel, const ExternalVelocity& c1, double r0, double t,
                               int dimension = 2);

/// Least-squares slope of log(error) against log(h).
double fitted_rate(const std::vector<double>& h, const std::vector<double>& error);

}  // namespace nle
