#pragma once

// Experiment configuration read from a YAML file.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nle/counterexample.hpp"
#include "nle/eikonal.hpp"
#include "nle/grid.hpp"
#include "nle/velocity.hpp"
#include "nle/weak_engine.hpp"

namespace nle {

struct KernelSpec {
    std::string type = "zero";  // zero | indicator | triangle | zero_mean_wavelet | samples
    double radius = 1.0;        // indicator
    double a = 1.0;             // triangle, zero_mean_wavelet
    double l1_norm = 1.0;       // zero_mean_wavelet
    std::filesystem::path file; // samples

    [[nodiscard]] Kernel build(int dimension) const;
};

struct ExternalSpec {
    std::string type = "constant";  // constant | quadratic | table
    double value = 0.0;
    std::vector<std::pair<double, double>> table;

    [[nodiscard]] ExternalVelocity build() const;
};

struct InitialSpec {
    std::string type = "hat";  // hat | ball | csv
    std::vector<double> center{0.0, 0.0};
    double radius = 1.0;
    std::filesystem::path file;

    /// hat is the ball of radius 1 at the origin: clamp(radius - |x - center|, -1, 1).
    [[nodiscard]] ScalarField build(const GridSpec& grid) const;
};

struct EngineSpec {
    std::vector<double> eps;  // empty: {4h, 2h, h}
    int max_iterations = 200;
    std::optional<double> tolerance;  // default h^2
    double damping = 1.0;
    double cfl = kDefaultCfl;

    [[nodiscard]] FixedPointConfig build(double h) const;
};

struct DiagnosticsSpec {
    std::optional<double> rho;  // default eta_hat / 4
    double delta = 0.0;
};

struct VerifySpec {
    std::vector<std::string> batteries;  // absent means all; an empty list is rejected by run_verify
    bool batteries_given = false;
    std::string inject_fault = "none";   // none | flip_upwind
    int samples = 200;
};

struct ConvergenceSpec {
    std::string experiment = "counterexample";  // counterexample | expanding_circle
    std::vector<double> grids;
    GammaControl gamma = GammaControl::constant(1.0);
};

struct ExperimentConfig {
    GridSpec grid;
    double box_lower = 0.0;
    double box_upper = 0.0;
    double horizon = 1.0;
    std::vector<double> snapshots;
    KernelSpec kernel;
    ExternalSpec c1;
    InitialSpec u0;
    EngineSpec engine;
    DiagnosticsSpec diagnostics;
    std::filesystem::path output_directory = "output";
    std::uint64_t seed = 1;
    std::vector<GammaControl> gammas;
    VerifySpec verify;
    ConvergenceSpec convergence;
    /// FNV-1a of the configuration text.
    std::uint64_t hash = 0;

    /// Grid at another spacing over the same box.
    [[nodiscard]] GridSpec grid_at(double h) const;
    [[nodiscard]] NonlocalProblem problem(const GridSpec& grid) const;
    [[nodiscard]] NonlocalProblem problem() const { return problem(grid); }
};

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Parses YAML text; relative file paths resolve against `base_dir`. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir = std::filesystem::current_path());
ExperimentConfig load_config(const std::filesystem::path& path);

/// The box must contain B(0, R0 + M T) with R0 the far-field radius of u0. Throws ConfigError.
void check_finite_speed_box(const NonlocalProblem& problem);

}  // namespace nle
