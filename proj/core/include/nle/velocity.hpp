#pragma once

// Kernels c0, external velocities c1, the discrete spatial convolution and
// the total velocity cbar = c0 * chi + c1.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nle/grid.hpp"

namespace nle {

/// Regularity constants of a kernel. N0 is a scalar surrogate of the
/// semiconvexity modulus; NaN when not declared.
struct KernelConstants {
    double l1_norm = 0.0;          // M0
    double gradient_l1_norm = 0.0; // L0
    double sup_norm = 0.0;         // m0
    double semiconvexity = 0.0;    // N0
};

/// Kernel samples at integer node offsets in [-radius, radius]^N.
struct KernelStencil {
    int dimension = 1;
    int radius = 0;
    double h = 1.0;
    std::vector<double> weights;

    [[nodiscard]] int width() const { return 2 * radius + 1; }
    [[nodiscard]] double at(int di, int dj = 0) const {
        return weights[static_cast<std::size_t>((dj + (dimension == 2 ? radius : 0)) * width() +
                                                di + radius)];
    }
    [[nodiscard]] bool is_zero() const;
    /// Constants measured on the samples (L0 from forward differences).
    [[nodiscard]] KernelConstants measure() const;
};

class Kernel {
public:
    using Profile = std::function<double(const Point& z, double t)>;
    using StencilBuilder = std::function<KernelStencil(const GridSpec& grid, double t)>;

    static Kernel zero();
    /// c0 = 1 on the closed ball of radius R.
    static Kernel indicator(double radius, int dimension);
    /// c0(z) = max(1 - |z|/a, 0).
    static Kernel triangle(double a, int dimension);
    /// Sign-changing polynomial wavelet A (1 - beta |z|^2/a^2)(1 - |z|^2/(4a^2))^2 on |z| < 2a,
    /// with integral zero and L1 norm `l1_norm`. The grid stencil is renormalized so that the
    /// discrete sum vanishes and the discrete L1 norm equals `l1_norm` exactly.
    static Kernel zero_mean_wavelet(double a, double l1_norm, int dimension);
    /// Tabulated samples; node coordinates are offsets z and must be centred on 0.
    static Kernel from_samples(const ScalarField& samples, std::string name = "samples");

    Kernel(std::string name, Profile profile, StencilBuilder builder, double support_radius,
           KernelConstants declared, bool time_independent);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] double support_radius() const { return support_radius_; }
    [[nodiscard]] bool time_independent() const { return time_independent_; }
    [[nodiscard]] const KernelConstants& declared() const { return declared_; }
    /// Continuous profile c0(z, t).
    [[nodiscard]] double operator()(const Point& z, double t = 0.0) const { return profile_(z, t); }

    [[nodiscard]] KernelStencil stencil(const GridSpec& grid, double t = 0.0) const;
    [[nodiscard]] KernelConstants measured(const GridSpec& grid, double t = 0.0) const;
    /// Discrete L1 norm h^N sum |c0| <= M0 (1 + tolerance).
    [[nodiscard]] bool check_l1_bound(const GridSpec& grid, double tolerance, double t = 0.0) const;

private:
    std::string name_;
    Profile profile_;
    StencilBuilder builder_;
    double support_radius_ = 0.0;
    KernelConstants declared_;
    bool time_independent_ = true;
};

struct ExternalConstants {
    double bound = 0.0;         // M1
    double lipschitz = 0.0;     // L1
    double semiconvexity = 0.0; // N1
};

class ExternalVelocity {
public:
    using Evaluator = std::function<double(const Point& x, double t)>;

    static ExternalVelocity constant(double value);
    /// Space-independent c1(t) = 2 (t - 1)(2 - t); |c1| <= 4 on [0, 2].
    static ExternalVelocity counterexample_quadratic();
    /// Space-independent, piecewise linear in time through (t_k, v_k), constant outside.
    static ExternalVelocity time_table(std::vector<std::pair<double, double>> table);

    ExternalVelocity(std::string name, Evaluator evaluator, ExternalConstants constants,
                     bool space_independent);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const ExternalConstants& constants() const { return constants_; }
    [[nodiscard]] bool space_independent() const { return space_independent_; }
    [[nodiscard]] double operator()(const Point& x, double t) const { return evaluator_(x, t); }
    [[nodiscard]] ScalarField sample(const GridSpec& grid, double t) const;
    /// Sampled |c1| <= M1 (1 + tolerance) at every node and given time.
    [[nodiscard]] bool check_bound(const GridSpec& grid, const std::vector<double>& times,
                                   double tolerance = 1e-12) const;

private:
    std::string name_;
    Evaluator evaluator_;
    ExternalConstants constants_;
    bool space_independent_ = true;
};

/// Grid field with values in [0, 1].
class OccupancyField {
public:
    OccupancyField() = default;
    explicit OccupancyField(ScalarField values);
    static OccupancyField zeros(const GridSpec& grid);
    /// 1 where u >= 0, else 0.
    static OccupancyField indicator_of(const ScalarField& u);

    [[nodiscard]] const ScalarField& field() const { return values_; }
    [[nodiscard]] const GridSpec& grid() const { return values_.grid(); }
    [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

private:
    ScalarField values_;
};

/// x -> h^N sum_y c0(x - y, t) chi(y), direct summation over the kernel support.
ScalarField convolve(const Kernel& kernel, const OccupancyField& chi, double t);
ScalarField convolve(const KernelStencil& stencil, const OccupancyField& chi);

/// Full-grid O(n^2) summation over every node pair, used as an oracle for the truncated scatter.
ScalarField convolve_brute_force(const Kernel& kernel, const OccupancyField& chi, double t);

ScalarField assemble_total_velocity(const Kernel& kernel, const OccupancyField& chi,
                                    const ExternalVelocity& c1, double t);

struct VelocityBounds {
    double speed = 0.0;     // M = M0 + M1
    double lipschitz = 0.0; // L = L0 + L1
};

VelocityBounds velocity_bounds(const Kernel& kernel, const ExternalVelocity& c1);

struct PositivityReport {
    bool holds = false;
    double min_value = 0.0;
    std::size_t worst_node = 0;
};

PositivityReport check_positivity(const ScalarField& cbar, double delta);

}  // namespace nle
