#pragma once

// Uniform box grids in one or two dimensions and the discrete primitives
// shared by every solver: one-sided differences, upwind gradient magnitudes,
// node-counting measures.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nle {

/// Uniform node-centred grid. Node i on axis a sits at lower[a] + i*h.
/// For dimension 1 the second axis is degenerate (nodes[1] == 1).
struct GridSpec {
    int dimension = 1;
    std::array<double, 2> lower{0.0, 0.0};
    double h = 1.0;
    std::array<int, 2> nodes{3, 1};

    /// Square box [lo, hi]^N sampled at spacing h (node count rounded).
    static GridSpec box(int dimension, double lo, double hi, double h);

    void validate() const;

    [[nodiscard]] std::size_t node_count() const {
        return static_cast<std::size_t>(nodes[0]) * static_cast<std::size_t>(nodes[1]);
    }
    /// h^N, the measure carried by one node.
    [[nodiscard]] double node_volume() const { return dimension == 1 ? h : h * h; }
    [[nodiscard]] double coord(int axis, int i) const { return lower[axis] + i * h; }
    [[nodiscard]] double upper(int axis) const { return coord(axis, nodes[axis] - 1); }
    [[nodiscard]] std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes[0]) +
               static_cast<std::size_t>(i);
    }
    /// Whether the box contains the closed ball B(0, radius) on every axis.
    [[nodiscard]] bool contains_ball(double radius) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

using Point = std::array<double, 2>;

/// One value per grid node, x fastest.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridSpec grid, double fill = 0.0);
    ScalarField(GridSpec grid, std::vector<double> values);

    /// Samples f at every node.
    static ScalarField sample(const GridSpec& grid, const std::function<double(const Point&)>& f);

    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::span<double> values() { return values_; }

    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }
    double& at(int i, int j = 0) { return values_[grid_.index(i, j)]; }
    [[nodiscard]] double at(int i, int j = 0) const { return values_[grid_.index(i, j)]; }

    [[nodiscard]] Point position(std::size_t k) const;

    [[nodiscard]] double min() const;
    [[nodiscard]] double max() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// Sup-norm distance between two fields on the same grid.
double sup_distance(const ScalarField& a, const ScalarField& b);

/// Snapshots of u(., t) at strictly increasing times on a shared grid.
struct Trajectory {
    std::vector<double> times;
    std::vector<ScalarField> fields;

    void validate() const;
    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] const GridSpec& grid() const { return fields.front().grid(); }
};

/// Largest sup-norm gap over matching snapshots.
double sup_distance(const Trajectory& a, const Trajectory& b);

struct OneSidedDifferences {
    int dimension = 1;
    std::array<ScalarField, 2> forward;
    std::array<ScalarField, 2> backward;
};

/// D+ and D- per axis; boundary nodes copy the inner one-sided value.
OneSidedDifferences one_sided_differences(const ScalarField& u);

/// Upwind gradient magnitudes at one node:
///   plus  = sqrt(sum max(D-,0)^2 + min(D+,0)^2)  (used when the speed is negative)
///   minus = sqrt(sum min(D-,0)^2 + max(D+,0)^2)  (used when the speed is positive)
struct GodunovPair {
    double plus = 0.0;
    double minus = 0.0;
};

GodunovPair godunov_at(const ScalarField& u, int i, int j = 0);

struct GodunovMagnitudes {
    ScalarField plus;
    ScalarField minus;
};

GodunovMagnitudes godunov_magnitudes(const ScalarField& u);

/// Value interval used by sublevel_measure; bounds may be infinite.
struct ValueInterval {
    double lo = -INFINITY;
    double hi = INFINITY;
    bool lo_closed = true;
    bool hi_closed = true;

    [[nodiscard]] bool contains(double v) const {
        const bool above = lo_closed ? v >= lo : v > lo;
        const bool below = hi_closed ? v <= hi : v < hi;
        return above && below;
    }

    static ValueInterval at_least(double lo) { return {lo, INFINITY, true, true}; }
    static ValueInterval above(double lo) { return {lo, INFINITY, false, true}; }
    static ValueInterval below(double hi) { return {-INFINITY, hi, true, false}; }
    static ValueInterval closed(double lo, double hi) { return {lo, hi, true, true}; }
    static ValueInterval half_open(double lo, double hi) { return {lo, hi, true, false}; }
};

/// h^N times the number of nodes whose value lies in the interval.
double sublevel_measure(const ScalarField& u, const ValueInterval& interval);

/// Max over nodes and axes of |one-sided difference|.
double lipschitz_estimate(const ScalarField& u);

}  // namespace nle
