#pragma once

// The one-dimensional non-uniqueness example: c1(t) = 2(t-1)(2-t), an initial
// hat that shrinks to a point at t = 1 and then fattens, and the family of
// weak solutions indexed by a control 0 <= gamma(t) <= 1 on [1, 2].

#include <string>
#include <utility>
#include <vector>

#include "nle/eikonal.hpp"
#include "nle/grid.hpp"
#include "nle/weak_solution.hpp"

namespace nle {

/// Piecewise-constant gamma on [1, 2]: value v_i on [t_i, t_{i+1}), the last one up to 2.
class GammaControl {
public:
    static GammaControl constant(double value);
    /// Pairs (t_i, v_i) with t_0 = 1, strictly increasing t_i < 2 and v_i in [0, 1].
    static GammaControl piecewise(std::vector<std::pair<double, double>> pieces);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] const std::vector<std::pair<double, double>>& pieces() const { return pieces_; }
    [[nodiscard]] std::string describe() const;

private:
    explicit GammaControl(std::vector<std::pair<double, double>> pieces) : pieces_(std::move(pieces)) {}
    std::vector<std::pair<double, double>> pieces_;
};

/// 2(t - 1)(2 - t). Requires t in [0, 2].
double c1_of_t(double t);
/// (t - 1)^2, the front position on [0, 1]. Requires t in [0, 1].
double x1_of_t(double t);

/// RK4 samples of y' = c1(t) + 2 gamma(t) y, y(1) = 0, with cubic Hermite interpolation.
class YGamma {
public:
    YGamma() = default;
    YGamma(std::vector<double> times, std::vector<double> values, std::vector<double> left_slopes,
           std::vector<double> right_slopes);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] const std::vector<double>& times() const { return times_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
    // Slope at the start (right_) and end (left_) of each step; they differ across gamma breakpoints.
    std::vector<double> left_;
    std::vector<double> right_;
};

/// Classical fourth-order integration on [1, 2] with steps aligned to the breakpoints of gamma.
/// Throws PreconditionError unless 0 < mesh <= 1e-3.
YGamma solve_y_gamma(const GammaControl& gamma, double mesh = 1e-4);

class CounterexampleSolution {
public:
    explicit CounterexampleSolution(GammaControl gamma, double mesh = 1e-4);

    [[nodiscard]] const GammaControl& gamma() const { return gamma_; }
    [[nodiscard]] const YGamma& y() const { return y_; }
    /// Half-width of {U >= 0}: x1(t) on [0, 1], y_gamma(t) on [1, 2].
    [[nodiscard]] double front(double t) const;
    [[nodiscard]] double U(double x, double t) const;
    [[nodiscard]] double chi(double x, double t) const;
    /// c_gamma(t) = c1 + 2 x1 on [0, 1], c1 + 2 gamma y on [1, 2].
    [[nodiscard]] double speed(double t) const;
    /// Mean of c_gamma over [t0, t1], exact up to the y interpolation.
    [[nodiscard]] double speed_average(double t0, double t1) const;
    /// Upper bound of |c_gamma| on [0, 2].
    [[nodiscard]] double speed_bound() const { return speed_bound_; }

    [[nodiscard]] ScalarField sample_U(const GridSpec& grid, double t) const;
    [[nodiscard]] OccupancyField sample_chi(const GridSpec& grid, double t) const;

private:
    GammaControl gamma_;
    YGamma y_;
    double speed_bound_ = 0.0;
};

struct CounterexampleRow {
    double t = 0.0;
    double x1 = 0.0;       // NaN after t = 1
    double y_gamma = 0.0;  // NaN before t = 1
    double front_measure = 0.0;
    double zero_set_measure = 0.0;
    double sup_error = 0.0;
    double sandwich_violation = 0.0;
};

struct CounterexampleVerification {
    WeakSolution solution;
    std::vector<CounterexampleRow> rows;
    double h = 0.0;
    double sup_error = 0.0;
    double sandwich_violation = 0.0;
    /// max |c_gamma(t) - (1_{[-4,4]} * chi_gamma + c1)(t)| over snapshots and |x| <= 3.
    double consistency_error = 0.0;
    [[nodiscard]] bool passed() const;
};

/// Solves u_t = c_gamma(t) |u_x| numerically on [0, 2] from the clamped hat and compares with
/// the closed form. One snapshot per step, with t = 1 on the step lattice.
/// Requires a 1D grid containing [-3, 3].
CounterexampleVerification verify_weak_solution(const CounterexampleSolution& solution,
                                                const GridSpec& grid, double cfl = kDefaultCfl);

/// Indicator distance between {U_a(., t) >= 0} and {U_b(., t) >= 0} on the grid.
double nonuniqueness_gap(const CounterexampleSolution& a, const CounterexampleSolution& b, double t,
                         const GridSpec& grid);

/// h^N times the number of nodes with |u| < h.
double zero_set_measure(const ScalarField& u);
/// zero_set_measure of the closed form at time t.
double fattening_measure(const CounterexampleSolution& solution, double t, const GridSpec& grid);

}  // namespace nle
