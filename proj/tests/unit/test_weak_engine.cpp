#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nle/analysis.hpp"
#include "nle/counterexample.hpp"
#include "nle/damped_iteration.hpp"
#include "nle/error.hpp"
#include "nle/weak_engine.hpp"

using namespace nle;

namespace {

ScalarField hat(const GridSpec& g, double radius = 1.0) {
    return ScalarField::sample(g, [radius](const Point& x) { return std::max(radius - std::abs(x[0]), -1.0); });
}

NonlocalProblem problem_1d(Kernel kernel, double c1, double h, double horizon) {
    NonlocalProblem p;
    p.kernel = std::move(kernel);
    p.c1 = ExternalVelocity::constant(c1);
    p.u0 = hat(GridSpec::box(1, -3.0, 3.0, h));
    p.horizon = horizon;
    return p;
}

// Front radius of {u >= 0} for c0 = triangle(a) in 2D and constant c1:
// r' = c1 + area integral of c0(|r e1 - y|) over the disc |y| <= r, by polar midpoint quadrature.
double radial_oracle(double a, double c1, double r0, double t) {
    auto mass = [a](double r) {
        const int nr = 400, nt = 400;
        double acc = 0.0;
        for (int i = 0; i < nr; ++i) {
            const double rho = (i + 0.5) * r / nr;
            for (int j = 0; j < nt; ++j) {
                const double th = (j + 0.5) * 2.0 * std::numbers::pi / nt;
                const double d = std::hypot(r - rho * std::cos(th), rho * std::sin(th));
                acc += std::max(1.0 - d / a, 0.0) * rho;
            }
        }
        return acc * (r / nr) * (2.0 * std::numbers::pi / nt);
    };
    const int n = 100;
    const double dt = t / n;
    double r = r0;
    for (int k = 0; k < n; ++k) {
        const double k1 = c1 + mass(r);
        const double k2 = c1 + mass(r + dt / 2 * k1);
        const double k3 = c1 + mass(r + dt / 2 * k2);
        const double k4 = c1 + mass(r + dt * k3);
        r += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return r;
}

}  // namespace

TEST(Psi, Values) {
    EXPECT_EQ(psi(0.0, 0.1), 1.0);
    EXPECT_EQ(psi(0.3, 0.1), 1.0);
    EXPECT_EQ(psi(-0.1, 0.1), 0.0);
    EXPECT_EQ(psi(-5.0, 0.1), 0.0);
    EXPECT_DOUBLE_EQ(psi(-0.05, 0.1), 0.5);
    EXPECT_THROW(psi(0.0, 0.0), PreconditionError);
}

TEST(FixedPointConfig, DefaultsAndValidation) {
    const FixedPointConfig c = FixedPointConfig::defaults(0.01);
    ASSERT_EQ(c.eps_schedule.size(), 3u);
    EXPECT_DOUBLE_EQ(c.eps_schedule[0], 0.04);
    EXPECT_DOUBLE_EQ(c.eps_schedule[2], 0.01);
    EXPECT_DOUBLE_EQ(c.tolerance, 1e-4);
    FixedPointConfig bad = c;
    bad.eps_schedule = {0.01, 0.02};
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = c;
    bad.damping = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(PicardMap, ZeroKernelIgnoresInput) {
    const NonlocalProblem p = problem_1d(Kernel::zero(), 1.0, 0.02, 0.5);
    const Trajectory start = frozen_indicator_start(p);
    Trajectory other = start;
    for (auto& f : other.fields) f = ScalarField(f.grid(), -1.0);
    const PicardImage a = picard_map(start, 0.05, p);
    const PicardImage b = picard_map(other, 0.05, p);
    EXPECT_EQ(sup_distance(a.u, b.u), 0.0);
    EXPECT_EQ(sup_distance(a.u, start), 0.0);
}

TEST(PicardMap, FarNegativeInputGivesExternalSpeed) {
    const NonlocalProblem p = problem_1d(Kernel::indicator(1.0, 1), 0.7, 0.02, 0.4);
    Trajectory u = frozen_indicator_start(p);
    for (auto& f : u.fields) f = ScalarField(f.grid(), -1.0);
    const PicardImage img = picard_map(u, 0.05, p);
    for (const auto& chi : img.chi) EXPECT_EQ(chi.field().max(), 0.0);
    for (const auto& c : img.cbar) {
        EXPECT_DOUBLE_EQ(c.min(), 0.7);
        EXPECT_DOUBLE_EQ(c.max(), 0.7);
    }
}

TEST(PicardMap, CounterexampleClosedFormIsNearlyFixed) {
    // On [0, 1] the closed form moves with c1 + 2 x1; its Picard velocity is within 2h + eps of that.
    const double h = 0.01, eps = 0.02;
    const CounterexampleSolution sol(GammaControl::constant(0.0));
    NonlocalProblem p;
    p.kernel = Kernel::indicator(4.0, 1);
    p.c1 = ExternalVelocity::counterexample_quadratic();
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, h);
    p.u0 = sol.sample_U(g, 0.0);
    p.horizon = 0.8;
    Trajectory u;
    u.times = p.times();
    for (double t : u.times) u.fields.push_back(sol.sample_U(g, t));
    const PicardImage img = picard_map(u, eps, p);
    for (std::size_t s = 0; s < u.size(); ++s) {
        const double t = u.times[s];
        const double exact = c1_of_t(t) + 2.0 * x1_of_t(t);
        for (int i = 0; i < g.nodes[0]; ++i) {
            if (std::abs(g.coord(0, i)) <= 3.0) EXPECT_NEAR(img.cbar[s].at(i), exact, 2 * h + eps);
        }
    }
    EXPECT_LE(sup_distance(img.u, u), 0.1);
}

TEST(FixedPoint, ZeroKernelConvergesInOneIteration) {
    const NonlocalProblem p = problem_1d(Kernel::zero(), 1.0, 0.02, 0.5);
    const FixedPointResult r = fixed_point(0.04, p, FixedPointConfig::defaults(0.02));
    EXPECT_TRUE(r.record.converged);
    EXPECT_EQ(r.record.iterations, 1);
    EXPECT_EQ(r.record.residual, 0.0);
}

TEST(FixedPoint, ExpandingRegimeConverges) {
    const double h = 0.01;
    const NonlocalProblem p = problem_1d(Kernel::zero_mean_wavelet(0.2, 1.0, 1), 1.1, h, 0.5);
    FixedPointConfig cfg = FixedPointConfig::defaults(h);
    cfg.max_iterations = 50;
    const FixedPointResult r = fixed_point(h, p, cfg);
    EXPECT_TRUE(r.record.converged);
    EXPECT_LT(r.record.residual, cfg.tolerance);
    EXPECT_LE(r.record.iterations, 50);
}

TEST(DampedIteration, HalvesDampingOnOscillation) {
    // T(x) = 1 - x alternates between x and 1 - x at full step; the fixed point is 1/2.
    DampingOptions o;
    o.tolerance = 1e-12;
    o.max_iterations = 100;
    const auto r = damped_iteration(
        0.0, [](double x) { return 1.0 - x; }, [](double a, double b) { return std::abs(a - b); },
        [](double x, double tx, double th) { return (1.0 - th) * x + th * tx; }, o);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.damping, 1.0);
    EXPECT_NEAR(r.value, 0.5, 1e-12);
    for (std::size_t k = 1; k < r.accepted_residuals.size(); ++k) {
        EXPECT_LE(r.accepted_residuals[k], r.accepted_residuals[k - 1]);
    }
}

TEST(DampedIteration, ContractionConvergesAtFullStep) {
    DampingOptions o;
    o.tolerance = 1e-10;
    const auto r = damped_iteration(
        1.0, [](double x) { return 0.5 * x + 1.0; }, [](double a, double b) { return std::abs(a - b); },
        [](double x, double tx, double th) { return (1.0 - th) * x + th * tx; }, o);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.damping, 1.0);
    EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(DampedIteration, ReportsNonConvergence) {
    DampingOptions o;
    o.tolerance = 1e-12;
    o.max_iterations = 10;
    const auto r = damped_iteration(
        0.0, [](double x) { return x + 1.0; }, [](double a, double b) { return std::abs(a - b); },
        [](double x, double tx, double th) { return (1.0 - th) * x + th * tx; }, o);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 10);
}

TEST(Continuation, ZeroKernelMatchesOleinikLax) {
    const double h = 0.01, T = 0.5;
    const NonlocalProblem p = problem_1d(Kernel::zero(), 1.0, h, T);
    const WeakSolution w = continuation(p, FixedPointConfig::defaults(h));
    EXPECT_TRUE(w.converged);
    EXPECT_NO_THROW(w.validate());
    for (std::size_t s = 0; s < w.u.size(); ++s) {
        const ScalarField exact = oleinik_lax_sup(p.u0, w.u.times[s]);
        for (std::size_t k = 0; k < exact.size(); ++k) {
            // Compare on the front region; the apex plateau and the clamp are rounded by the scheme.
            if (std::abs(exact[k]) <= 0.5) EXPECT_NEAR(w.u.fields[s][k], exact[k], 2 * h);
        }
        // chi equals the indicator of {u >= 0} outside a band of one eps cell.
        const ScalarField& u = w.u.fields[s];
        for (std::size_t k = 0; k < u.size(); ++k) {
            if (u[k] >= 0.0) EXPECT_EQ(w.chi[s][k], 1.0);
            if (u[k] < -w.eps_final) EXPECT_EQ(w.chi[s][k], 0.0);
        }
    }
    EXPECT_EQ(l1_stability_residual(w), 0.0);
}

TEST(Continuation, SingleLevelEqualsFixedPoint) {
    const double h = 0.02;
    const NonlocalProblem p = problem_1d(Kernel::triangle(0.5, 1), 0.2, h, 0.3);
    FixedPointConfig cfg = FixedPointConfig::defaults(h);
    cfg.eps_schedule = {2 * h};
    const WeakSolution w = continuation(p, cfg);
    const FixedPointResult r = fixed_point(2 * h, p, cfg);
    EXPECT_EQ(sup_distance(w.u, r.u), 0.0);
    ASSERT_EQ(w.levels.size(), 1u);
    EXPECT_EQ(w.levels[0].iterations, r.record.iterations);
}

TEST(Continuation, ExpandingCircleFollowsRadialOde) {
    const double h = 0.05, a = 0.5, c1 = 0.5, T = 0.4;
    NonlocalProblem p;
    p.kernel = Kernel::triangle(a, 2);
    p.c1 = ExternalVelocity::constant(c1);
    const GridSpec g = GridSpec::box(2, -2.5, 2.5, h);
    p.u0 = ScalarField::sample(g, [](const Point& x) { return std::clamp(1.0 - std::hypot(x[0], x[1]), -1.0, 1.0); });
    p.horizon = T;
    p.snapshot_times = p.default_snapshot_times({0.2, 0.4});
    const WeakSolution w = continuation(p, FixedPointConfig::defaults(h));
    EXPECT_TRUE(w.converged);
    for (double t : {0.2, 0.4}) {
        std::size_t s = 0;
        while (std::abs(w.u.times[s] - t) > 1e-9) ++s;
        const double r = radial_oracle(a, c1, 1.0, t);
        for (const Point& q : zero_crossings(w.u.fields[s])) EXPECT_NEAR(std::hypot(q[0], q[1]), r, 3 * h);
    }
}

TEST(Sandwich, ExactIndicatorHasNoViolation) {
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, 0.02);
    Trajectory u{{0.0}, {hat(g)}};
    const std::vector<double> v = sandwich_check(u, {OccupancyField::indicator_of(hat(g))}, 0.0);
    EXPECT_EQ(v.front(), 0.0);
}

TEST(Sandwich, HalfOccupancyOnPositiveFieldFillsTheBox) {
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, 0.02);
    Trajectory u{{0.0}, {ScalarField(g, 0.5)}};
    const std::vector<double> v = sandwich_check(u, {OccupancyField(ScalarField(g, 0.5))}, 0.1);
    EXPECT_NEAR(v.front(), 6.0 + g.h, 1e-9);
}

TEST(Sandwich, CounterexampleFamilyHasNoViolation) {
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, 0.01);
    for (double gamma : {0.0, 0.5, 1.0}) {
        const CounterexampleSolution sol(GammaControl::constant(gamma));
        Trajectory u;
        std::vector<OccupancyField> chi;
        for (double t : {0.0, 0.5, 1.0, 1.5, 2.0}) {
            u.times.push_back(t);
            u.fields.push_back(sol.sample_U(g, t));
            chi.push_back(sol.sample_chi(g, t));
        }
        for (double v : sandwich_check(u, chi, 0.0)) EXPECT_EQ(v, 0.0) << gamma;
    }
}

TEST(Classicality, Examples) {
    const double h = 0.005;
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, h);
    const CounterexampleSolution sol(GammaControl::constant(1.0));
    Trajectory u{{0.0, 1.0, 1.5}, {hat(g), ScalarField(g, -1.0), sol.sample_U(g, 1.5)}};
    const std::vector<bool> c = classicality_check(u);
    EXPECT_TRUE(c[0]);
    EXPECT_TRUE(c[1]);
    EXPECT_FALSE(c[2]);
    EXPECT_NEAR(zero_set_measure(u.fields[2]), 2.0 * sol.y()(1.5), 4 * h);
}

TEST(NonlocalProblem, ValidatesInputs) {
    NonlocalProblem p = problem_1d(Kernel::zero(), 1.0, 0.02, 0.5);
    EXPECT_NO_THROW(p.validate());
    p.horizon = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = problem_1d(Kernel::zero(), 1.0, 0.02, 0.5);
    p.u0[3] = 1.5;
    EXPECT_THROW(p.validate(), ConfigError);
    p = problem_1d(Kernel::zero(), 1.0, 0.02, 0.5);
    const std::vector<double> t = p.default_snapshot_times({0.123});
    EXPECT_EQ(t.front(), 0.0);
    EXPECT_DOUBLE_EQ(t.back(), 0.5);
    EXPECT_NE(std::find(t.begin(), t.end(), 0.123), t.end());
    EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
}
