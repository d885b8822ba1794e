#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nle/error.hpp"
#include "nle/field_io.hpp"
#include "nle/grid.hpp"

using namespace nle;

namespace {

ScalarField hat(const GridSpec& g) {
    return ScalarField::sample(g, [](const Point& x) { return std::max(1.0 - std::abs(x[0]), -1.0); });
}

}  // namespace

TEST(Grid, BoxNodeCountAndCoordinates) {
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, 0.01);
    EXPECT_EQ(g.nodes[0], 601);
    EXPECT_EQ(g.nodes[1], 1);
    EXPECT_DOUBLE_EQ(g.coord(0, 0), -3.0);
    EXPECT_NEAR(g.upper(0), 3.0, 1e-12);
    const GridSpec g2 = GridSpec::box(2, -1.0, 1.0, 0.5);
    EXPECT_EQ(g2.node_count(), 25u);
    EXPECT_DOUBLE_EQ(g2.node_volume(), 0.25);
    EXPECT_TRUE(g2.contains_ball(1.0));
    EXPECT_FALSE(g2.contains_ball(1.5));
}

TEST(Grid, RejectsBadSpacing) {
    EXPECT_THROW(GridSpec::box(1, -1.0, 1.0, 0.0), PreconditionError);
    EXPECT_THROW(GridSpec::box(3, -1.0, 1.0, 0.1), UnsupportedDimensionError);
}

TEST(OneSidedDifferences, LinearFieldInterior) {
    const GridSpec g = GridSpec::box(1, -1.0, 1.0, 0.1);
    const ScalarField u = ScalarField::sample(g, [](const Point& x) { return x[0]; });
    const OneSidedDifferences d = one_sided_differences(u);
    for (int i = 1; i + 1 < g.nodes[0]; ++i) {
        EXPECT_NEAR(d.forward[0].at(i), 1.0, 1e-12);
        EXPECT_NEAR(d.backward[0].at(i), 1.0, 1e-12);
    }
}

TEST(OneSidedDifferences, ConstantFieldIsFlat) {
    const GridSpec g = GridSpec::box(2, -1.0, 1.0, 0.25);
    const OneSidedDifferences d = one_sided_differences(ScalarField(g, -1.0));
    for (int a = 0; a < 2; ++a) {
        for (std::size_t k = 0; k < g.node_count(); ++k) {
            EXPECT_EQ(d.forward[a][k], 0.0);
            EXPECT_EQ(d.backward[a][k], 0.0);
        }
    }
}

TEST(OneSidedDifferences, HatAtHalf) {
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, 0.25);
    const OneSidedDifferences d = one_sided_differences(hat(g));
    const int i = 14;  // x = 0.5
    ASSERT_DOUBLE_EQ(g.coord(0, i), 0.5);
    EXPECT_DOUBLE_EQ(d.forward[0].at(i), -1.0);
    EXPECT_DOUBLE_EQ(d.backward[0].at(i), -1.0);
}

TEST(OneSidedDifferences, BoundaryCopiesInnerValue) {
    const GridSpec g = GridSpec::box(1, 0.0, 1.0, 0.25);
    const ScalarField u(g, std::vector<double>{0.0, 1.0, 1.0, 0.0, 2.0});
    const OneSidedDifferences d = one_sided_differences(u);
    EXPECT_DOUBLE_EQ(d.backward[0].at(0), d.forward[0].at(0));
    EXPECT_DOUBLE_EQ(d.forward[0].at(4), d.backward[0].at(4));
    EXPECT_DOUBLE_EQ(d.forward[0].at(4), 8.0);
}

TEST(Godunov, LinearAndConstant) {
    const GridSpec g = GridSpec::box(1, -1.0, 1.0, 0.1);
    const GodunovMagnitudes lin =
        godunov_magnitudes(ScalarField::sample(g, [](const Point& x) { return x[0]; }));
    for (int i = 1; i + 1 < g.nodes[0]; ++i) {
        EXPECT_NEAR(lin.plus.at(i), 1.0, 1e-12);
        EXPECT_NEAR(lin.minus.at(i), 1.0, 1e-12);
    }
    const GodunovMagnitudes flat = godunov_magnitudes(ScalarField(g, 0.3));
    EXPECT_EQ(flat.plus.max(), 0.0);
    EXPECT_EQ(flat.minus.max(), 0.0);
}

TEST(Godunov, KinkMatchesDefinition) {
    // u = -|x| at x = 0: D- = 1, D+ = -1, so both terms of grad+ are active.
    const GridSpec g = GridSpec::box(1, -1.0, 1.0, 0.25);
    const ScalarField u = ScalarField::sample(g, [](const Point& x) { return -std::abs(x[0]); });
    const int mid = 4;
    const double dm = (u.at(mid) - u.at(mid - 1)) / g.h;
    const double dp = (u.at(mid + 1) - u.at(mid)) / g.h;
    const double plus = std::sqrt(std::pow(std::max(dm, 0.0), 2) + std::pow(std::min(dp, 0.0), 2));
    const double minus = std::sqrt(std::pow(std::min(dm, 0.0), 2) + std::pow(std::max(dp, 0.0), 2));
    const GodunovPair p = godunov_at(u, mid);
    EXPECT_NEAR(p.plus, std::sqrt(2.0), 1e-12);
    EXPECT_DOUBLE_EQ(p.plus, plus);
    EXPECT_DOUBLE_EQ(p.minus, minus);
    EXPECT_EQ(p.minus, 0.0);
}

TEST(Godunov, TwoDimensionalSumsAxes) {
    const GridSpec g = GridSpec::box(2, -1.0, 1.0, 0.25);
    const ScalarField u = ScalarField::sample(g, [](const Point& x) { return 3.0 * x[0] - 4.0 * x[1]; });
    const GodunovPair p = godunov_at(u, 4, 4);
    EXPECT_NEAR(p.plus, 5.0, 1e-12);
    EXPECT_NEAR(p.minus, 5.0, 1e-12);
}

TEST(SublevelMeasure, HatNonnegativeSet) {
    const double h = 0.01;
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, h);
    EXPECT_NEAR(sublevel_measure(hat(g), ValueInterval::at_least(0.0)), 2.0, 2 * h);
    EXPECT_EQ(sublevel_measure(hat(g), ValueInterval::above(5.0)), 0.0);
    EXPECT_NEAR(sublevel_measure(ScalarField(g, 0.0), ValueInterval::at_least(0.0)), 6.0, 2 * h);
}

TEST(SublevelMeasure, IntervalEndpoints) {
    const GridSpec g = GridSpec::box(1, 0.0, 1.0, 0.5);
    const ScalarField u(g, std::vector<double>{-1.0, 0.0, 1.0});
    EXPECT_DOUBLE_EQ(sublevel_measure(u, ValueInterval::half_open(-1.0, 0.0)), 0.5);
    EXPECT_DOUBLE_EQ(sublevel_measure(u, ValueInterval::closed(-1.0, 0.0)), 1.0);
    EXPECT_DOUBLE_EQ(sublevel_measure(u, ValueInterval::above(0.0)), 0.5);
}

TEST(Lipschitz, Examples) {
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, 0.01);
    EXPECT_NEAR(lipschitz_estimate(hat(g)), 1.0, 1e-9);
    EXPECT_EQ(lipschitz_estimate(ScalarField(g, 0.7)), 0.0);
    EXPECT_NEAR(lipschitz_estimate(ScalarField::sample(g, [](const Point& x) { return 2.0 * x[0]; })), 2.0, 1e-9);
}

TEST(FieldIo, RoundTripIsExact) {
    const GridSpec g = GridSpec::box(2, -1.0, 1.0, 0.1);
    const ScalarField u = ScalarField::sample(g, [](const Point& x) { return std::sin(x[0]) * std::exp(x[1]) / 3.0; });
    std::stringstream ss;
    write_field_csv(ss, u, 0.125, {"note"});
    const FieldSnapshot s = read_field_csv(ss);
    EXPECT_EQ(s.time, 0.125);
    ASSERT_EQ(s.field.grid(), g);
    for (std::size_t k = 0; k < u.size(); ++k) EXPECT_EQ(s.field[k], u[k]);
}

TEST(FieldIo, RejectsMalformedHeader) {
    std::stringstream ss("x,value\n0,1\n");
    EXPECT_ANY_THROW(read_field_csv(ss));
}
