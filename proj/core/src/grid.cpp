#include "nle/grid.hpp"

#include <algorithm>
#include <string>

#include "nle/error.hpp"

namespace nle {

GridSpec GridSpec::box(int dimension, double lo, double hi, double h) {
    if (!(hi > lo) || !(h > 0.0)) {
        throw PreconditionError("GridSpec::box: need hi > lo and h > 0");
    }
    const int n = static_cast<int>(std::lround((hi - lo) / h)) + 1;
    GridSpec g;
    g.dimension = dimension;
    g.lower = {lo, dimension == 2 ? lo : 0.0};
    g.h = h;
    g.nodes = {n, dimension == 2 ? n : 1};
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (dimension != 1 && dimension != 2) {
        throw UnsupportedDimensionError("grid dimension must be 1 or 2, got " +
                                        std::to_string(dimension));
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw PreconditionError("grid spacing must be positive and finite");
    }
    if (nodes[0] < 3 || (dimension == 2 && nodes[1] < 3)) {
        throw PreconditionError("grid needs at least 3 nodes per axis");
    }
    if (dimension == 1 && nodes[1] != 1) {
        throw PreconditionError("1D grid must have a degenerate second axis");
    }
}

bool GridSpec::contains_ball(double radius) const {
    for (int a = 0; a < dimension; ++a) {
        if (lower[a] > -radius || upper(a) < radius) return false;
    }
    return true;
}

ScalarField::ScalarField(GridSpec grid, double fill)
    : grid_(grid), values_(grid.node_count(), fill) {
    grid_.validate();
}

ScalarField::ScalarField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.node_count()) {
        throw PreconditionError("field value count does not match grid node count");
    }
}

ScalarField ScalarField::sample(const GridSpec& grid,
                                const std::function<double(const Point&)>& f) {
    ScalarField out(grid);
    for (int j = 0; j < grid.nodes[1]; ++j) {
        for (int i = 0; i < grid.nodes[0]; ++i) {
            const Point p{grid.coord(0, i), grid.dimension == 2 ? grid.coord(1, j) : 0.0};
            out.at(i, j) = f(p);
        }
    }
    return out;
}

Point ScalarField::position(std::size_t k) const {
    const auto nx = static_cast<std::size_t>(grid_.nodes[0]);
    const int i = static_cast<int>(k % nx);
    const int j = static_cast<int>(k / nx);
    return {grid_.coord(0, i), grid_.dimension == 2 ? grid_.coord(1, j) : 0.0};
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double sup_distance(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw PreconditionError("sup_distance: grids differ");
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

void Trajectory::validate() const {
    if (times.empty() || times.size() != fields.size()) {
        throw PreconditionError("trajectory needs one field per snapshot time");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw PreconditionError("trajectory times must be strictly increasing");
        }
        if (!(fields[k].grid() == fields[0].grid())) {
            throw PreconditionError("trajectory fields must share one grid");
        }
    }
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size()) throw PreconditionError("sup_distance: snapshot counts differ");
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, sup_distance(a.fields[k], b.fields[k]));
    return d;
}

namespace {

// Forward and backward differences along one axis at node (i, j).
struct AxisDiff {
    double forward;
    double backward;
};

AxisDiff axis_diff(const ScalarField& u, int axis, int i, int j) {
    const GridSpec& g = u.grid();
    const int n = g.nodes[axis];
    const int pos = axis == 0 ? i : j;
    const double here = u.at(i, j);
    const double inv_h = 1.0 / g.h;
    auto neighbour = [&](int offset) {
        return axis == 0 ? u.at(i + offset, j) : u.at(i, j + offset);
    };
    if (pos == 0) {
        const double f = (neighbour(1) - here) * inv_h;
        return {f, f};
    }
    if (pos == n - 1) {
        const double b = (here - neighbour(-1)) * inv_h;
        return {b, b};
    }
    return {(neighbour(1) - here) * inv_h, (here - neighbour(-1)) * inv_h};
}

}  // namespace

OneSidedDifferences one_sided_differences(const ScalarField& u) {
    const GridSpec& g = u.grid();
    OneSidedDifferences d;
    d.dimension = g.dimension;
    for (int a = 0; a < g.dimension; ++a) {
        d.forward[a] = ScalarField(g);
        d.backward[a] = ScalarField(g);
    }
    for (int j = 0; j < g.nodes[1]; ++j) {
        for (int i = 0; i < g.nodes[0]; ++i) {
            for (int a = 0; a < g.dimension; ++a) {
                const AxisDiff ad = axis_diff(u, a, i, j);
                d.forward[a].at(i, j) = ad.forward;
                d.backward[a].at(i, j) = ad.backward;
            }
        }
    }
    return d;
}

GodunovPair godunov_at(const ScalarField& u, int i, int j) {
    double plus = 0.0;
    double minus = 0.0;
    for (int a = 0; a < u.grid().dimension; ++a) {
        const AxisDiff d = axis_diff(u, a, i, j);
        const double bp = std::max(d.backward, 0.0);
        const double bm = std::min(d.backward, 0.0);
        const double fp = std::max(d.forward, 0.0);
        const double fm = std::min(d.forward, 0.0);
        plus += bp * bp + fm * fm;
        minus += bm * bm + fp * fp;
    }
    return {std::sqrt(plus), std::sqrt(minus)};
}

GodunovMagnitudes godunov_magnitudes(const ScalarField& u) {
    const GridSpec& g = u.grid();
    GodunovMagnitudes out{ScalarField(g), ScalarField(g)};
    for (int j = 0; j < g.nodes[1]; ++j) {
        for (int i = 0; i < g.nodes[0]; ++i) {
            const GodunovPair p = godunov_at(u, i, j);
            out.plus.at(i, j) = p.plus;
            out.minus.at(i, j) = p.minus;
        }
    }
    return out;
}

double sublevel_measure(const ScalarField& u, const ValueInterval& interval) {
    std::size_t count = 0;
    for (double v : u.values()) {
        if (interval.contains(v)) ++count;
    }
    return static_cast<double>(count) * u.grid().node_volume();
}

double lipschitz_estimate(const ScalarField& u) {
    const GridSpec& g = u.grid();
    double lip = 0.0;
    for (int j = 0; j < g.nodes[1]; ++j) {
        for (int i = 0; i < g.nodes[0]; ++i) {
            for (int a = 0; a < g.dimension; ++a) {
                const AxisDiff d = axis_diff(u, a, i, j);
                lip = std::max({lip, std::abs(d.forward), std::abs(d.backward)});
            }
        }
    }
    return lip;
}

}  // namespace nle
