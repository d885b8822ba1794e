#include "nle/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nle/eikonal.hpp"
#include "nle/error.hpp"

namespace nle {

void WeakSolution::validate() const {
    u.validate();
    if (chi.size() != u.size() || cbar.size() != u.size()) {
        throw PreconditionError("weak solution: chi and cbar need one record per snapshot");
    }
    if (u.times.front() != 0.0) throw PreconditionError("weak solution must start at t = 0");
}

double gradient_margin(const ScalarField& u) {
    const GridSpec& g = u.grid();
    double margin = INFINITY;
    for (int j = 0; j < g.nodes[1]; ++j) {
        for (int i = 0; i < g.nodes[0]; ++i) {
            const GodunovPair p = godunov_at(u, i, j);
            margin = std::min(margin, std::abs(u.at(i, j)) + std::max(p.plus, p.minus));
        }
    }
    return margin;
}

double semiconvexity_modulus(const ScalarField& u, double max_offset,
                             const ValueInterval* restrict_to) {
    const GridSpec& g = u.grid();
    if (!(max_offset >= g.h * (1.0 - 1e-12))) {
        throw PreconditionError("semiconvexity_modulus: max_offset must be at least h");
    }
    const int m = static_cast<int>(std::floor(max_offset / g.h + 1e-9));
    // Half-plane of lattice offsets with 0 < |k| <= max_offset.
    std::vector<std::array<int, 2>> offsets;
    for (int dj = 0; dj <= (g.dimension == 2 ? m : 0); ++dj) {
        for (int di = -m; di <= m; ++di) {
            if (dj == 0 && di <= 0) continue;
            if (di * di + dj * dj > m * m) continue;
            offsets.push_back({di, dj});
        }
    }
    double modulus = 0.0;
    for (int j = 0; j < g.nodes[1]; ++j) {
        for (int i = 0; i < g.nodes[0]; ++i) {
            const double centre = u.at(i, j);
            if (restrict_to && !restrict_to->contains(centre)) continue;
            for (const auto& [di, dj] : offsets) {
                const int ip = i + di, im = i - di, jp = j + dj, jm = j - dj;
                if (ip < 0 || im < 0 || ip >= g.nodes[0] || im >= g.nodes[0]) continue;
                if (jp < 0 || jm < 0 || jp >= g.nodes[1] || jm >= g.nodes[1]) continue;
                const double second = u.at(ip, jp) + u.at(im, jm) - 2.0 * centre;
                const double len2 = (di * di + dj * dj) * g.h * g.h;
                modulus = std::max(modulus, -second / len2);
            }
        }
    }
    return modulus;
}

std::vector<bool> inclusion_test(const Trajectory& inner, const Trajectory& outer) {
    if (inner.size() != outer.size()) {
        throw PreconditionError("inclusion_test: trajectories have different snapshot counts");
    }
    std::vector<bool> out(inner.size(), true);
    for (std::size_t s = 0; s < inner.size(); ++s) {
        const ScalarField& a = inner.fields[s];
        const ScalarField& b = outer.fields[s];
        if (!(a.grid() == b.grid())) throw PreconditionError("inclusion_test: grids differ");
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] >= 0.0 && !(b[k] > 0.0)) {
                out[s] = false;
                break;
            }
        }
    }
    return out;
}

namespace {

// Zero crossing of the linear interpolant between values a and b (opposite classes).
double crossing(double a, double b) { return a / (a - b); }

double contour_length_2d(const ScalarField& u) {
    const GridSpec& g = u.grid();
    double length = 0.0;
    for (int j = 0; j + 1 < g.nodes[1]; ++j) {
        for (int i = 0; i + 1 < g.nodes[0]; ++i) {
            // Corners counter-clockwise from bottom-left.
            const double v[4] = {u.at(i, j), u.at(i + 1, j), u.at(i + 1, j + 1), u.at(i, j + 1)};
            const bool in[4] = {v[0] >= 0.0, v[1] >= 0.0, v[2] >= 0.0, v[3] >= 0.0};
            const int inside = in[0] + in[1] + in[2] + in[3];
            if (inside == 0 || inside == 4) continue;
            // Edge e joins corner e and e+1; crossing points in cell units.
            const double corner[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
            std::array<std::array<double, 2>, 4> pt{};
            std::array<bool, 4> cut{};
            for (int e = 0; e < 4; ++e) {
                const int a = e, b = (e + 1) % 4;
                if (in[a] == in[b]) continue;
                const double s = crossing(v[a], v[b]);
                pt[e] = {corner[a][0] + s * (corner[b][0] - corner[a][0]),
                         corner[a][1] + s * (corner[b][1] - corner[a][1])};
                cut[e] = true;
            }
            auto seg = [&](int e1, int e2) {
                return std::hypot(pt[e1][0] - pt[e2][0], pt[e1][1] - pt[e2][1]) * g.h;
            };
            if (inside == 2 && in[0] == in[2]) {
                // Saddle: resolve with the cell-centre average.
                const bool centre_in = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= 0.0;
                // Corner c is isolated by the segment joining edges c-1 and c.
                const bool isolate_odd = (centre_in == in[0]);
                if (isolate_odd) {
                    length += seg(0, 1) + seg(2, 3);  // corners 1 and 3
                } else {
                    length += seg(3, 0) + seg(1, 2);  // corners 0 and 2
                }
            } else {
                int e1 = -1, e2 = -1;
                for (int e = 0; e < 4; ++e) {
                    if (!cut[e]) continue;
                    (e1 < 0 ? e1 : e2) = e;
                }
                length += seg(e1, e2);
            }
        }
    }
    return length;
}

}  // namespace

double front_perimeter(const ScalarField& u) {
    const GridSpec& g = u.grid();
    if (g.dimension == 2) return contour_length_2d(u);
    int changes = 0;
    for (int i = 0; i + 1 < g.nodes[0]; ++i) {
        if ((u.at(i) >= 0.0) != (u.at(i + 1) >= 0.0)) ++changes;
    }
    return static_cast<double>(changes);
}

std::vector<Point> zero_crossings(const ScalarField& u) {
    const GridSpec& g = u.grid();
    std::vector<Point> out;
    auto edge = [&](int i, int j, int di, int dj) {
        const double a = u.at(i, j);
        const double b = u.at(i + di, j + dj);
        if ((a >= 0.0) == (b >= 0.0)) return;
        const double s = crossing(a, b);
        out.push_back({g.coord(0, i) + s * di * g.h, g.dimension == 2 ? g.coord(1, j) + s * dj * g.h : 0.0});
    };
    for (int j = 0; j < g.nodes[1]; ++j) {
        for (int i = 0; i < g.nodes[0]; ++i) {
            if (i + 1 < g.nodes[0]) edge(i, j, 1, 0);
            if (g.dimension == 2 && j + 1 < g.nodes[1]) edge(i, j, 0, 1);
        }
    }
    return out;
}

double indicator_l1_distance(const ScalarField& u1, const ScalarField& u2) {
    if (!(u1.grid() == u2.grid())) throw PreconditionError("indicator_l1_distance: grids differ");
    std::size_t count = 0;
    for (std::size_t k = 0; k < u1.size(); ++k) {
        if ((u1[k] >= 0.0) != (u2[k] >= 0.0)) ++count;
    }
    return static_cast<double>(count) * u1.grid().node_volume();
}

double far_field_radius(const ScalarField& u0) {
    double r = 0.0;
    for (std::size_t k = 0; k < u0.size(); ++k) {
        if (u0[k] > -1.0) {
            const Point p = u0.position(k);
            r = std::max(r, std::hypot(p[0], p[1]));
        }
    }
    return r + u0.grid().h;
}

BandGrowthReport band_growth(const Trajectory& u, const std::vector<ScalarField>& velocities,
                             double rho) {
    u.validate();
    if (velocities.size() != u.size()) {
        throw PreconditionError("band_growth: need one velocity field per snapshot");
    }
    BandGrowthReport r;
    r.rho = rho;
    r.eta0 = gradient_margin(u.fields.front());
    r.eta_hat = INFINITY;
    for (const auto& f : u.fields) r.eta_hat = std::min(r.eta_hat, gradient_margin(f));
    if (!(rho > 0.0) || !(rho < r.eta_hat / 2.0)) {
        throw PreconditionError("band_growth: rho must satisfy 0 < rho < eta_hat / 2");
    }
    const ValueInterval band = ValueInterval::half_open(-rho, 0.0);
    const double h = u.grid().h;
    for (const auto& f : u.fields) {
        r.semiconvexity = std::max(r.semiconvexity, semiconvexity_modulus(f, 2.0 * h, &band));
    }
    for (const auto& c : velocities) {
        r.speed_max = std::max({r.speed_max, std::abs(c.min()), std::abs(c.max())});
        r.velocity_lipschitz = std::max(r.velocity_lipschitz, lipschitz_estimate(c));
    }
    r.growth_rate = r.velocity_lipschitz + 2.0 * r.semiconvexity * r.speed_max / r.eta_hat;
    r.perimeter0 = front_perimeter(u.fields.front());
    const double m0 = sublevel_measure(u.fields.front(), band);
    r.initial_floor = std::max(m0, 2.0 * rho / r.eta0 * r.perimeter0);

    const double t0 = u.times.front();
    for (std::size_t s = 0; s < u.size(); ++s) {
        const double t = u.times[s] - t0;
        const double m = sublevel_measure(u.fields[s], band);
        const double b = 1.5 * std::exp(r.growth_rate * t) * r.initial_floor;
        r.times.push_back(u.times[s]);
        r.band_measure.push_back(m);
        r.bound.push_back(b);
        if (m > b) r.flagged = true;
    }
    const double radius = far_field_radius(u.fields.front()) + 1.0;
    const double ball = u.grid().dimension == 1 ? 2.0 * radius : std::numbers::pi * radius * radius;
    r.ball_bound = 2.0 * r.semiconvexity / r.eta0 * ball *
                   std::exp(r.growth_rate * (u.times.back() - t0)) * rho;
    return r;
}

ContinuousDependenceReport continuous_dependence_gap(const Trajectory& u1, const Trajectory& u2,
                                                     const std::vector<ScalarField>& c1,
                                                     const std::vector<ScalarField>& c2,
                                                     double rel_tol, double abs_slack) {
    u1.validate();
    u2.validate();
    if (u1.size() != u2.size() || c1.size() != u1.size() || c2.size() != u1.size()) {
        throw PreconditionError("continuous_dependence_gap: snapshot counts differ");
    }
    ContinuousDependenceReport r;
    r.lipschitz_u0 = lipschitz_estimate(u1.fields.front());
    for (std::size_t s = 0; s < c1.size(); ++s) {
        r.lambda = std::max({r.lambda, lipschitz_estimate(c1[s]), lipschitz_estimate(c2[s])});
    }
    double integral = 0.0;
    for (std::size_t s = 0; s < u1.size(); ++s) {
        if (s > 0) integral += sup_distance(c1[s - 1], c2[s - 1]) * (u1.times[s] - u1.times[s - 1]);
        DependenceRow row;
        row.time = u1.times[s];
        row.gap = sup_distance(u1.fields[s], u2.fields[s]);
        row.bound = r.lipschitz_u0 * std::exp(r.lambda * (row.time - u1.times.front())) * integral *
                        (1.0 + rel_tol) +
                    abs_slack;
        row.holds = row.gap <= row.bound;
        r.holds = r.holds && row.holds;
        r.rows.push_back(row);
    }
    return r;
}

double l1_stability_residual(const WeakSolution& w) {
    w.validate();
    EikonalProblem p;
    p.initial = w.u.fields.front();
    p.velocity = piecewise_constant_velocity(w.u.times, w.cbar);
    p.horizon = w.u.times.back();
    p.speed_bound = w.speed_bound;
    p.cfl = w.cfl;
    p.snapshot_times = w.u.times;
    const Trajectory again = solve(p);
    return sup_distance(again, w.u);
}

}  // namespace nle
