#include "nle/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nle/error.hpp"
#include "nle/field_io.hpp"

namespace nle {

namespace {

double norm(const Point& z) { return std::hypot(z[0], z[1]); }

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
    const double dx = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * dx);
    return s * dx / 3.0;
}

// Integral of a radial function g(|z|) over the ball of radius r in dimension N.
template <class F>
double radial_integral(F&& g, double r, int dimension) {
    constexpr int kPanels = 20000;
    if (dimension == 1) return 2.0 * simpson(g, 0.0, r, kPanels);
    return 2.0 * std::numbers::pi * simpson([&](double s) { return g(s) * s; }, 0.0, r, kPanels);
}

KernelStencil sample_profile(const Kernel::Profile& profile, double support, const GridSpec& grid,
                             double t) {
    KernelStencil s;
    s.dimension = grid.dimension;
    s.h = grid.h;
    s.radius = static_cast<int>(std::floor(support / grid.h * (1.0 + 1e-12)));
    const int w = s.width();
    const int rows = grid.dimension == 2 ? w : 1;
    s.weights.assign(static_cast<std::size_t>(w * rows), 0.0);
    for (int r = 0; r < rows; ++r) {
        const int dj = grid.dimension == 2 ? r - s.radius : 0;
        for (int c = 0; c < w; ++c) {
            const int di = c - s.radius;
            s.weights[static_cast<std::size_t>(r * w + c)] =
                profile({di * grid.h, dj * grid.h}, t);
        }
    }
    return s;
}

}  // namespace

bool KernelStencil::is_zero() const {
    return std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; });
}

KernelConstants KernelStencil::measure() const {
    const double vol = dimension == 1 ? h : h * h;
    const int w = width();
    const int rows = dimension == 2 ? w : 1;
    // Samples padded with zeros outside the stencil.
    auto value = [&](int c, int r) -> double {
        if (c < 0 || c >= w || r < 0 || r >= rows) return 0.0;
        return weights[static_cast<std::size_t>(r * w + c)];
    };
    KernelConstants k;
    for (int r = -1; r <= rows; ++r) {
        for (int c = -1; c <= w; ++c) {
            const double v = value(c, r);
            k.l1_norm += std::abs(v) * vol;
            k.sup_norm = std::max(k.sup_norm, std::abs(v));
            const double gx = (value(c + 1, r) - v) / h;
            const double gy = dimension == 2 ? (value(c, r + 1) - v) / h : 0.0;
            k.gradient_l1_norm += std::hypot(gx, gy) * vol;
            const double sx = value(c + 1, r) + value(c - 1, r) - 2.0 * v;
            k.semiconvexity = std::max(k.semiconvexity, -sx / (h * h));
            if (dimension == 2) {
                const double sy = value(c, r + 1) + value(c, r - 1) - 2.0 * v;
                k.semiconvexity = std::max(k.semiconvexity, -sy / (h * h));
            }
        }
    }
    return k;
}

Kernel::Kernel(std::string name, Profile profile, StencilBuilder builder, double support_radius,
               KernelConstants declared, bool time_independent)
    : name_(std::move(name)),
      profile_(std::move(profile)),
      builder_(std::move(builder)),
      support_radius_(support_radius),
      declared_(declared),
      time_independent_(time_independent) {
    if (!(support_radius_ >= 0.0) || !std::isfinite(support_radius_)) {
        throw PreconditionError("kernel support radius must be finite and non-negative");
    }
}

Kernel Kernel::zero() {
    Profile p = [](const Point&, double) { return 0.0; };
    StencilBuilder b = [](const GridSpec& g, double) {
        KernelStencil s;
        s.dimension = g.dimension;
        s.h = g.h;
        s.weights = {0.0};
        return s;
    };
    return Kernel("zero", p, b, 0.0, {}, true);
}

Kernel Kernel::indicator(double radius, int dimension) {
    if (!(radius > 0.0)) throw PreconditionError("indicator kernel radius must be positive");
    if (dimension != 1 && dimension != 2) {
        throw UnsupportedDimensionError("indicator kernel: dimension must be 1 or 2");
    }
    Profile p = [radius](const Point& z, double) {
        return norm(z) <= radius * (1.0 + 1e-12) ? 1.0 : 0.0;
    };
    StencilBuilder b = [p, radius](const GridSpec& g, double t) {
        return sample_profile(p, radius, g, t);
    };
    // L0 is the total variation of the indicator: 2 jumps in 1D, the circle length in 2D.
    KernelConstants d;
    d.l1_norm = dimension == 1 ? 2.0 * radius : std::numbers::pi * radius * radius;
    d.gradient_l1_norm = dimension == 1 ? 2.0 : 2.0 * std::numbers::pi * radius;
    d.sup_norm = 1.0;
    d.semiconvexity = std::numeric_limits<double>::quiet_NaN();
    return Kernel("indicator(" + format_double(radius) + ")", p, b, radius, d, true);
}

Kernel Kernel::triangle(double a, int dimension) {
    if (!(a > 0.0)) throw PreconditionError("triangle kernel width must be positive");
    if (dimension != 1 && dimension != 2) {
        throw UnsupportedDimensionError("triangle kernel: dimension must be 1 or 2");
    }
    Profile p = [a](const Point& z, double) { return std::max(1.0 - norm(z) / a, 0.0); };
    StencilBuilder b = [p, a](const GridSpec& g, double t) { return sample_profile(p, a, g, t); };
    KernelConstants d;
    d.l1_norm = dimension == 1 ? a : std::numbers::pi * a * a / 3.0;
    d.gradient_l1_norm = dimension == 1 ? 2.0 : std::numbers::pi * a;
    d.sup_norm = 1.0;
    d.semiconvexity = std::numeric_limits<double>::quiet_NaN();
    return Kernel("triangle(" + format_double(a) + ")", p, b, a, d, true);
}

Kernel Kernel::zero_mean_wavelet(double a, double l1_norm, int dimension) {
    if (!(a > 0.0) || !(l1_norm >= 0.0)) {
        throw PreconditionError("zero-mean wavelet needs a > 0 and a non-negative L1 norm");
    }
    if (dimension != 1 && dimension != 2) {
        throw UnsupportedDimensionError("zero-mean wavelet: dimension must be 1 or 2");
    }
    // With s = |z|^2/a^2 and bump (1 - s/4)^2, the zero-integral weight is 7/4 in 1D and 1 in 2D.
    const double beta = dimension == 1 ? 1.75 : 1.0;
    auto shape = [a, beta](double r) {
        const double s = r * r / (a * a);
        if (s >= 4.0) return 0.0;
        const double bump = 1.0 - 0.25 * s;
        return (1.0 - beta * s) * bump * bump;
    };
    const double support = 2.0 * a;
    const double raw_l1 =
        radial_integral([&](double r) { return std::abs(shape(r)); }, support, dimension);
    const double amp = raw_l1 > 0.0 ? l1_norm / raw_l1 : 0.0;
    auto dshape = [a, beta](double r) {
        const double s = r * r / (a * a);
        if (s >= 4.0) return 0.0;
        const double bump = 1.0 - 0.25 * s;
        const double ds = 2.0 * r / (a * a);
        return ds * (-beta * bump * bump - 0.5 * (1.0 - beta * s) * bump);
    };
    const double grad_l1 =
        amp * radial_integral([&](double r) { return std::abs(dshape(r)); }, support, dimension);

    Profile p = [shape, amp](const Point& z, double) { return amp * shape(norm(z)); };
    StencilBuilder b = [a, support, l1_norm](const GridSpec& g, double) {
        // Renormalize on the grid: zero discrete mean, exact discrete L1 norm.
        KernelStencil bump_part = sample_profile(
            [a](const Point& z, double) {
                const double s = (z[0] * z[0] + z[1] * z[1]) / (a * a);
                if (s >= 4.0) return 0.0;
                const double bump = 1.0 - 0.25 * s;
                return bump * bump;
            },
            support, g, 0.0);
        KernelStencil s = bump_part;
        double sum_bump = 0.0;
        double sum_weighted = 0.0;
        const int w = s.width();
        const int rows = g.dimension == 2 ? w : 1;
        std::vector<double> radial(s.weights.size(), 0.0);
        for (int r = 0; r < rows; ++r) {
            const int dj = g.dimension == 2 ? r - s.radius : 0;
            for (int c = 0; c < w; ++c) {
                const int di = c - s.radius;
                const auto k = static_cast<std::size_t>(r * w + c);
                radial[k] = (di * di + dj * dj) * g.h * g.h / (a * a);
                sum_bump += bump_part.weights[k];
                sum_weighted += radial[k] * bump_part.weights[k];
            }
        }
        const double beta_h = sum_weighted > 0.0 ? sum_bump / sum_weighted : 0.0;
        double l1 = 0.0;
        for (std::size_t k = 0; k < s.weights.size(); ++k) {
            s.weights[k] = (1.0 - beta_h * radial[k]) * bump_part.weights[k];
            l1 += std::abs(s.weights[k]);
        }
        l1 *= g.node_volume();
        const double scale = l1 > 0.0 ? l1_norm / l1 : 0.0;
        for (double& v : s.weights) v *= scale;
        return s;
    };
    KernelConstants d;
    d.l1_norm = l1_norm;
    d.gradient_l1_norm = grad_l1;
    d.sup_norm = amp;
    d.semiconvexity = std::numeric_limits<double>::quiet_NaN();
    return Kernel("zero-mean-wavelet(" + format_double(a) + ")", p, b, support, d, true);
}

Kernel Kernel::from_samples(const ScalarField& samples, std::string name) {
    const GridSpec& g = samples.grid();
    const int r = (g.nodes[0] - 1) / 2;
    const double tol = 1e-9 * g.h;
    const bool centred = g.nodes[0] % 2 == 1 && std::abs(g.lower[0] + r * g.h) < tol &&
                         (g.dimension == 1 ||
                          (g.nodes[1] == g.nodes[0] && std::abs(g.lower[1] + r * g.h) < tol));
    if (!centred) {
        throw ConfigError("kernel sample file must be a square grid centred on the origin");
    }
    KernelStencil base;
    base.dimension = g.dimension;
    base.radius = r;
    base.h = g.h;
    base.weights.assign(samples.values().begin(), samples.values().end());
    Profile p = [base](const Point& z, double) {
        const int di = static_cast<int>(std::lround(z[0] / base.h));
        const int dj = base.dimension == 2 ? static_cast<int>(std::lround(z[1] / base.h)) : 0;
        if (std::abs(di) > base.radius || std::abs(dj) > base.radius) return 0.0;
        return base.at(di, dj);
    };
    StencilBuilder b = [base](const GridSpec& grid, double) {
        if (grid.dimension != base.dimension || std::abs(grid.h - base.h) > 1e-12 * base.h) {
            throw ConfigError("kernel samples were tabulated on a different grid spacing or dimension");
        }
        return base;
    };
    const KernelConstants d = base.measure();
    return Kernel(std::move(name), p, b, r * g.h * (g.dimension == 2 ? std::sqrt(2.0) : 1.0), d,
                  true);
}

KernelStencil Kernel::stencil(const GridSpec& grid, double t) const { return builder_(grid, t); }

KernelConstants Kernel::measured(const GridSpec& grid, double t) const {
    return stencil(grid, t).measure();
}

bool Kernel::check_l1_bound(const GridSpec& grid, double tolerance, double t) const {
    return measured(grid, t).l1_norm <= declared_.l1_norm * (1.0 + tolerance);
}

ExternalVelocity::ExternalVelocity(std::string name, Evaluator evaluator,
                                   ExternalConstants constants, bool space_independent)
    : name_(std::move(name)),
      evaluator_(std::move(evaluator)),
      constants_(constants),
      space_independent_(space_independent) {}

ExternalVelocity ExternalVelocity::constant(double value) {
    return ExternalVelocity(
        "constant(" + format_double(value) + ")", [value](const Point&, double) { return value; },
        {std::abs(value), 0.0, 0.0}, true);
}

ExternalVelocity ExternalVelocity::counterexample_quadratic() {
    return ExternalVelocity(
        "quadratic", [](const Point&, double t) { return 2.0 * (t - 1.0) * (2.0 - t); },
        {4.0, 0.0, 0.0}, true);
}

ExternalVelocity ExternalVelocity::time_table(std::vector<std::pair<double, double>> table) {
    if (table.empty()) throw ConfigError("c1 time table must not be empty");
    for (std::size_t k = 1; k < table.size(); ++k) {
        if (!(table[k].first > table[k - 1].first)) {
            throw ConfigError("c1 time table times must be strictly increasing");
        }
    }
    double bound = 0.0;
    for (const auto& [t, v] : table) bound = std::max(bound, std::abs(v));
    auto eval = [table](const Point&, double t) {
        if (t <= table.front().first) return table.front().second;
        if (t >= table.back().first) return table.back().second;
        const auto it = std::upper_bound(table.begin(), table.end(), t,
                                         [](double x, const auto& e) { return x < e.first; });
        const auto& [t1, v1] = *it;
        const auto& [t0, v0] = *(it - 1);
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    };
    return ExternalVelocity("table", eval, {bound, 0.0, 0.0}, true);
}

ScalarField ExternalVelocity::sample(const GridSpec& grid, double t) const {
    if (space_independent_) return ScalarField(grid, evaluator_({0.0, 0.0}, t));
    return ScalarField::sample(grid, [&](const Point& x) { return evaluator_(x, t); });
}

bool ExternalVelocity::check_bound(const GridSpec& grid, const std::vector<double>& times,
                                   double tolerance) const {
    for (double t : times) {
        const ScalarField s = sample(grid, t);
        for (double v : s.values()) {
            if (std::abs(v) > constants_.bound * (1.0 + tolerance) + tolerance) return false;
        }
    }
    return true;
}

OccupancyField::OccupancyField(ScalarField values) : values_(std::move(values)) {
    for (double v : values_.values()) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw PreconditionError("occupancy values must lie in [0, 1]");
        }
    }
}

OccupancyField OccupancyField::zeros(const GridSpec& grid) {
    return OccupancyField(ScalarField(grid, 0.0));
}

OccupancyField OccupancyField::indicator_of(const ScalarField& u) {
    ScalarField chi(u.grid());
    for (std::size_t k = 0; k < u.size(); ++k) chi[k] = u[k] >= 0.0 ? 1.0 : 0.0;
    return OccupancyField(std::move(chi));
}

ScalarField convolve(const KernelStencil& stencil, const OccupancyField& chi) {
    const GridSpec& g = chi.grid();
    if (stencil.dimension != g.dimension || std::abs(stencil.h - g.h) > 1e-12 * g.h) {
        throw ConfigError("convolve: kernel stencil and occupancy live on different grids");
    }
    ScalarField out(g, 0.0);
    if (stencil.is_zero()) return out;
    const int r = stencil.radius;
    const int w = stencil.width();
    const int nx = g.nodes[0];
    const int ny = g.nodes[1];
    const int rj = g.dimension == 2 ? r : 0;
    std::span<double> dst = out.values();
    // Scatter from occupied sources: out(y + k) += c0(k) chi(y).
    for (int sj = 0; sj < ny; ++sj) {
        for (int si = 0; si < nx; ++si) {
            const double c = chi[g.index(si, sj)];
            if (c == 0.0) continue;
            const int dj_lo = std::max(-rj, -sj);
            const int dj_hi = std::min(rj, ny - 1 - sj);
            const int di_lo = std::max(-r, -si);
            const int di_hi = std::min(r, nx - 1 - si);
            for (int dj = dj_lo; dj <= dj_hi; ++dj) {
                const double* wrow = stencil.weights.data() + static_cast<std::size_t>((dj + rj) * w + r);
                double* orow = dst.data() + g.index(si, sj + dj);
                for (int di = di_lo; di <= di_hi; ++di) orow[di] += wrow[di] * c;
            }
        }
    }
    const double vol = g.node_volume();
    for (double& v : dst) v *= vol;
    return out;
}

ScalarField convolve(const Kernel& kernel, const OccupancyField& chi, double t) {
    return convolve(kernel.stencil(chi.grid(), t), chi);
}

ScalarField convolve_brute_force(const Kernel& kernel, const OccupancyField& chi, double t) {
    const GridSpec& g = chi.grid();
    const KernelStencil s = kernel.stencil(g, t);
    ScalarField out(g, 0.0);
    for (int xj = 0; xj < g.nodes[1]; ++xj) {
        for (int xi = 0; xi < g.nodes[0]; ++xi) {
            double acc = 0.0;
            for (int yj = 0; yj < g.nodes[1]; ++yj) {
                for (int yi = 0; yi < g.nodes[0]; ++yi) {
                    const int di = xi - yi;
                    const int dj = xj - yj;
                    if (std::abs(di) > s.radius || std::abs(dj) > s.radius) continue;
                    acc += s.at(di, dj) * chi[g.index(yi, yj)];
                }
            }
            out.at(xi, xj) = acc * g.node_volume();
        }
    }
    return out;
}

ScalarField assemble_total_velocity(const Kernel& kernel, const OccupancyField& chi,
                                    const ExternalVelocity& c1, double t) {
    ScalarField c = convolve(kernel, chi, t);
    if (c1.space_independent()) {
        const double v = c1({0.0, 0.0}, t);
        for (double& x : c.values()) x += v;
    } else {
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += c1(c.position(k), t);
    }
    return c;
}

VelocityBounds velocity_bounds(const Kernel& kernel, const ExternalVelocity& c1) {
    const KernelConstants& k = kernel.declared();
    return {k.l1_norm + c1.constants().bound, k.gradient_l1_norm + c1.constants().lipschitz};
}

PositivityReport check_positivity(const ScalarField& cbar, double delta) {
    PositivityReport r;
    const auto values = cbar.values();
    const auto it = std::min_element(values.begin(), values.end());
    r.min_value = *it;
    r.worst_node = static_cast<std::size_t>(it - values.begin());
    r.holds = r.min_value >= delta;
    return r;
}

}  // namespace nle
