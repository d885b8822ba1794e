#include "nle/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "nle/analysis.hpp"
#include "nle/error.hpp"
#include "nle/velocity.hpp"
#include "nle/weak_engine.hpp"

namespace nle {

namespace {

using Battery = std::function<BatteryResult(const BatteryOptions&)>;

BatteryResult result(std::string name, std::string module, std::string op, bool passed,
                     const std::ostringstream& detail) {
    return {std::move(name), std::move(module), std::move(op), passed, detail.str()};
}

bool near_edge(const GridSpec& g, int i, int j) {
    const auto edge = [](int p, int n) { return p < 2 || p >= n - 2; };
    return edge(i, g.nodes[0]) || (g.dimension == 2 && edge(j, g.nodes[1]));
}

BatteryResult monotone_step(const BatteryOptions& o) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int failures = 0;
    for (int s = 0; s < o.samples; ++s) {
        const int dim = s % 2 == 0 ? 1 : 2;
        const GridSpec g = GridSpec::box(dim, -1.0, 1.0, dim == 1 ? 1.0 / 20 : 1.0 / 6);
        ScalarField u(g), v(g), c(g);
        for (int j = 0; j < g.nodes[1]; ++j) {
            for (int i = 0; i < g.nodes[0]; ++i) {
                const std::size_t k = g.index(i, j);
                c[k] = -2.0 + 4.0 * unit(rng);
                // Admissible fields sit at -1 next to the box edge.
                if (near_edge(g, i, j)) {
                    u[k] = v[k] = -1.0;
                    continue;
                }
                u[k] = -1.0 + 2.0 * unit(rng);
                v[k] = std::min(1.0, u[k] + (unit(rng) < 0.3 ? 0.0 : unit(rng)));
            }
        }
        const double max_speed = std::max(std::abs(c.min()), std::abs(c.max()));
        const double theta = kMonotoneCflLimit * (1.0 - unit(rng));
        const double dt = cfl_time_step(g, max_speed, theta);
        const StepOptions opts{kMonotoneCflLimit, o.upwinding};
        const ScalarField a = step(u, c, dt, opts);
        const ScalarField b = step(v, c, dt, opts);
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] > b[k] + 1e-13) {
                ++failures;
                break;
            }
        }
    }
    std::ostringstream d;
    d << failures << " of " << o.samples << " ordered pairs lost their order";
    return result("monotone_step", "eikonal", "step", failures == 0, d);
}

ScalarField cosine_profile(const GridSpec& g) {
    return ScalarField::sample(g, [](const Point& x) {
        const double a = std::abs(x[0]);
        return a >= 2.0 ? -1.0 : std::cos(std::numbers::pi * a / 2.0);
    });
}

BatteryResult oleinik_lax_equivalence(const BatteryOptions& o) {
    const double h = 1.0 / 100;
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, h);
    const ScalarField u0 = cosine_profile(g);
    double worst = 0.0;
    for (double c : {1.0, -1.0}) {
        EikonalProblem p;
        p.initial = u0;
        p.velocity = [&](double, double) { return ScalarField(g, c); };
        p.horizon = 0.5;
        p.speed_bound = 1.0;
        p.upwinding = o.upwinding;
        const ScalarField num = solve(p).fields.back();
        const ScalarField exact = c > 0 ? oleinik_lax_sup(u0, 0.5) : oleinik_lax_inf(u0, 0.5);
        worst = std::max(worst, sup_distance(num, exact));
    }
    std::ostringstream d;
    d << "sup error " << worst << " against the Oleinik-Lax formulas, bound 2h = " << 2 * h;
    return result("oleinik_lax_equivalence", "eikonal", "solve", worst <= 2 * h, d);
}

BatteryResult convolution_bruteforce(const BatteryOptions& o) {
    std::mt19937_64 rng(o.seed + 17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int dim : {1, 2}) {
        const GridSpec g = GridSpec::box(dim, -1.0, 1.0, dim == 1 ? 1.0 / 40 : 1.0 / 10);
        ScalarField chi(g);
        for (std::size_t k = 0; k < chi.size(); ++k) chi[k] = unit(rng) < 0.4 ? 0.0 : unit(rng);
        const OccupancyField occ(chi);
        for (const Kernel& kernel : {Kernel::indicator(0.3, dim), Kernel::triangle(0.5, dim),
                                     Kernel::zero_mean_wavelet(0.2, 1.0, dim)}) {
            worst = std::max(worst, sup_distance(convolve(kernel, occ, 0.0), convolve_brute_force(kernel, occ, 0.0)));
        }
    }
    std::ostringstream d;
    d << "max |scatter - brute force| = " << worst;
    return result("convolution_bruteforce", "velocity", "convolve", worst <= 1e-12, d);
}

NonlocalProblem interval_problem(const BatteryOptions& o, Kernel kernel, double c1, double radius, double h) {
    NonlocalProblem p;
    p.kernel = std::move(kernel);
    p.c1 = ExternalVelocity::constant(c1);
    const GridSpec g = GridSpec::box(1, -3.0, 3.0, h);
    p.u0 = ScalarField::sample(g, [&](const Point& x) { return std::clamp(radius - std::abs(x[0]), -1.0, 1.0); });
    p.horizon = 0.5;
    p.upwinding = o.upwinding;
    return p;
}

BatteryResult inclusion_preservation(const BatteryOptions& o) {
    const double h = 1.0 / 100;
    const Kernel k = Kernel::triangle(1.0, 1);
    const NonlocalProblem inner = interval_problem(o, k, 0.0, 0.5, h);
    const NonlocalProblem outer = interval_problem(o, k, 0.0, 1.0, h);
    const FixedPointConfig cfg = FixedPointConfig::defaults(h);
    const WeakSolution a = continuation(inner, cfg);
    const WeakSolution b = continuation(outer, cfg);
    const std::vector<bool> nested = inclusion_test(a.u, b.u);
    const auto bad = std::count(nested.begin(), nested.end(), false);
    std::ostringstream d;
    d << bad << " of " << nested.size() << " snapshots break the nesting";
    return result("inclusion_preservation", "analysis", "inclusion_test", bad == 0, d);
}

WeakSolution expanding_1d(const BatteryOptions& o) {
    const double h = 1.0 / 100;
    return continuation(interval_problem(o, Kernel::zero_mean_wavelet(0.2, 1.0, 1), 1.1, 1.0, h),
                        FixedPointConfig::defaults(h));
}

BatteryResult band_growth_battery(const BatteryOptions& o) {
    const WeakSolution w = expanding_1d(o);
    double eta_hat = INFINITY;
    for (const auto& f : w.u.fields) eta_hat = std::min(eta_hat, gradient_margin(f));
    const BandGrowthReport r = band_growth(w.u, w.cbar, eta_hat / 4.0);
    std::ostringstream d;
    d << "K_hat = " << r.growth_rate << ", rho = " << r.rho << ", flagged = " << r.flagged;
    return result("band_growth", "analysis", "band_growth", !r.flagged, d);
}

BatteryResult gradient_margin_persistence(const BatteryOptions& o) {
    const WeakSolution w = expanding_1d(o);
    const double eta0 = gradient_margin(w.u.fields.front());
    double worst = INFINITY;
    for (const auto& f : w.u.fields) worst = std::min(worst, gradient_margin(f));
    std::ostringstream d;
    d << "eta0 = " << eta0 << ", min over snapshots = " << worst;
    return result("gradient_margin_persistence", "analysis", "gradient_margin", worst >= 0.5 * eta0, d);
}

const std::map<std::string, Battery>& registry() {
    static const std::map<std::string, Battery> r{
        {"monotone_step", monotone_step},
        {"oleinik_lax_equivalence", oleinik_lax_equivalence},
        {"convolution_bruteforce", convolution_bruteforce},
        {"inclusion_preservation", inclusion_preservation},
        {"band_growth", band_growth_battery},
        {"gradient_margin_persistence", gradient_margin_persistence},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& battery_names() {
    static const std::vector<std::string> names{"monotone_step",          "oleinik_lax_equivalence",
                                                "convolution_bruteforce", "inclusion_preservation",
                                                "band_growth",            "gradient_margin_persistence"};
    return names;
}

BatteryResult run_battery(const std::string& name, const BatteryOptions& options) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw ConfigError("unknown verification battery '" + name + "'");
    try {
        return it->second(options);
    } catch (const std::exception& e) {
        return {name, "", "", false, std::string("exception: ") + e.what()};
    }
}

}  // namespace nle
