#include "nle/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "nle/analysis.hpp"
#include "nle/counterexample.hpp"
#include "nle/error.hpp"
#include "nle/field_io.hpp"
#include "nle/output.hpp"
#include "nle/verify.hpp"
#include "nle/weak_engine.hpp"

namespace nle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ostream& log_of(const RunOptions& o) { return o.log ? *o.log : std::cout; }

std::string hex(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct Derived {
    double M = kNaN;
    double L = kNaN;
    double K_hat = kNaN;
    double eta_hat = kNaN;
};

std::vector<std::string> header(const ExperimentConfig& c, const RunOptions& o, const Derived& d) {
    return {"config_hash=" + hex(c.hash), "seed=" + std::to_string(o.seed.value_or(c.seed)),
            "M=" + cell(d.M) + " L=" + cell(d.L) + " K_hat=" + cell(d.K_hat) + " eta_hat=" + cell(d.eta_hat)};
}

int guarded(const RunOptions& o, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log_of(o) << "configuration error: " << e.what() << '\n';
    } catch (const PreconditionError& e) {
        log_of(o) << "configuration error: " << e.what() << '\n';
    } catch (const UnsupportedDimensionError& e) {
        log_of(o) << "configuration error: " << e.what() << '\n';
    } catch (const ResourceError& e) {
        log_of(o) << "configuration error: " << e.what() << '\n';
    }
    return kExitConfigError;
}

std::size_t nearest_index(const std::vector<double>& times, double t) {
    const auto it = std::min_element(times.begin(), times.end(),
                                     [&](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
    return static_cast<std::size_t>(it - times.begin());
}

bool is_constant(const GammaControl& g, double v) {
    return g.pieces().size() == 1 && g.pieces().front().second == v;
}

double front_radius_error(const ScalarField& u, double r) {
    double worst = 0.0;
    for (const Point& p : zero_crossings(u)) worst = std::max(worst, std::abs(std::hypot(p[0], p[1]) - r));
    return worst;
}

}  // namespace

std::optional<std::filesystem::path> output_root_from_env() {
    const char* v = std::getenv("NLE_OUTPUT_ROOT");
    if (!v || !*v) return std::nullopt;
    return std::filesystem::path(v);
}

std::filesystem::path output_directory(const ExperimentConfig& config, const RunOptions& options) {
    if (!options.output_root) return config.output_directory;
    const std::filesystem::path& d = config.output_directory;
    return *options.output_root / (d.is_absolute() ? d.relative_path() : d);
}

int run_simulate(const ExperimentConfig& config, const RunOptions& options) {
    return guarded(options, [&] {
        std::ostream& log = log_of(options);
        const NonlocalProblem problem = config.problem();
        check_finite_speed_box(problem);
        const FixedPointConfig fp = config.engine.build(config.grid.h);

        const WeakSolution w = continuation(problem, fp);

        Derived d;
        const VelocityBounds vb = velocity_bounds(problem.kernel, problem.c1);
        d.M = vb.speed;
        d.L = vb.lipschitz;
        const double eta0 = gradient_margin(w.u.fields.front());
        d.eta_hat = INFINITY;
        for (const auto& s : w.diagnostics) d.eta_hat = std::min(d.eta_hat, s.gradient_margin);
        const double rho = config.diagnostics.rho.value_or(d.eta_hat / 4.0);
        std::optional<BandGrowthReport> band;
        try {
            band = band_growth(w.u, w.cbar, rho);
            d.K_hat = band->growth_rate;
        } catch (const PreconditionError& e) {
            log << "band growth skipped: " << e.what() << '\n';
        }
        bool positive = true;
        for (const auto& c : w.cbar) positive = positive && check_positivity(c, config.diagnostics.delta).holds;

        const std::filesystem::path dir = output_directory(config, options);
        std::filesystem::create_directories(dir);
        std::vector<std::string> comments = header(config, options, d);
        comments.push_back("selection=" + w.selection_note);

        CsvTable diag({"t", "residual", "sandwich_violation_measure", "classical_flag", "min_cbar", "lipschitz",
                       "gradient_margin"});
        double max_residual = 0.0;
        double max_sandwich = 0.0;
        for (const auto& s : w.diagnostics) {
            diag.add_row({cell(s.time), cell(s.residual), cell(s.sandwich_violation), cell(s.classical),
                          cell(s.min_cbar), cell(s.lipschitz), cell(s.gradient_margin)});
            max_residual = std::max(max_residual, s.residual);
            max_sandwich = std::max(max_sandwich, s.sandwich_violation);
        }
        diag.write(dir / "diagnostics.csv", comments);

        const KernelConstants& k0 = problem.kernel.declared();
        const ExternalConstants& k1 = problem.c1.constants();
        CsvTable bounds({"name", "value"});
        const std::vector<std::pair<std::string, double>> constants{
            {"M0", k0.l1_norm},
            {"M1", k1.bound},
            {"L0", k0.gradient_l1_norm},
            {"L1", k1.lipschitz},
            {"M", d.M},
            {"L", d.L},
            {"eta0", eta0},
            {"eta_hat", d.eta_hat},
            {"C_hat", band ? band->semiconvexity : kNaN},
            {"K_hat", d.K_hat},
            {"delta", config.diagnostics.delta},
            {"rho", rho},
            {"ball_bound", band ? band->ball_bound : kNaN},
        };
        for (const auto& [name, value] : constants) bounds.add_row({name, cell(value)});
        bounds.write(dir / "bounds.csv", comments);

        CsvTable levels({"eps", "iterations", "residual", "converged", "damping"});
        for (const auto& l : w.levels) {
            levels.add_row({cell(l.eps), std::to_string(l.iterations), cell(l.residual), cell(l.converged),
                            cell(l.damping)});
        }
        levels.write(dir / "levels.csv", comments);

        if (band) {
            CsvTable table({"t", "band_measure", "bound"});
            for (std::size_t s = 0; s < band->times.size(); ++s) {
                table.add_row({cell(band->times[s]), cell(band->band_measure[s]), cell(band->bound[s])});
            }
            table.write(dir / "band_growth.csv", comments);
        }

        const std::vector<double> out_times = config.snapshots.empty() ? w.u.times : config.snapshots;
        for (std::size_t k = 0; k < out_times.size(); ++k) {
            const std::size_t s = nearest_index(w.u.times, out_times[k]);
            char name[32];
            std::snprintf(name, sizeof name, "%04zu.csv", k);
            write_field_csv(dir / (std::string("u_") + name), w.u.fields[s], w.u.times[s], comments);
            write_field_csv(dir / (std::string("chi_") + name), w.chi[s].field(), w.u.times[s], comments);
        }

        log << "simulate: " << w.u.size() << " snapshots, levels";
        for (const auto& l : w.levels) log << " [eps=" << l.eps << " it=" << l.iterations << " res=" << l.residual << ']';
        log << "\nmax residual " << max_residual << ", max sandwich violation " << max_sandwich
            << ", positivity(delta=" << config.diagnostics.delta << ") " << (positive ? "holds" : "fails")
            << "\noutput: " << dir.string() << '\n';

        if (!w.converged) return static_cast<int>(kExitNonConvergence);
        const bool ok = max_residual <= 2.0 * fp.tolerance && max_sandwich == 0.0;
        return static_cast<int>(ok ? kExitPass : kExitPropertyFailure);
    });
}

int run_counterexample(const ExperimentConfig& config, const RunOptions& options) {
    return guarded(options, [&] {
        std::ostream& log = log_of(options);
        const GridSpec& grid = config.grid;
        if (grid.dimension != 1) throw ConfigError("counterexample: the grid must be one-dimensional");
        const std::filesystem::path dir = output_directory(config, options);
        std::filesystem::create_directories(dir);

        std::vector<CounterexampleSolution> solutions;
        for (const auto& g : config.gammas) solutions.emplace_back(g);

        bool all_passed = true;
        CsvTable summary({"gamma", "sup_error", "sandwich_violation", "consistency_error", "l1_residual", "passed"});
        for (std::size_t i = 0; i < solutions.size(); ++i) {
            const CounterexampleVerification v = verify_weak_solution(solutions[i], grid, config.engine.cfl);
            const double l1 = l1_stability_residual(v.solution);
            Derived d;
            d.M = solutions[i].speed_bound();
            d.L = 0.0;
            d.eta_hat = INFINITY;
            for (const auto& s : v.solution.diagnostics) d.eta_hat = std::min(d.eta_hat, s.gradient_margin);
            std::vector<std::string> comments = header(config, options, d);
            comments.push_back("gamma=" + solutions[i].gamma().describe());

            CsvTable report({"t", "x1", "y_gamma", "front_measure", "zero_set_measure", "sup_error_numeric_vs_closed",
                             "sandwich_violations"});
            for (const auto& r : v.rows) {
                report.add_row({cell(r.t), cell(r.x1), cell(r.y_gamma), cell(r.front_measure),
                                cell(r.zero_set_measure), cell(r.sup_error), cell(r.sandwich_violation)});
            }
            report.write(dir / ("gamma_" + std::to_string(i)) / "counterexample_report.csv", comments);
            summary.add_row({solutions[i].gamma().describe(), cell(v.sup_error), cell(v.sandwich_violation),
                             cell(v.consistency_error), cell(l1), cell(v.passed())});
            all_passed = all_passed && v.passed();
            log << "gamma " << solutions[i].gamma().describe() << ": sup error " << v.sup_error << " (2h = "
                << 2 * grid.h << "), sandwich violation " << v.sandwich_violation << ", consistency "
                << v.consistency_error << ", l1 residual " << l1 << (v.passed() ? "  PASS" : "  FAIL") << '\n';
        }

        Derived overall;
        overall.M = 0.0;
        for (const auto& s : solutions) overall.M = std::max(overall.M, s.speed_bound());
        const std::vector<std::string> comments = header(config, options, overall);
        summary.write(dir / "summary.csv", comments);

        CsvTable gaps({"gamma_a", "gamma_b", "t", "gap", "closed_form"});
        bool gap_ok = true;
        for (std::size_t a = 0; a < solutions.size(); ++a) {
            for (std::size_t b = a + 1; b < solutions.size(); ++b) {
                for (double t : {1.0, 1.25, 1.5, 1.75, 2.0}) {
                    const double gap = nonuniqueness_gap(solutions[a], solutions[b], t, grid);
                    const double closed = 2.0 * std::abs(solutions[a].y()(t) - solutions[b].y()(t));
                    gaps.add_row({solutions[a].gamma().describe(), solutions[b].gamma().describe(), cell(t),
                                  cell(gap), cell(closed)});
                    const bool extreme_pair = (is_constant(solutions[a].gamma(), 0.0) && is_constant(solutions[b].gamma(), 1.0)) ||
                                              (is_constant(solutions[a].gamma(), 1.0) && is_constant(solutions[b].gamma(), 0.0));
                    if (t == 2.0 && extreme_pair) {
                        gap_ok = gap_ok && gap >= 1.0;
                        log << "nonuniqueness gap at t=2: " << gap << " (closed form " << closed << ")\n";
                    }
                }
            }
        }
        gaps.write(dir / "nonuniqueness_gap.csv", comments);
        log << "output: " << dir.string() << '\n';
        return static_cast<int>(all_passed && gap_ok ? kExitPass : kExitPropertyFailure);
    });
}

int run_verify(const ExperimentConfig& config, const RunOptions& options) {
    return guarded(options, [&] {
        std::ostream& log = log_of(options);
        const std::vector<std::string> selection =
            config.verify.batteries_given ? config.verify.batteries : battery_names();
        if (selection.empty()) throw ConfigError("verify: empty battery selection");
        for (const auto& name : selection) {
            if (std::find(battery_names().begin(), battery_names().end(), name) == battery_names().end()) {
                throw ConfigError("verify: unknown battery '" + name + "'");
            }
        }
        BatteryOptions bo;
        bo.seed = options.seed.value_or(config.seed);
        bo.samples = config.verify.samples;
        bo.upwinding = config.verify.inject_fault == "flip_upwind" ? Upwinding::flipped : Upwinding::godunov;

        CsvTable table({"battery", "module", "op", "passed", "detail"});
        bool ok = true;
        for (const auto& name : selection) {
            const BatteryResult r = run_battery(name, bo);
            ok = ok && r.passed;
            std::string detail = r.detail;
            std::replace(detail.begin(), detail.end(), ',', ';');
            table.add_row({r.name, r.module, r.op, cell(r.passed), detail});
            log << (r.passed ? "PASS " : "FAIL ") << r.module << '.' << r.op << " [" << r.name << "] " << r.detail
                << '\n';
        }
        const std::filesystem::path dir = output_directory(config, options);
        table.write(dir / "verify_report.csv", header(config, options, Derived{}));
        return static_cast<int>(ok ? kExitPass : kExitPropertyFailure);
    });
}

double expanding_circle_radius(const Kernel& kernel, const ExternalVelocity& c1, double r0, double t,
                               int dimension) {
    if (!(r0 > 0.0)) throw PreconditionError("expanding_circle_radius: r0 must be positive");
    const double support = kernel.support_radius();
    // Nonlocal mass seen by the front point r e1.
    auto mass = [&](double r, double s) {
        if (support <= 0.0) return 0.0;
        const int panels = 2000;
        const double top = dimension == 1 ? std::min(support, 2.0 * r) : support;
        const double step = top / panels;
        auto f = [&](double rho) {
            const double c = kernel({rho, 0.0}, s);
            if (dimension == 1) return c;
            return c * rho * 2.0 * std::acos(std::min(1.0, rho / (2.0 * r)));
        };
        double acc = f(0.0) + f(top);
        for (int k = 1; k < panels; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(k * step);
        return acc * step / 3.0;
    };
    auto rhs = [&](double s, double r) { return c1({0.0, 0.0}, s) + mass(r, s); };
    const int n = std::max(200, static_cast<int>(std::ceil(t / 1e-3)));
    const double dt = t / n;
    double r = r0;
    for (int k = 0; k < n; ++k) {
        const double s = k * dt;
        const double k1 = rhs(s, r);
        const double k2 = rhs(s + dt / 2, r + dt / 2 * k1);
        const double k3 = rhs(s + dt / 2, r + dt / 2 * k2);
        const double k4 = rhs(s + dt, r + dt * k3);
        r += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return r;
}

double fitted_rate(const std::vector<double>& h, const std::vector<double>& error) {
    if (h.size() != error.size() || h.size() < 2) throw PreconditionError("fitted_rate: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double x = std::log(h[k]);
        const double y = std::log(std::max(error[k], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int run_convergence(const ExperimentConfig& config, std::vector<double> grids, const RunOptions& options) {
    return guarded(options, [&] {
        std::ostream& log = log_of(options);
        if (grids.empty()) grids = config.convergence.grids;
        if (grids.size() < 3) throw ConfigError("convergence: at least three grid levels are required");
        std::sort(grids.begin(), grids.end(), std::greater<>());
        for (double h : grids) {
            if (!(h > 0.0)) throw ConfigError("convergence: grid spacings must be positive");
        }

        std::vector<double> errors;
        const std::string& experiment = config.convergence.experiment;
        if (experiment == "counterexample") {
            const CounterexampleSolution solution(config.convergence.gamma);
            for (double h : grids) {
                const GridSpec g = config.grid_at(h);
                if (g.dimension != 1) throw ConfigError("convergence: the counterexample is one-dimensional");
                errors.push_back(verify_weak_solution(solution, g, config.engine.cfl).sup_error);
                log << "h=" << h << " sup error " << errors.back() << '\n';
            }
        } else {
            if (config.u0.type != "ball" && config.u0.type != "hat") {
                throw ConfigError("convergence: expanding_circle needs a ball initial condition");
            }
            const double r0 = config.u0.type == "hat" ? 1.0 : config.u0.radius;
            for (double c : config.u0.center) {
                if (c != 0.0 && config.u0.type == "ball") throw ConfigError("convergence: the ball must be centred at 0");
            }
            for (double h : grids) {
                const GridSpec g = config.grid_at(h);
                const NonlocalProblem p = config.problem(g);
                if (!p.c1.space_independent()) throw ConfigError("convergence: c1 must be space-independent");
                check_finite_speed_box(p);
                const WeakSolution w = continuation(p, config.engine.build(h));
                std::vector<double> at = config.snapshots;
                at.push_back(config.horizon);
                double err = 0.0;
                for (double t : at) {
                    if (t <= 0.0) continue;
                    const std::size_t s = nearest_index(w.u.times, t);
                    const double r = expanding_circle_radius(p.kernel, p.c1, r0, w.u.times[s], g.dimension);
                    err = std::max(err, front_radius_error(w.u.fields[s], r));
                }
                errors.push_back(err);
                log << "h=" << h << " front radius error " << err << '\n';
            }
        }

        const double rate = fitted_rate(grids, errors);
        bool monotone = true;
        for (std::size_t k = 1; k < errors.size(); ++k) monotone = monotone && errors[k] < errors[k - 1];

        Derived d;
        std::vector<std::string> comments = header(config, options, d);
        comments.push_back("experiment=" + experiment);
        comments.push_back("rate=" + cell(rate));
        CsvTable table({"h", "error", "error_over_h"});
        for (std::size_t k = 0; k < grids.size(); ++k) {
            table.add_row({cell(grids[k]), cell(errors[k]), cell(errors[k] / grids[k])});
        }
        const std::filesystem::path dir = output_directory(config, options);
        table.write(dir / "convergence.csv", comments);
        log << "fitted rate " << rate << (monotone ? "" : " (errors do not decrease monotonically)") << '\n';
        return static_cast<int>(monotone && rate >= 0.8 ? kExitPass : kExitPropertyFailure);
    });
}

}  // namespace nle
