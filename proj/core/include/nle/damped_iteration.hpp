#pragma once

#include <cstddef>
#include <deque>
#include <vector>

namespace nle {

struct DampingOptions {
    int max_iterations = 200;
    double tolerance = 1e-6;
    double initial_damping = 1.0;
    double min_damping = 1.0 / 1024.0;
    /// Halve the damping when the residual drops by less than this fraction ...
    double stagnation_fraction = 0.01;
    /// ... over this many accepted iterates.
    int stagnation_window = 5;
};

template <class X>
struct DampedResult {
    X value;
    double residual = 0.0;
    int iterations = 0;  // map evaluations
    bool converged = false;
    double damping = 1.0;
    std::vector<double> accepted_residuals;
};

/// Damped fixed-point iteration x <- (1 - theta) x + theta T(x).
/// The residual |T(x) - x| never increases over accepted iterates: a candidate
/// with a larger residual is rejected and theta halved. On convergence the
/// result is T(x) for the last iterate x.
template <class X, class Map, class Distance, class Blend>
DampedResult<X> damped_iteration(X x, Map&& map, Distance&& distance, Blend&& blend,
                                 const DampingOptions& options) {
    DampedResult<X> out;
    out.damping = options.initial_damping;
    X image = map(x);
    out.iterations = 1;
    double residual = distance(image, x);
    out.accepted_residuals.push_back(residual);
    std::deque<double> window{residual};

    while (residual >= options.tolerance && out.iterations < options.max_iterations) {
        X candidate = blend(x, image, out.damping);
        X candidate_image = map(candidate);
        ++out.iterations;
        const double r = distance(candidate_image, candidate);
        if (r > residual) {
            if (out.damping <= options.min_damping) break;
            out.damping *= 0.5;
            continue;
        }
        x = std::move(candidate);
        image = std::move(candidate_image);
        residual = r;
        out.accepted_residuals.push_back(r);
        window.push_back(r);
        if (static_cast<int>(window.size()) > options.stagnation_window) {
            const double old = window.front();
            window.pop_front();
            if (residual > (1.0 - options.stagnation_fraction) * old &&
                out.damping > options.min_damping) {
                out.damping *= 0.5;
                window.assign(1, residual);
            }
        }
    }
    out.converged = residual < options.tolerance;
    out.residual = residual;
    out.value = std::move(image);
    return out;
}

}  // namespace nle
