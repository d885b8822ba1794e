#pragma once

// Property batteries behind `nle verify`.

#include <cstdint>
#include <string>
#include <vector>

#include "nle/eikonal.hpp"

namespace nle {

struct BatteryOptions {
    std::uint64_t seed = 1;
    int samples = 200;
    /// Upwinding used by every solve inside the batteries; `flipped` is a fault injection.
    Upwinding upwinding = Upwinding::godunov;
};

struct BatteryResult {
    std::string name;
    std::string module;
    std::string op;
    bool passed = false;
    std::string detail;
};

/// monotone_step, oleinik_lax_equivalence, convolution_bruteforce,
/// inclusion_preservation, band_growth, gradient_margin_persistence.
const std::vector<std::string>& battery_names();

/// Throws ConfigError for an unknown name. Exceptions inside a battery count as failures.
BatteryResult run_battery(const std::string& name, const BatteryOptions& options);

}  // namespace nle
