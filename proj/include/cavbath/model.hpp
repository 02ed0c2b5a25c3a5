// model.hpp — physical configuration, cavity mode grid and coupling constants
//
// Units are SI throughout: frequencies in rad/s, lengths in m, times in s.
// The bath is ohmic, c_k = η ω_k with η = √(2 g Δω), on the uniform cavity
// grid ω_k = 2πkc/L.  The dimensionless cavity parameter is δ = Lg/2c.

#pragma once

#include <string>
#include <vector>

#include "cavbath/errors.hpp"

namespace cavbath {

struct PhysicalConfig {
    double omega_bar = 0.0;               // renormalized particle frequency [rad/s]
    double g = 0.0;                       // ohmic coupling strength [rad/s]
    double cavity_L = 0.0;                // cavity diameter [m]
    double light_speed_c = 2.99792458e8;  // propagation speed [m/s]
    int mode_count = 10000;               // bath truncation K
    double root_tol = 1e-10;              // secular residual tolerance (dimensionless)
};

enum class CouplingRegime { Weak, Strong };

// Uniform bath grid ω_k = k·Δω, k = 1..K, Δω = 2πc/L.
struct ModeGrid {
    double spacing = 0.0;
    std::vector<double> frequencies;
};

// Checks every constraint and reports all violations together.  Non-fatal
// advisories (cavity larger than the small-L validity bound, coupling near
// the weak/strong borderline) are appended to *warnings when given.
PhysicalConfig validate_config(const PhysicalConfig& raw,
                               std::vector<std::string>* warnings = nullptr);

double delta_of(const PhysicalConfig& cfg);        // L·g/(2c)
double mode_spacing(const PhysicalConfig& cfg);    // Δω = 2πc/L
double mode_frequency(int k, const PhysicalConfig& cfg);  // 2πkc/L, k ≥ 1
double eta_of(const PhysicalConfig& cfg);          // √(2 g Δω)

// Weak when g ≤ ω̄, strong when g > ω̄.
CouplingRegime regime_of(const PhysicalConfig& cfg);

ModeGrid make_mode_grid(const PhysicalConfig& cfg);

} // namespace cavbath
