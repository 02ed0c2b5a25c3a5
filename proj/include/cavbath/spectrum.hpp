// spectrum.hpp — collective eigenfrequencies of the confined particle+bath system
//
// The eigenfrequencies solve the closed-form secular equation
//
//     cot(LΩ/2c) = Ω/(πg) + (c/LΩ)(1 − ω̄²L/(πgc))
//
// which circulates in two inequivalent conventions (see SecularConvention).
// Every root Ω_k, k ≥ 1, sits strictly between consecutive poles of the
// cotangent, i.e. Ω_k = Δω(k + ε_k) with 0 < ε_k < 1; Ω_0 lies below the
// first pole.

#pragma once

#include <utility>
#include <vector>

#include "cavbath/model.hpp"

namespace cavbath {

// Paper: the quoted form of the equation above.  Derived: the variant
// obtained by re-deriving the closed form from the mode sum, which amounts
// to g -> 2g.  The two disagree; the finite-N oracle reports which one it
// matches.
enum class SecularConvention { Paper, Derived };

enum class SpectrumMethod { Exact, SmallLApprox };

struct Spectrum {
    std::vector<double> roots;      // Ω_0 < Ω_1 < ... < Ω_K  [rad/s]
    std::vector<double> residuals;  // |secular residual| at each root
    std::vector<std::pair<double, double>> brackets;  // isolation interval per root
    SpectrumMethod method = SpectrumMethod::Exact;
    SecularConvention convention = SecularConvention::Paper;
};

// Dimensionless residual cot(LΩ/2c) − RHS(Ω).  Throws PoleProximity when Ω
// is within the pole guard of an asymptote.
double secular_residual(double omega, const PhysicalConfig& cfg,
                        SecularConvention conv = SecularConvention::Paper);

// Bracketed bisection (one root per asymptote interval) refined by a
// derivative-free secant step.  Evaluation happens in long double in the
// bracket-local variable ε: near a pole the residual slope is ~π/sin²(πε),
// so double-precision evaluation of the stored root cannot reach tight
// residual tolerances at large k.
Spectrum solve_spectrum(const PhysicalConfig& cfg, int mode_count,
                        SecularConvention conv = SecularConvention::Paper);

// Small-L approximate spectrum: Ω_0 from lowest_mode_smallL, Ω_k from the
// linearized offsets epsilon_k.
Spectrum approx_spectrum(const PhysicalConfig& cfg, int mode_count);

// Linearized fractional offset ε_k = 4πgcLk / (2(4π²c²k² − ω̄²L²)), k ≥ 1.
double epsilon_k(const PhysicalConfig& cfg, int k);

// Ω_0 ≈ ω̄/√(1 + πδ), valid for cavities far below the validity bound.
double lowest_mode_smallL(const PhysicalConfig& cfg);

struct ValidityBound {
    double factor;            // f in L ≪ f·(2c/g)
    double length_bound;      // f·(2c/g)  [m]
    double coherence_length;  // 2c/g      [m]
};
ValidityBound smallL_validity_bound(const PhysicalConfig& cfg);

// Σ_{k=1..N} 1/(k²−u²) against its closed form 1/(2u²) − (π/2u)cot(πu),
// reported together for convergence diagnostics.
struct CotSumResult {
    double partial_sum;
    double closed_form;
};
CotSumResult cot_sum_identity(double u, long long terms);

} // namespace cavbath
