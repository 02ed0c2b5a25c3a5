// coupling.hpp — principal-axis transformation weights (t_0^r)²

#pragma once

#include <vector>

#include "cavbath/model.hpp"
#include "cavbath/spectrum.hpp"

namespace cavbath {

enum class WeightSource { Exact, WeakApprox, StrongApprox };

// Squared matrix elements (t_0^r)² that feed the survival series.
// For the exact source the sum w0 + Σwk approaches 1 from below, missing
// the ζ(2) tail of the truncated modes, tail(K) = (2δ/π)/K; the small-L
// approximate sources carry an O(δ) normalization defect of their own.
struct CouplingWeights {
    double w0 = 0.0;          // (t_0^0)²
    std::vector<double> wk;   // (t_0^k)², k = 1..K
    WeightSource source = WeightSource::Exact;
    double tail_bound = 0.0;  // (2δ/π)/K
    bool above_delta_max = false;  // strong source only: δ exceeded the positivity threshold

    double sum() const;
};

// Exact element t_0^r = ηΩ_r / √((Ω_r²−ω̄²)² + (η²/2)(3Ω_r²−ω̄²) + π²g²Ω_r²).
// Throws NegativeDiscriminant when the radicand is not positive (an invalid
// root or a convention mismatch).
double t0r_exact(double omega_r, const PhysicalConfig& cfg);

// t_k^r = ηω_k t_0^r / (ω_k² − Ω_r²).  Throws ResonantDenominator when
// ω_k² − Ω_r² is below the relative guard; near-resonant elements t_k^k are
// expected casualties of the small-L approximation and are excluded from
// the approximate pipelines rather than patched.
double tkr_exact(double omega_r, int k, const PhysicalConfig& cfg, double t0r);

CouplingWeights weights_exact(const Spectrum& spectrum, const PhysicalConfig& cfg);

// w0 = 1 − πδ, wk = 2δ/(πk²).  Throws DeltaTooLarge when 1 − πδ < 0.
CouplingWeights weights_weak(const PhysicalConfig& cfg, int mode_count);

// w0 = 1/(1 + πδ/2), wk = 2δ/(πk²); flags δ > δ_max instead of failing.
CouplingWeights weights_strong(const PhysicalConfig& cfg, int mode_count);

} // namespace cavbath
