// evolution.hpp — dressed-particle amplitude, survival probability and bounds
//
// The excited dressed particle evolves with amplitude
// f⁰⁰(t) = Σ_r (t_0^r)² e^{−iΩ_r t}; |f⁰⁰(t)|² is the probability that it is
// still excited at time t.  The small-L weak/strong closed forms reduce to
// cosine series over 1/k² weights whose double sums collapse to |Σ_k z_k|²,
// evaluated at O(K) cost.

#pragma once

#include <complex>
#include <vector>

#include "cavbath/coupling.hpp"
#include "cavbath/model.hpp"
#include "cavbath/spectrum.hpp"

namespace cavbath {

enum class SeriesRegime { ExactSeries, WeakApprox, StrongApprox };

struct SurvivalSeries {
    std::vector<double> times;          // [s]
    std::vector<double> probabilities;  // |f⁰⁰(t)|²
    double lower_bound = 0.0;           // Min(δ) of the applicable regime
    SeriesRegime regime = SeriesRegime::ExactSeries;
    double series_slack = 0.0;          // truncation allowance, 2·tail(K)
};

// Σ_r w_r e^{−iΩ_r t}.  Spectrum and weights must have matching lengths.
std::complex<double> amplitude_f00(double t, const Spectrum& spectrum,
                                   const CouplingWeights& weights);

// |f⁰⁰(t)|².  The expanded variant evaluates the cosine double series
// (w0² + 2Σ w0 wk cos(Ω_k−Ω_0)t + ΣΣ wk wl cos(Ω_k−Ω_l)t) at O(K²) for
// cross-checking the algebra.
double survival_probability(double t, const Spectrum& spectrum,
                            const CouplingWeights& weights);
double survival_probability_expanded(double t, const Spectrum& spectrum,
                                     const CouplingWeights& weights);

// c0 + c1 Σ_k cos((Ω_k−Ω_0)t)/k² + c2 Σ_{k,l} cos((Ω_k−Ω_l)t)/(k²l²),
// with the frequencies taken from the small-L approximations.  Formally
// substituting −1 for every cosine (Σ 1/k² → ζ(2), double sum → ζ(2)²)
// reproduces the closed-form lower bound of the regime.
struct CosineSeries {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double omega0 = 0.0;        // Ω_0 [rad/s]
    std::vector<double> omega;  // Ω_k, k = 1..K
    double slack = 0.0;         // 2·tail(K)

    static CosineSeries weak(const PhysicalConfig& cfg, int mode_count);
    static CosineSeries strong(const PhysicalConfig& cfg, int mode_count);

    double at(double t) const;           // O(K)
    double at_expanded(double t) const;  // O(K²), cross-check path
};

double survival_weak_series(double t, const PhysicalConfig& cfg, int mode_count);
double survival_strong_series(double t, const PhysicalConfig& cfg, int mode_count);

// Min(δ) = 1 − (5π/3)δ + (14π²/9)δ².  The parabola is physically meaningful
// only for δ ≤ 15/(28π); beyond that the flag is set.
struct BoundValue {
    double value;
    bool out_of_physical_range;
};
BoundValue min_weak(double delta);

// Min(δ) = (2/(2+πδ))² − (2/(2+πδ))(πδ/3) − π²δ²/9.  Negative values are
// returned as-is; they mark the unphysical region past δ_max.
double min_strong(double delta);

// Positivity threshold of the strong-coupling bound: closed form
// (−1 + √(−2+3√5))/π together with an independent bisection root of
// min_strong; the two agree to 1e-10.
struct DeltaMax {
    double closed_form;
    double bisection_root;
};
DeltaMax delta_max_strong();

struct ScanRow {
    double delta;
    double min_bound;
    double length_equivalent;  // L = 2cδ/g [m], NaN without a config
};
std::vector<ScanRow> scan_min(CouplingRegime regime, double delta_lo, double delta_hi,
                              int steps, const PhysicalConfig* cfg = nullptr);

// Samples |f⁰⁰(t)|² on a uniform grid; regime selects the exact pipeline or
// one of the small-L series.
SurvivalSeries evolve_series(const PhysicalConfig& cfg, SeriesRegime regime,
                             double t_max, int steps,
                             SecularConvention conv = SecularConvention::Paper);

} // namespace cavbath
