#include "cavbath/evolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cavbath {

namespace {
constexpr double kPi = std::numbers::pi;

void check_lengths(const Spectrum& spectrum, const CouplingWeights& weights) {
    if (spectrum.roots.size() != weights.wk.size() + 1)
        throw LengthMismatch("spectrum and weights describe different mode counts");
}
} // namespace

std::complex<double> amplitude_f00(double t, const Spectrum& spectrum,
                                   const CouplingWeights& weights) {
    check_lengths(spectrum, weights);
    double re = 0.0, im = 0.0;
    for (size_t k = weights.wk.size(); k-- > 0;) {  // ascending weights into the sums
        double phase = spectrum.roots[k + 1] * t;
        re += weights.wk[k] * std::cos(phase);
        im -= weights.wk[k] * std::sin(phase);
    }
    double phase0 = spectrum.roots[0] * t;
    re += weights.w0 * std::cos(phase0);
    im -= weights.w0 * std::sin(phase0);
    return {re, im};
}

double survival_probability(double t, const Spectrum& spectrum,
                            const CouplingWeights& weights) {
    return std::norm(amplitude_f00(t, spectrum, weights));
}

double survival_probability_expanded(double t, const Spectrum& spectrum,
                                     const CouplingWeights& weights) {
    check_lengths(spectrum, weights);
    const size_t n = weights.wk.size();
    double p = weights.w0 * weights.w0;
    for (size_t k = 0; k < n; ++k)
        p += 2.0 * weights.w0 * weights.wk[k] *
             std::cos((spectrum.roots[k + 1] - spectrum.roots[0]) * t);
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l)
            p += weights.wk[k] * weights.wk[l] *
                 std::cos((spectrum.roots[k + 1] - spectrum.roots[l + 1]) * t);
    return p;
}

CosineSeries CosineSeries::weak(const PhysicalConfig& cfg, int mode_count) {
    if (mode_count < 1) throw Error("mode_count must be >= 1");
    double delta = delta_of(cfg);
    if (1.0 - kPi * delta < 0.0)
        throw DeltaTooLarge("delta > 1/pi: weak-coupling series coefficients turn unphysical");
    CosineSeries s;
    s.c0 = 1.0 - kPi * delta + kPi * kPi * delta * delta;
    s.c1 = 4.0 * (delta / kPi - delta * delta);
    s.c2 = (4.0 / (kPi * kPi)) * delta * delta;
    s.omega0 = lowest_mode_smallL(cfg);
    double dw = mode_spacing(cfg);
    s.omega.reserve(static_cast<size_t>(mode_count));
    for (int k = 1; k <= mode_count; ++k)
        s.omega.push_back(dw * (k + epsilon_k(cfg, k)));
    s.slack = 2.0 * (2.0 * delta / kPi) / static_cast<double>(mode_count);
    return s;
}

CosineSeries CosineSeries::strong(const PhysicalConfig& cfg, int mode_count) {
    if (mode_count < 1) throw Error("mode_count must be >= 1");
    double delta = delta_of(cfg);
    double a = 2.0 / (2.0 + kPi * delta);
    CosineSeries s;
    s.c0 = a * a;
    s.c1 = a * (2.0 * delta / kPi);
    s.c2 = (4.0 / (kPi * kPi)) * delta * delta;
    s.omega0 = cfg.omega_bar;  // the lowest mode pins to ω̄ at strong coupling
    double dw = mode_spacing(cfg);
    s.omega.reserve(static_cast<size_t>(mode_count));
    for (int k = 1; k <= mode_count; ++k)
        s.omega.push_back(dw * (k + epsilon_k(cfg, k)));
    s.slack = 2.0 * (2.0 * delta / kPi) / static_cast<double>(mode_count);
    return s;
}

double CosineSeries::at(double t) const {
    // Σ_k cos((Ω_k−Ω_0)t)/k² and the double sum as |Σ_k e^{−iΩ_k t}/k²|²
    double sr = 0.0, si = 0.0;
    for (size_t i = omega.size(); i-- > 0;) {
        double inv = 1.0 / (static_cast<double>(i + 1) * static_cast<double>(i + 1));
        double phase = omega[i] * t;
        sr += inv * std::cos(phase);
        si += inv * std::sin(phase);
    }
    double cross = std::cos(omega0 * t) * sr + std::sin(omega0 * t) * si;
    return c0 + c1 * cross + c2 * (sr * sr + si * si);
}

double CosineSeries::at_expanded(double t) const {
    const size_t n = omega.size();
    double p = c0;
    for (size_t k = 0; k < n; ++k)
        p += c1 * std::cos((omega[k] - omega0) * t) / (static_cast<double>(k + 1) * (k + 1));
    for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l)
            p += c2 * std::cos((omega[k] - omega[l]) * t) /
                 (static_cast<double>(k + 1) * (k + 1) * static_cast<double>(l + 1) * (l + 1));
    return p;
}

double survival_weak_series(double t, const PhysicalConfig& cfg, int mode_count) {
    return CosineSeries::weak(cfg, mode_count).at(t);
}

double survival_strong_series(double t, const PhysicalConfig& cfg, int mode_count) {
    return CosineSeries::strong(cfg, mode_count).at(t);
}

BoundValue min_weak(double delta) {
    if (delta < 0.0) throw NegativeDelta("delta must be non-negative");
    BoundValue b;
    b.value = 1.0 - (5.0 * kPi / 3.0) * delta + (14.0 * kPi * kPi / 9.0) * delta * delta;
    b.out_of_physical_range = delta > 15.0 / (28.0 * kPi);
    return b;
}

double min_strong(double delta) {
    if (delta < 0.0) throw NegativeDelta("delta must be non-negative");
    double a = 2.0 / (2.0 + kPi * delta);
    return a * a - a * (kPi * delta / 3.0) - kPi * kPi * delta * delta / 9.0;
}

DeltaMax delta_max_strong() {
    DeltaMax d;
    d.closed_form = (-1.0 + std::sqrt(-2.0 + 3.0 * std::sqrt(5.0))) / kPi;
    double lo = 0.0, hi = 1.0;  // min_strong(0) = 1 > 0 > min_strong(1)
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (!(lo < mid && mid < hi)) break;
        (min_strong(mid) > 0.0 ? lo : hi) = mid;
    }
    d.bisection_root = 0.5 * (lo + hi);
    if (std::fabs(d.bisection_root - d.closed_form) > 1e-10)
        throw Error("strong-coupling threshold: bisection and closed form disagree");
    return d;
}

std::vector<ScanRow> scan_min(CouplingRegime regime, double delta_lo, double delta_hi,
                              int steps, const PhysicalConfig* cfg) {
    if (!(delta_lo >= 0.0) || !(delta_lo < delta_hi)) throw Error("need 0 <= delta_lo < delta_hi");
    if (steps < 2) throw Error("need at least 2 scan steps");
    std::vector<ScanRow> rows;
    rows.reserve(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        double delta = (i == steps - 1)
                           ? delta_hi
                           : delta_lo + (delta_hi - delta_lo) * i / static_cast<double>(steps - 1);
        ScanRow row;
        row.delta = delta;
        row.min_bound = regime == CouplingRegime::Weak ? min_weak(delta).value : min_strong(delta);
        row.length_equivalent = cfg ? 2.0 * cfg->light_speed_c * delta / cfg->g
                                    : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    return rows;
}

SurvivalSeries evolve_series(const PhysicalConfig& cfg, SeriesRegime regime,
                             double t_max, int steps, SecularConvention conv) {
    if (steps < 2) throw Error("need at least 2 time samples");
    if (t_max < 0.0) t_max = 50.0 * cfg.cavity_L / cfg.light_speed_c;
    SurvivalSeries out;
    out.regime = regime;
    out.times.reserve(static_cast<size_t>(steps));
    for (int i = 0; i < steps; ++i)
        out.times.push_back(t_max * i / static_cast<double>(steps - 1));

    double delta = delta_of(cfg);
    out.probabilities.reserve(static_cast<size_t>(steps));
    switch (regime) {
        case SeriesRegime::ExactSeries: {
            Spectrum spectrum = solve_spectrum(cfg, cfg.mode_count, conv);
            CouplingWeights weights = weights_exact(spectrum, cfg);
            for (double t : out.times)
                out.probabilities.push_back(survival_probability(t, spectrum, weights));
            out.series_slack = 2.0 * weights.tail_bound;
            out.lower_bound = regime_of(cfg) == CouplingRegime::Weak ? min_weak(delta).value
                                                                     : min_strong(delta);
            break;
        }
        case SeriesRegime::WeakApprox: {
            CosineSeries series = CosineSeries::weak(cfg, cfg.mode_count);
            for (double t : out.times) out.probabilities.push_back(series.at(t));
            out.series_slack = series.slack;
            out.lower_bound = min_weak(delta).value;
            break;
        }
        case SeriesRegime::StrongApprox: {
            CosineSeries series = CosineSeries::strong(cfg, cfg.mode_count);
            for (double t : out.times) out.probabilities.push_back(series.at(t));
            out.series_slack = series.slack;
            out.lower_bound = min_strong(delta);
            break;
        }
    }
    return out;
}

} // namespace cavbath
