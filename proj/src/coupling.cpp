#include "cavbath/coupling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cavbath/evolution.hpp"

namespace cavbath {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kResonanceGuard = 1e-12;  // relative to ω_k²
}

double CouplingWeights::sum() const {
    double s = 0.0;
    for (size_t i = wk.size(); i-- > 0;) s += wk[i];  // small terms first
    return s + w0;
}

double t0r_exact(double omega_r, const PhysicalConfig& cfg) {
    if (!(omega_r > 0.0)) throw Error("t0r_exact requires omega_r > 0");
    double eta = eta_of(cfg);
    double w2 = cfg.omega_bar * cfg.omega_bar;
    double o2 = omega_r * omega_r;
    double gap = o2 - w2;
    double radicand = gap * gap + 0.5 * eta * eta * (3.0 * o2 - w2) +
                      kPi * kPi * cfg.g * cfg.g * o2;
    if (!(radicand > 0.0)) {
        std::ostringstream msg;
        msg << "non-positive radicand " << radicand << " at omega_r = " << omega_r
            << " (invalid root or convention mismatch)";
        throw NegativeDiscriminant(msg.str());
    }
    return eta * omega_r / std::sqrt(radicand);
}

double tkr_exact(double omega_r, int k, const PhysicalConfig& cfg, double t0r) {
    double wk = mode_frequency(k, cfg);
    double denom = wk * wk - omega_r * omega_r;
    if (std::fabs(denom) < kResonanceGuard * wk * wk) {
        std::ostringstream msg;
        msg << "omega_" << k << " resonant with Omega_r = " << omega_r;
        throw ResonantDenominator(msg.str());
    }
    return eta_of(cfg) * wk * t0r / denom;
}

CouplingWeights weights_exact(const Spectrum& spectrum, const PhysicalConfig& cfg) {
    if (spectrum.roots.empty()) throw Error("empty spectrum");
    CouplingWeights w;
    w.source = WeightSource::Exact;
    double t00 = t0r_exact(spectrum.roots[0], cfg);
    w.w0 = t00 * t00;
    w.wk.reserve(spectrum.roots.size() - 1);
    for (size_t r = 1; r < spectrum.roots.size(); ++r) {
        double t = t0r_exact(spectrum.roots[r], cfg);
        w.wk.push_back(t * t);
    }
    double k_count = static_cast<double>(w.wk.empty() ? 1 : w.wk.size());
    w.tail_bound = (2.0 * delta_of(cfg) / kPi) / k_count;
    return w;
}

namespace {

std::vector<double> inverse_square_weights(double delta, int mode_count) {
    std::vector<double> wk;
    wk.reserve(static_cast<size_t>(mode_count));
    for (int k = 1; k <= mode_count; ++k)
        wk.push_back(2.0 * delta / (kPi * static_cast<double>(k) * k));
    return wk;
}

} // namespace

CouplingWeights weights_weak(const PhysicalConfig& cfg, int mode_count) {
    if (mode_count < 1) throw Error("mode_count must be >= 1");
    double delta = delta_of(cfg);
    if (1.0 - kPi * delta < 0.0) {
        std::ostringstream msg;
        msg << "delta = " << delta << " > 1/pi makes the weak-coupling w0 negative";
        throw DeltaTooLarge(msg.str());
    }
    CouplingWeights w;
    w.source = WeightSource::WeakApprox;
    w.w0 = 1.0 - kPi * delta;
    w.wk = inverse_square_weights(delta, mode_count);
    w.tail_bound = (2.0 * delta / kPi) / static_cast<double>(mode_count);
    return w;
}

CouplingWeights weights_strong(const PhysicalConfig& cfg, int mode_count) {
    if (mode_count < 1) throw Error("mode_count must be >= 1");
    double delta = delta_of(cfg);
    CouplingWeights w;
    w.source = WeightSource::StrongApprox;
    w.w0 = 1.0 / (1.0 + kPi * delta / 2.0);
    w.wk = inverse_square_weights(delta, mode_count);
    w.tail_bound = (2.0 * delta / kPi) / static_cast<double>(mode_count);
    w.above_delta_max = delta > delta_max_strong().closed_form;
    return w;
}

} // namespace cavbath
