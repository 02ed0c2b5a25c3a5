#include "cavbath/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace cavbath {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Fractional distance to the nearest cotangent pole below which evaluation
// is refused, in units of the bracket width Δω.
constexpr long double kPoleGuard = 1e-9L;

constexpr int kMaxBisect = 200;

// RHS(Ω) = A·Ω + B/Ω with B = c/L − A·ω̄²; A carries the convention
// (1/πg as printed, 1/2πg re-derived).
struct SecularForm {
    long double dw;  // Δω
    long double a;
    long double b;

    static SecularForm make(const PhysicalConfig& cfg, SecularConvention conv) {
        SecularForm f;
        long double g = cfg.g;
        long double wbar = cfg.omega_bar;
        long double c_over_l = static_cast<long double>(cfg.light_speed_c) / cfg.cavity_L;
        f.dw = 2.0L * kPiL * c_over_l;
        f.a = (conv == SecularConvention::Paper) ? 1.0L / (kPiL * g) : 1.0L / (2.0L * kPiL * g);
        f.b = c_over_l - f.a * wbar * wbar;
        return f;
    }

    // Residual at Ω = Δω(k+ε); the cotangent argument reduces exactly to πε.
    long double at(long double k, long double eps) const {
        long double omega = dw * (k + eps);
        long double x = kPiL * eps;
        return std::cos(x) / std::sin(x) - a * omega - b / omega;
    }
};

struct BracketRoot {
    long double eps;
    long double residual;
};

// One sign change per asymptote interval: bisection on ε ∈ (guard, 1−guard)
// followed by a derivative-free secant polish.
BracketRoot solve_bracket(const SecularForm& f, int k, double tol) {
    long double lo = kPoleGuard, hi = 1.0L - kPoleGuard;
    long double flo = f.at(k, lo), fhi = f.at(k, hi);
    if (!(flo > 0.0L) || !(fhi < 0.0L)) {
        std::ostringstream msg;
        msg << "no sign change in bracket " << k << ": f(" << static_cast<double>(f.dw * (k + lo))
            << ") = " << static_cast<double>(flo) << ", f(" << static_cast<double>(f.dw * (k + hi))
            << ") = " << static_cast<double>(fhi);
        throw BracketFailure(k, static_cast<double>(f.dw * (k + lo)),
                             static_cast<double>(f.dw * (k + hi)), static_cast<double>(flo),
                             static_cast<double>(fhi));
    }
    long double best = lo, fbest = flo;
    if (std::fabs(fhi) < std::fabs(fbest)) { best = hi; fbest = fhi; }
    for (int it = 0; it < kMaxBisect; ++it) {
        long double mid = 0.5L * (lo + hi);
        if (!(lo < mid && mid < hi)) break;  // ulp floor reached
        long double fm = f.at(k, mid);
        if (std::fabs(fm) < std::fabs(fbest)) { best = mid; fbest = fm; }
        if (std::fabs(fm) <= 0.5L * tol) break;
        if (fm > 0.0L) { lo = mid; flo = fm; } else { hi = mid; fhi = fm; }
    }
    // secant step through the final bracket endpoints
    long double denom = fhi - flo;
    if (denom != 0.0L) {
        long double x = hi - fhi * (hi - lo) / denom;
        if (x > lo && x < hi) {
            long double fx = f.at(k, x);
            if (std::fabs(fx) < std::fabs(fbest)) { best = x; fbest = fx; }
        }
    }
    return {best, fbest};
}

} // namespace

BracketFailure::BracketFailure(int bracket_, double lo, double hi, double f_lo, double f_hi)
    : Error([&] {
          std::ostringstream msg;
          msg << "no sign change of the secular residual in bracket " << bracket_ << ": f("
              << lo << ") = " << f_lo << ", f(" << hi << ") = " << f_hi;
          return msg.str();
      }()),
      bracket(bracket_) {}

ConvergenceFailure::ConvergenceFailure(int bracket_, double residual)
    : Error([&] {
          std::ostringstream msg;
          msg << "root in bracket " << bracket_ << " did not converge; residual " << residual;
          return msg.str();
      }()),
      bracket(bracket_) {}

double secular_residual(double omega, const PhysicalConfig& cfg, SecularConvention conv) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw Error("secular residual requires omega > 0");
    SecularForm f = SecularForm::make(cfg, conv);
    long double u = omega / f.dw;
    long double k = std::floor(u);
    long double frac = u - k;
    if (std::min(frac, 1.0L - frac) < kPoleGuard)
        throw PoleProximity("omega within the pole guard of a cotangent asymptote");
    return static_cast<double>(f.at(k, frac));
}

Spectrum solve_spectrum(const PhysicalConfig& cfg, int mode_count, SecularConvention conv) {
    if (mode_count < 0) throw Error("mode_count must be non-negative");
    SecularForm f = SecularForm::make(cfg, conv);
    Spectrum spec;
    spec.method = SpectrumMethod::Exact;
    spec.convention = conv;
    spec.roots.reserve(static_cast<size_t>(mode_count) + 1);
    spec.residuals.reserve(static_cast<size_t>(mode_count) + 1);
    spec.brackets.reserve(static_cast<size_t>(mode_count) + 1);
    double dw = static_cast<double>(f.dw);
    for (int k = 0; k <= mode_count; ++k) {
        BracketRoot root = solve_bracket(f, k, cfg.root_tol);
        double residual = static_cast<double>(std::fabs(root.residual));
        if (residual > cfg.root_tol) throw ConvergenceFailure(k, residual);
        spec.roots.push_back(static_cast<double>(f.dw * (k + root.eps)));
        spec.residuals.push_back(residual);
        spec.brackets.emplace_back(k * dw, (k + 1) * dw);
    }
    return spec;
}

Spectrum approx_spectrum(const PhysicalConfig& cfg, int mode_count) {
    if (mode_count < 0) throw Error("mode_count must be non-negative");
    Spectrum spec;
    spec.method = SpectrumMethod::SmallLApprox;
    spec.convention = SecularConvention::Paper;
    double dw = mode_spacing(cfg);
    auto residual_or_nan = [&](double omega) {
        try {
            return std::fabs(secular_residual(omega, cfg));
        } catch (const PoleProximity&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    double omega0 = lowest_mode_smallL(cfg);
    spec.roots.push_back(omega0);
    spec.residuals.push_back(residual_or_nan(omega0));
    spec.brackets.emplace_back(0.0, dw);
    for (int k = 1; k <= mode_count; ++k) {
        double omega = dw * (k + epsilon_k(cfg, k));
        spec.roots.push_back(omega);
        spec.residuals.push_back(residual_or_nan(omega));
        spec.brackets.emplace_back(k * dw, (k + 1) * dw);
    }
    return spec;
}

double epsilon_k(const PhysicalConfig& cfg, int k) {
    if (k < 1) throw Error("epsilon_k is defined for k >= 1");
    double c = cfg.light_speed_c, l = cfg.cavity_L;
    double scale = 4.0 * kPi * kPi * c * c * static_cast<double>(k) * k;
    double denom = scale - cfg.omega_bar * cfg.omega_bar * l * l;
    if (std::fabs(denom) < 1e-9 * scale)
        throw ResonantDenominator("bath mode k resonant with omega_bar in the linearized offset");
    return 4.0 * kPi * cfg.g * c * l * k / (2.0 * denom);
}

double lowest_mode_smallL(const PhysicalConfig& cfg) {
    return cfg.omega_bar / std::sqrt(1.0 + kPi * delta_of(cfg));
}

ValidityBound smallL_validity_bound(const PhysicalConfig& cfg) {
    double r = cfg.g / cfg.omega_bar;
    ValidityBound b;
    b.factor = (kPi / 2.0) * r * r * (1.0 + std::sqrt(1.0 + (4.0 / (kPi * kPi)) / (r * r)));
    b.coherence_length = 2.0 * cfg.light_speed_c / cfg.g;
    b.length_bound = b.factor * b.coherence_length;
    return b;
}

CotSumResult cot_sum_identity(double u, long long terms) {
    if (u == 0.0 || u == std::nearbyint(u))
        throw IntegerU("the pair-sum identity requires a non-integer u");
    if (terms < 1) throw Error("at least one term required");
    long double u2 = static_cast<long double>(u) * u;
    long double sum = 0.0L;
    for (long long k = terms; k >= 1; --k) {  // ascending magnitudes into the accumulator
        long double kk = static_cast<long double>(k);
        sum += 1.0L / (kk * kk - u2);
    }
    long double x = kPiL * static_cast<long double>(u);
    long double closed = 1.0L / (2.0L * u2) -
                         (kPiL / (2.0L * static_cast<long double>(u))) * (std::cos(x) / std::sin(x));
    return {static_cast<double>(sum), static_cast<double>(closed)};
}

} // namespace cavbath
