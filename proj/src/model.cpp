#include "cavbath/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cavbath/spectrum.hpp"

namespace cavbath {

namespace {
constexpr double kPi = std::numbers::pi;
}

ValidationError::ValidationError(std::vector<std::string> violations_)
    : Error([&violations_] {
          std::ostringstream msg;
          msg << "invalid configuration:";
          for (const auto& v : violations_) msg << " [" << v << "]";
          return msg.str();
      }()),
      violations(std::move(violations_)) {}

PhysicalConfig validate_config(const PhysicalConfig& raw,
                               std::vector<std::string>* warnings) {
    std::vector<std::string> violations;
    auto require_positive = [&](double value, const char* name) {
        if (!(value > 0.0) || !std::isfinite(value))
            violations.push_back(std::string("non-positive parameter ") + name);
    };
    require_positive(raw.omega_bar, "omega_bar");
    require_positive(raw.g, "g");
    require_positive(raw.cavity_L, "cavity_L");
    require_positive(raw.light_speed_c, "light_speed_c");
    if (raw.mode_count < 1) violations.push_back("zero mode count");
    if (!(raw.root_tol > 0.0)) violations.push_back("non-positive parameter root_tol");
    if (!violations.empty()) throw ValidationError(std::move(violations));

    double delta = delta_of(raw);
    if (!std::isfinite(delta) || !(delta > 0.0))
        throw ValidationError({"delta = L*g/2c is not finite and positive"});

    if (warnings) {
        ValidityBound bound = smallL_validity_bound(raw);
        if (raw.cavity_L >= bound.length_bound) {
            std::ostringstream w;
            w << "cavity_L = " << raw.cavity_L
              << " m is not small against the validity bound "
              << bound.length_bound << " m; small-L approximations are unreliable";
            warnings->push_back(w.str());
        }
        double ratio = raw.g / raw.omega_bar;
        if (ratio > 1.0 / 3.0 && ratio < 3.0) {
            std::ostringstream w;
            w << "g/omega_bar = " << ratio
              << " sits between the weak and strong asymptotic regimes";
            warnings->push_back(w.str());
        }
    }
    return raw;
}

double delta_of(const PhysicalConfig& cfg) {
    return cfg.cavity_L * cfg.g / (2.0 * cfg.light_speed_c);
}

double mode_spacing(const PhysicalConfig& cfg) {
    return 2.0 * kPi * cfg.light_speed_c / cfg.cavity_L;
}

double mode_frequency(int k, const PhysicalConfig& cfg) {
    if (k < 1) throw Error("bath modes start at k = 1");
    return static_cast<double>(k) * mode_spacing(cfg);
}

double eta_of(const PhysicalConfig& cfg) {
    return std::sqrt(2.0 * cfg.g * mode_spacing(cfg));
}

CouplingRegime regime_of(const PhysicalConfig& cfg) {
    return cfg.g <= cfg.omega_bar ? CouplingRegime::Weak : CouplingRegime::Strong;
}

ModeGrid make_mode_grid(const PhysicalConfig& cfg) {
    ModeGrid grid;
    grid.spacing = mode_spacing(cfg);
    grid.frequencies.reserve(static_cast<size_t>(cfg.mode_count));
    for (int k = 1; k <= cfg.mode_count; ++k)
        grid.frequencies.push_back(static_cast<double>(k) * grid.spacing);
    return grid;
}

} // namespace cavbath
