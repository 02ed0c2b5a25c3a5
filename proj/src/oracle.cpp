#include "cavbath/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "cavbath/coupling.hpp"
#include "cavbath/evolution.hpp"

namespace cavbath {

namespace {

constexpr double kOffTarget = 1e-12;     // off-diagonal Frobenius target, relative to ‖V‖_F
constexpr int kMaxSweeps = 100;
constexpr double kResonanceGuard = 1e-12;

} // namespace

OracleSystem make_system(const std::vector<double>& omegas, double omega0_sq,
                         const std::vector<double>& couplings) {
    if (omegas.size() != couplings.size()) throw LengthMismatch("one coupling per bath mode");
    const int n_modes = static_cast<int>(omegas.size());
    for (int i = 0; i < n_modes; ++i)
        for (int j = i + 1; j < n_modes; ++j)
            if (omegas[i] == omegas[j])
                throw Error("degenerate bath frequencies are not allowed");
    OracleSystem sys;
    sys.n_modes = n_modes;
    sys.omega0_sq = omega0_sq;
    sys.bath_freqs = omegas;
    sys.couplings = couplings;
    const int n = n_modes + 1;
    sys.potential.assign(static_cast<size_t>(n) * n, 0.0);
    auto at = [&](int i, int j) -> double& {
        return sys.potential[static_cast<size_t>(j) * n + i];
    };
    at(0, 0) = omega0_sq;
    for (int k = 1; k <= n_modes; ++k) {
        at(k, k) = omegas[k - 1] * omegas[k - 1];
        at(0, k) = at(k, 0) = -couplings[k - 1];
    }
    return sys;
}

OracleSystem build_system(const PhysicalConfig& cfg, int n_modes) {
    if (n_modes < 1) throw Error("need at least one bath mode");
    double eta = eta_of(cfg);
    std::vector<double> omegas, couplings;
    omegas.reserve(static_cast<size_t>(n_modes));
    couplings.reserve(static_cast<size_t>(n_modes));
    for (int k = 1; k <= n_modes; ++k) {
        double wk = mode_frequency(k, cfg);
        omegas.push_back(wk);
        couplings.push_back(eta * wk);  // ohmic
    }
    // δω² = η²N renormalizes the divergent bare frequency so that the
    // counterterm-subtracted secular condition holds exactly at finite N.
    double counterterm = eta * eta * static_cast<double>(n_modes);
    OracleSystem sys =
        make_system(omegas, cfg.omega_bar * cfg.omega_bar + counterterm, couplings);
    sys.counterterm = counterterm;
    sys.eta = eta;
    return sys;
}

namespace {

// One tournament round of disjoint pivot pairs.  Angles are computed from
// the matrix state at round entry; since the pairs are disjoint this equals
// sequential application, and keeps both passes streaming.
struct RoundRotations {
    std::vector<int> p, q;
    std::vector<double> c, s;
    void clear() { p.clear(); q.clear(); c.clear(); s.clear(); }
    size_t size() const { return p.size(); }
};

} // namespace

OracleEigen diagonalize(const OracleSystem& system) {
    const int n = system.dim();
    std::vector<double> a = system.potential;          // working copy, column-major
    std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(j) * n + i]; };

    double norm2 = 0.0;
    for (double x : a) norm2 += x * x;
    const double off_target = kOffTarget * std::sqrt(norm2);
    const double elem_floor = off_target / static_cast<double>(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (int j = 1; j < n; ++j)
            for (int i = 0; i < j; ++i) {
                double x = at(i, j);
                s += 2.0 * x * x;
            }
        return std::sqrt(s);
    };

    // round-robin schedule over m slots (bye slot when n is odd)
    const int m = (n % 2 == 0) ? n : n + 1;
    std::vector<int> ring(static_cast<size_t>(m) - 1);
    std::iota(ring.begin(), ring.end(), 1);

    RoundRotations rot;
    int sweep = 0;
    double off = off_norm();
    for (sweep = 0; off > off_target; ++sweep) {
        if (sweep == kMaxSweeps) {
            std::ostringstream msg;
            msg << "Jacobi did not converge in " << kMaxSweeps << " sweeps; off-norm " << off;
            throw NonConvergence(msg.str());
        }
        for (int round = 0; round < m - 1; ++round) {
            rot.clear();
            auto consider = [&](int x, int y) {
                if (x >= n || y >= n) return;  // bye
                int p = std::min(x, y), q = std::max(x, y);
                double apq = at(p, q);
                if (std::abs(apq) <= elem_floor) return;
                double app = at(p, p), aqq = at(q, q);
                if (std::abs(apq) <= 1e-18 * std::sqrt(std::abs(app) * std::abs(aqq)))
                    return;  // rotation below representable angle
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                rot.p.push_back(p);
                rot.q.push_back(q);
                rot.c.push_back(c);
                rot.s.push_back(t * c);
            };
            consider(0, ring[static_cast<size_t>(m) - 2]);
            for (int i = 0; i + 1 < m - 1 - i; ++i) consider(ring[i], ring[static_cast<size_t>(m) - 3 - i]);

            const size_t nrot = rot.size();
            if (nrot != 0) {
                // A <- A·J and V <- V·J: column pairs, contiguous
                for (size_t r = 0; r < nrot; ++r) {
                    const double c = rot.c[r], s = rot.s[r];
                    double* ap = &a[static_cast<size_t>(rot.p[r]) * n];
                    double* aq = &a[static_cast<size_t>(rot.q[r]) * n];
                    for (int i = 0; i < n; ++i) {
                        double x = ap[i], y = aq[i];
                        ap[i] = c * x - s * y;
                        aq[i] = s * x + c * y;
                    }
                    double* vp = &v[static_cast<size_t>(rot.p[r]) * n];
                    double* vq = &v[static_cast<size_t>(rot.q[r]) * n];
                    for (int i = 0; i < n; ++i) {
                        double x = vp[i], y = vq[i];
                        vp[i] = c * x - s * y;
                        vq[i] = s * x + c * y;
                    }
                }
                // A <- Jᵀ·A: row pairs, applied column-by-column in cache
                for (int j = 0; j < n; ++j) {
                    double* col = &a[static_cast<size_t>(j) * n];
                    for (size_t r = 0; r < nrot; ++r) {
                        const double c = rot.c[r], s = rot.s[r];
                        double x = col[rot.p[r]], y = col[rot.q[r]];
                        col[rot.p[r]] = c * x - s * y;
                        col[rot.q[r]] = s * x + c * y;
                    }
                }
                for (size_t r = 0; r < nrot; ++r) {
                    at(rot.p[r], rot.q[r]) = 0.0;
                    at(rot.q[r], rot.p[r]) = 0.0;
                }
            }
            std::rotate(ring.begin(), ring.end() - 1, ring.end());
        }
        off = off_norm();
    }

    // sort ascending, fix signs
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return at(x, x) < at(y, y); });

    OracleEigen eig;
    eig.sweeps = sweep;
    eig.off_norm = off;
    eig.eigenvalues.reserve(static_cast<size_t>(n));
    eig.vectors.assign(static_cast<size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r) {
        int src = order[r];
        eig.eigenvalues.push_back(at(src, src));
        const double* vc = &v[static_cast<size_t>(src) * n];
        double lead = vc[0];
        if (lead == 0.0)
            for (int i = 1; i < n; ++i)
                if (vc[i] != 0.0) { lead = vc[i]; break; }
        double sign = lead < 0.0 ? -1.0 : 1.0;
        double* dst = &eig.vectors[static_cast<size_t>(r) * n];
        for (int i = 0; i < n; ++i) dst[i] = sign * vc[i];
    }
    return eig;
}

SecularCheck verify_secular(const OracleEigen& eigen, const OracleSystem& system) {
    const int n_modes = system.n_modes;
    SecularCheck check;
    for (int r = 0; r < eigen.dim(); ++r) {
        double lambda = eigen.eigenvalues[r];
        double sum = 0.0;
        for (int k = 0; k < n_modes; ++k) {
            double wk2 = system.bath_freqs[k] * system.bath_freqs[k];
            double gap = wk2 - lambda;
            if (std::abs(gap) < kResonanceGuard * wk2) {
                ++check.skipped_terms;
                continue;
            }
            sum += system.couplings[k] * system.couplings[k] / gap;
        }
        // Φ(λ)·(t_0^r)² is the particle-row residual of (V−λ)v for the
        // resolvent-reconstructed eigenvector; normalizing by λ makes it
        // dimensionless and vanishes for modes decoupled from the particle.
        double t0 = eigen.t(0, r);
        double phi = system.omega0_sq - lambda - sum;
        double residual = lambda != 0.0 ? std::abs(phi) * t0 * t0 / std::abs(lambda)
                                        : std::abs(phi) * t0 * t0;
        check.max_residual = std::max(check.max_residual, residual);
    }
    return check;
}

TkrCheck verify_tkr(const OracleEigen& eigen, const OracleSystem& system) {
    const int n_modes = system.n_modes;
    TkrCheck check;
    std::vector<double> rebuilt(static_cast<size_t>(n_modes) + 1);
    for (int r = 0; r < eigen.dim(); ++r) {
        double lambda = eigen.eigenvalues[r];
        double norm = 1.0;
        bool usable = true;
        for (int k = 0; k < n_modes; ++k) {
            double wk2 = system.bath_freqs[k] * system.bath_freqs[k];
            double gap = wk2 - lambda;
            if (std::abs(gap) < kResonanceGuard * wk2) {
                usable = false;
                break;
            }
            double ratio = system.couplings[k] / gap;
            rebuilt[static_cast<size_t>(k) + 1] = ratio;
            norm += ratio * ratio;
        }
        if (!usable) {
            check.skipped_entries += n_modes + 1;
            continue;
        }
        double t0 = 1.0 / std::sqrt(norm);
        double sign = eigen.t(0, r) < 0.0 ? -1.0 : 1.0;  // match the oracle's sign fix
        rebuilt[0] = sign * t0;
        for (int k = 1; k <= n_modes; ++k) rebuilt[static_cast<size_t>(k)] *= rebuilt[0];
        for (int mu = 0; mu <= n_modes; ++mu)
            check.max_deviation =
                std::max(check.max_deviation, std::abs(rebuilt[static_cast<size_t>(mu)] - eigen.t(mu, r)));
    }
    return check;
}

SurvivalPoint survival_oracle(double t, const OracleEigen& eigen) {
    const int n = eigen.dim();
    std::complex<double> amplitude{0.0, 0.0};
    std::vector<double> ur(static_cast<size_t>(n)), ui(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) {
        double omega = std::sqrt(eigen.eigenvalues[r]);
        double t0 = eigen.t(0, r);
        double cr = std::cos(omega * t), sr = -std::sin(omega * t);
        ur[static_cast<size_t>(r)] = t0 * cr;
        ui[static_cast<size_t>(r)] = t0 * sr;
        amplitude += std::complex<double>(t0 * t0 * cr, t0 * t0 * sr);
    }
    // unitarity certificate ‖T u‖², u_r = t_0^r e^{−iΩ_r t}
    double total = 0.0;
    for (int mu = 0; mu < n; ++mu) {
        double fr = 0.0, fi = 0.0;
        for (int r = 0; r < n; ++r) {
            double trm = eigen.t(mu, r);
            fr += trm * ur[static_cast<size_t>(r)];
            fi += trm * ui[static_cast<size_t>(r)];
        }
        total += fr * fr + fi * fi;
    }
    return {std::norm(amplitude), total};
}

PipelineComparison compare_pipelines(const PhysicalConfig& cfg, int n_modes,
                                     const std::vector<double>& t_grid) {
    if (n_modes < cfg.mode_count)
        throw Error("oracle must cover at least the closed-form mode count");
    OracleSystem system = build_system(cfg, n_modes);
    OracleEigen eigen = diagonalize(system);

    PipelineComparison cmp;
    cmp.n_modes = n_modes;
    cmp.omega_oracle.reserve(static_cast<size_t>(eigen.dim()));
    cmp.t0r_sq_oracle.reserve(static_cast<size_t>(eigen.dim()));
    for (int r = 0; r < eigen.dim(); ++r) {
        cmp.omega_oracle.push_back(std::sqrt(eigen.eigenvalues[r]));
        double t0 = eigen.t(0, r);
        cmp.t0r_sq_oracle.push_back(t0 * t0);
    }

    auto against = [&](SecularConvention conv, std::vector<double>& omega_out) {
        ConventionDeviation dev;
        dev.convention = conv;
        Spectrum spectrum = solve_spectrum(cfg, n_modes, conv);
        CouplingWeights weights = weights_exact(spectrum, cfg);
        omega_out = spectrum.roots;
        for (int r = 0; r < eigen.dim(); ++r) {
            double d = std::abs(spectrum.roots[static_cast<size_t>(r)] - cmp.omega_oracle[static_cast<size_t>(r)]);
            if (d > dev.max_freq_dev) {
                dev.max_freq_dev = d;
                dev.argmax_mode = r;
            }
            double w_closed = r == 0 ? weights.w0 : weights.wk[static_cast<size_t>(r) - 1];
            dev.max_weight_dev =
                std::max(dev.max_weight_dev, std::abs(w_closed - cmp.t0r_sq_oracle[static_cast<size_t>(r)]));
        }
        for (double t : t_grid) {
            SurvivalPoint point = survival_oracle(t, eigen);
            double closed = survival_probability(t, spectrum, weights);
            dev.max_survival_dev = std::max(dev.max_survival_dev, std::abs(closed - point.probability));
            cmp.worst_unitarity_error =
                std::max(cmp.worst_unitarity_error, std::abs(point.unitarity - 1.0));
        }
        return dev;
    };
    cmp.paper = against(SecularConvention::Paper, cmp.omega_paper);
    cmp.derived = against(SecularConvention::Derived, cmp.omega_derived);
    cmp.better_match = cmp.paper.max_freq_dev <= cmp.derived.max_freq_dev
                           ? SecularConvention::Paper
                           : SecularConvention::Derived;
    return cmp;
}

} // namespace cavbath
