// oracle.hpp — finite-N matrix oracle for the closed-form pipeline
//
// Builds the (N+1)×(N+1) potential matrix of the particle+bath quadratic
// form with the ohmic counterterm δω² = η²N, diagonalizes it with cyclic
// Jacobi rotations, and cross-checks the secular condition, the matrix
// elements and the survival probability independently of the closed-form
// route.

#pragma once

#include <vector>

#include "cavbath/model.hpp"
#include "cavbath/spectrum.hpp"

namespace cavbath {

struct OracleSystem {
    int n_modes = 0;                 // N
    std::vector<double> potential;   // (N+1)² column-major symmetric V
    double counterterm = 0.0;        // δω² = η²N [rad²/s²]
    double omega0_sq = 0.0;          // bare ω₀² = ω̄² + δω²
    std::vector<double> bath_freqs;  // ω_k, k = 1..N
    std::vector<double> couplings;   // c_k = η ω_k
    double eta = 0.0;

    int dim() const { return n_modes + 1; }
    double v(int i, int j) const { return potential[static_cast<size_t>(j) * dim() + i]; }
};

// V₀₀ = ω̄² + δω², V_kk = ω_k², V₀k = −c_k on the uniform cavity grid.
OracleSystem build_system(const PhysicalConfig& cfg, int n_modes);

// Generic arrowhead system from explicit frequencies/couplings (test rigs,
// toy systems).  Bath frequencies must be distinct.
OracleSystem make_system(const std::vector<double>& omegas, double omega0_sq,
                         const std::vector<double>& couplings);

struct OracleEigen {
    std::vector<double> eigenvalues;   // Ω_r², ascending
    std::vector<double> vectors;       // (N+1)² column-major, column r = eigenvector
    int sweeps = 0;
    double off_norm = 0.0;             // Frobenius off-diagonal norm at exit

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    double t(int mu, int r) const { return vectors[static_cast<size_t>(r) * dim() + mu]; }
};

// Cyclic Jacobi (tournament pivot order, threshold skipping) until the
// off-diagonal Frobenius norm falls below 1e-12·‖V‖_F; at most 100 sweeps,
// then NonConvergence.  Eigenpairs are sorted ascending, signs fixed by
// t_0^r ≥ 0 (first nonzero component positive on ties).  Orthogonality of
// the returned matrix holds to machine precision by construction.
OracleEigen diagonalize(const OracleSystem& system);

// max_r |ω₀² − Ω_r² − Σ_k c_k²/(ω_k²−Ω_r²)| / (Ω_r²·|Φ'(Ω_r²)|), the
// relative Newton correction of the secular condition; terms within the
// resonance guard are skipped and counted.
struct SecularCheck {
    double max_residual = 0.0;
    int skipped_terms = 0;
};
SecularCheck verify_secular(const OracleEigen& eigen, const OracleSystem& system);

// Rebuilds every eigenvector column from the resolvent form
// t_k^r = c_k/(ω_k²−Ω_r²)·t_0^r, t_0^r = [1 + Σ c_k²/(ω_k²−Ω_r²)²]^{−1/2}
// and returns the worst entrywise deviation from the Jacobi vectors.
struct TkrCheck {
    double max_deviation = 0.0;
    int skipped_entries = 0;
};
TkrCheck verify_tkr(const OracleEigen& eigen, const OracleSystem& system);

// |Σ_r (t_0^r)² e^{−iΩ_r t}|² plus the unitarity certificate Σ_ν |f⁰ᵛ(t)|²
// (computed as ‖T u‖², exactly 1 for orthonormal T).
struct SurvivalPoint {
    double probability;
    double unitarity;
};
SurvivalPoint survival_oracle(double t, const OracleEigen& eigen);

struct ConventionDeviation {
    SecularConvention convention;
    double max_freq_dev = 0.0;      // max_r |Ω_r^oracle − Ω_r^closed|
    int argmax_mode = 0;
    double max_weight_dev = 0.0;    // vs (t_0^r)² from the closed form
    double max_survival_dev = 0.0;  // over the supplied time grid
};

struct PipelineComparison {
    int n_modes = 0;
    ConventionDeviation paper;
    ConventionDeviation derived;
    SecularConvention better_match = SecularConvention::Paper;
    double worst_unitarity_error = 0.0;
    // per-mode table: Ω_r from the oracle and both closed-form conventions
    std::vector<double> omega_oracle;
    std::vector<double> omega_paper;
    std::vector<double> omega_derived;
    std::vector<double> t0r_sq_oracle;
};

// Runs the oracle and both closed-form conventions over the shared modes
// and reports the deviations; the better-matching convention is recorded,
// not asserted.
PipelineComparison compare_pipelines(const PhysicalConfig& cfg, int n_modes,
                                     const std::vector<double>& t_grid);

} // namespace cavbath
