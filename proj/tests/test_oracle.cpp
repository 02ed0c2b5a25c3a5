#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#ifdef CAVBATH_HAVE_EIGEN
#include <Eigen/Dense>
#endif

#include "cavbath/oracle.hpp"
#include "test_configs.hpp"

using namespace cavbath;
namespace pi = std::numbers;

namespace {

OracleSystem random_symmetric(int dim, unsigned seed) {
    // fills only what diagonalize needs; not an arrowhead
    OracleSystem sys;
    sys.n_modes = dim - 1;
    sys.potential.assign(static_cast<size_t>(dim) * dim, 0.0);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) {
            double x = uni(rng);
            sys.potential[static_cast<size_t>(j) * dim + i] = x;
            sys.potential[static_cast<size_t>(i) * dim + j] = x;
        }
    return sys;
}

double max_orthogonality_defect(const OracleEigen& eig) {
    int n = eig.dim();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += eig.t(i, a) * eig.t(i, b);
            worst = std::max(worst, std::fabs(dot - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

} // namespace

TEST_CASE("build_system constructs the renormalized arrowhead") {
    PhysicalConfig cfg = testcfg::two_mode_toy();
    OracleSystem sys = build_system(cfg, 1);
    CHECK(sys.dim() == 2);
    CHECK(sys.v(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sys.v(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sys.v(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(sys.v(1, 0) == sys.v(0, 1));
    CHECK(sys.counterterm == doctest::Approx(0.25).epsilon(1e-14));

    SUBCASE("counterterm vanishes with the coupling") {
        PhysicalConfig weak = cfg;
        weak.g = 1e-30;
        CHECK(build_system(weak, 5).counterterm < 1e-25);
    }
    SUBCASE("counterterm grows linearly in N at fixed eta") {
        double c1 = build_system(cfg, 100).counterterm;
        double c2 = build_system(cfg, 200).counterterm;
        CHECK(c2 == doctest::Approx(2.0 * c1).epsilon(1e-13));
    }
    SUBCASE("ohmic couplings are eta times the mode frequency") {
        OracleSystem big = build_system(cfg, 7);
        for (int k = 1; k <= 7; ++k)
            CHECK(big.couplings[k - 1] ==
                  doctest::Approx(big.eta * big.bath_freqs[k - 1]).epsilon(1e-15));
    }
}

TEST_CASE("make_system rejects degenerate bath frequencies") {
    CHECK_THROWS_AS(make_system({1.0, 1.0}, 2.0, {0.1, 0.2}), Error);
    CHECK_THROWS_AS(make_system({1.0, 2.0}, 2.0, {0.1}), LengthMismatch);
}

TEST_CASE("jacobi on the 2x2 toy system") {
    OracleEigen eig = diagonalize(build_system(testcfg::two_mode_toy(), 1));
    REQUIRE(eig.dim() == 2);
    CHECK(eig.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.5).epsilon(1e-14));
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(eig.t(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-13));
    CHECK(eig.t(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-13));
    CHECK(eig.t(0, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-13));
    CHECK(eig.t(1, 1) == doctest::Approx(-inv_sqrt2).epsilon(1e-13));
}

TEST_CASE("jacobi leaves diagonal systems untouched") {
    OracleSystem sys = make_system({2.0, 3.0, 0.5}, 5.0, {0.0, 0.0, 0.0});
    OracleEigen eig = diagonalize(sys);
    CHECK(eig.eigenvalues == std::vector<double>{0.25, 4.0, 5.0, 9.0});
    // eigenvalue r comes from diagonal slot source[r]; all entries exact
    int source[4] = {3, 1, 0, 2};
    for (int r = 0; r < 4; ++r)
        for (int mu = 0; mu < 4; ++mu)
            CHECK(eig.t(mu, r) == (mu == source[r] ? 1.0 : 0.0));
}

TEST_CASE("jacobi reconstructs random symmetric matrices") {
    OracleSystem sys = random_symmetric(5, 1234);
    OracleEigen eig = diagonalize(sys);
    CHECK(max_orthogonality_defect(eig) < 1e-13);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            double rebuilt = 0.0;
            for (int r = 0; r < 5; ++r)
                rebuilt += eig.t(i, r) * eig.eigenvalues[r] * eig.t(j, r);
            CHECK(rebuilt == doctest::Approx(sys.v(i, j)).epsilon(1e-10).scale(1.0));
        }
    for (int r = 0; r + 1 < 5; ++r) CHECK(eig.eigenvalues[r] <= eig.eigenvalues[r + 1]);
}

#ifdef CAVBATH_HAVE_EIGEN
TEST_CASE("jacobi eigenvalues match an independent dense solver") {
    OracleSystem sys = random_symmetric(50, 99);
    OracleEigen eig = diagonalize(sys);
    Eigen::MatrixXd m(50, 50);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) m(i, j) = sys.v(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(m);
    for (int r = 0; r < 50; ++r)
        CHECK(eig.eigenvalues[r] == doctest::Approx(ref.eigenvalues()[r]).epsilon(1e-11));
}
#endif

TEST_CASE("eigenvalues interlace the bath frequencies") {
    PhysicalConfig cfg = testcfg::unit_grid(0.3, 0.37, 50);
    OracleEigen eig = diagonalize(build_system(cfg, 50));
    CHECK(eig.eigenvalues[0] < 1.0);
    for (int k = 1; k < 50; ++k) {
        CHECK(eig.eigenvalues[k] > static_cast<double>(k) * k);
        CHECK(eig.eigenvalues[k] < static_cast<double>(k + 1) * (k + 1));
    }
    CHECK(eig.eigenvalues[50] > 2500.0);
}

TEST_CASE("secular condition verification") {
    SUBCASE("toy system satisfies it exactly") {
        OracleSystem sys = build_system(testcfg::two_mode_toy(), 1);
        OracleEigen eig = diagonalize(sys);
        SecularCheck check = verify_secular(eig, sys);
        CHECK(check.max_residual < 1e-13);
        CHECK(check.skipped_terms == 0);
    }
    SUBCASE("decoupled system") {
        OracleSystem sys = make_system({1.0, 2.0}, 9.0, {0.0, 0.0});
        OracleEigen eig = diagonalize(sys);
        CHECK(verify_secular(eig, sys).max_residual == 0.0);
    }
    SUBCASE("moderate ohmic system") {
        PhysicalConfig cfg = testcfg::unit_grid(1e-2, 0.37, 100);
        OracleSystem sys = build_system(cfg, 100);
        OracleEigen eig = diagonalize(sys);
        SecularCheck check = verify_secular(eig, sys);
        CHECK(check.max_residual <= 1e-8);
        CHECK(check.skipped_terms == 0);
    }
}

TEST_CASE("matrix-element verification against the resolvent form") {
    SUBCASE("toy system: t_0^r = 1/sqrt(2) both ways") {
        OracleSystem sys = build_system(testcfg::two_mode_toy(), 1);
        OracleEigen eig = diagonalize(sys);
        CHECK(verify_tkr(eig, sys).max_deviation < 1e-13);
    }
    SUBCASE("decoupled system reports skips, no deviation") {
        OracleSystem sys = make_system({1.0, 2.0}, 9.0, {0.0, 0.0});
        OracleEigen eig = diagonalize(sys);
        // particle column reproduces (1,0,0); bath columns sit on exact
        // resonances and are skipped
        TkrCheck check = verify_tkr(eig, sys);
        CHECK(check.max_deviation == 0.0);
        CHECK(check.skipped_entries == 6);
        CHECK(eig.t(0, 2) == 1.0);  // omega0^2 = 9 sorts last
        CHECK(eig.t(0, 0) == 0.0);
        CHECK(eig.t(0, 1) == 0.0);
    }
    SUBCASE("moderate ohmic system") {
        PhysicalConfig cfg = testcfg::unit_grid(1e-2, 0.37, 100);
        OracleSystem sys = build_system(cfg, 100);
        OracleEigen eig = diagonalize(sys);
        TkrCheck check = verify_tkr(eig, sys);
        CHECK(check.max_deviation <= 1e-8);
        CHECK(check.skipped_entries == 0);
    }
}

TEST_CASE("oracle survival probability") {
    OracleEigen eig = diagonalize(build_system(testcfg::two_mode_toy(), 1));
    SUBCASE("t = 0 is exactly one") {
        SurvivalPoint p = survival_oracle(0.0, eig);
        CHECK(p.probability == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.unitarity == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("two-mode cosine beat with certificate") {
        double gap = std::sqrt(1.5) - std::sqrt(0.5);
        for (int i = 0; i < 100; ++i) {
            double t = 0.21 * i;
            SurvivalPoint p = survival_oracle(t, eig);
            CHECK(p.probability ==
                  doctest::Approx(0.5 * (1.0 + std::cos(gap * t))).epsilon(1e-12));
            CHECK(p.unitarity == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("pipeline comparison") {
    SUBCASE("decoupling limit: pipelines converge together as g -> 0") {
        // the lowest paper-convention root carries a delta/(2 pi omega_bar)
        // offset, so absolute agreement improves linearly in delta down to
        // the pole-guard floor; bath modes agree to ~1e-12 already
        std::vector<double> t_grid{0.0, 1.0, 5.0};
        double prev = 1e300;
        for (double delta : {1e-4, 1e-5, 1e-6}) {
            PhysicalConfig cfg = testcfg::unit_grid(delta, 0.5, 100);
            PipelineComparison cmp = compare_pipelines(cfg, 100, t_grid);
            CHECK(cmp.paper.max_freq_dev < prev);
            prev = cmp.paper.max_freq_dev;
            CHECK(cmp.worst_unitarity_error <= 1e-12);
            if (delta == 1e-6) {
                CHECK(cmp.paper.max_freq_dev <= 2e-7);
                CHECK(cmp.paper.argmax_mode == 0);
                CHECK(cmp.paper.max_survival_dev <= 1e-5);
            }
        }
    }
    SUBCASE("report carries both conventions and a verdict") {
        PhysicalConfig cfg = testcfg::unit_grid(1e-3, 0.25, 60);
        std::vector<double> t_grid{0.0, 2.0};
        PipelineComparison cmp = compare_pipelines(cfg, 60, t_grid);
        CHECK(cmp.omega_paper.size() == 61);
        CHECK(cmp.omega_derived.size() == 61);
        CHECK(cmp.omega_oracle.size() == 61);
        CHECK(cmp.paper.convention == SecularConvention::Paper);
        CHECK(cmp.derived.convention == SecularConvention::Derived);
        bool verdict_recorded = cmp.better_match == SecularConvention::Paper ||
                                cmp.better_match == SecularConvention::Derived;
        CHECK(verdict_recorded);
        // weights from either convention stay bounded
        CHECK(cmp.paper.max_weight_dev < 0.1);
        CHECK(cmp.derived.max_weight_dev < 0.1);
    }
    SUBCASE("oracle must cover the closed-form modes") {
        PhysicalConfig cfg = testcfg::unit_grid(1e-3, 0.25, 60);
        CHECK_THROWS_AS(compare_pipelines(cfg, 10, {}), Error);
    }
}

TEST_CASE("row of squared particle elements sums to one") {
    PhysicalConfig cfg = testcfg::unit_grid(5e-3, 0.25, 150);
    OracleEigen eig = diagonalize(build_system(cfg, 150));
    double sum = 0.0;
    for (int r = 0; r < eig.dim(); ++r) sum += eig.t(0, r) * eig.t(0, r);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_orthogonality_defect(eig) < 1e-10);

    // rows are orthonormal too (T T' = I)
    int n = eig.dim();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            double dot = 0.0;
            for (int r = 0; r < n; ++r) dot += eig.t(a, r) * eig.t(b, r);
            worst = std::max(worst, std::fabs(dot - (a == b ? 1.0 : 0.0)));
        }
    CHECK(worst < 1e-10);
}
