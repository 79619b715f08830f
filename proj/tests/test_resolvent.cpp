#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "polyloc/disorder.hpp"
#include "polyloc/errors.hpp"
#include "polyloc/hamiltonian.hpp"
#include "polyloc/resolvent.hpp"
#include "polyloc/spectral.hpp"

using namespace polyloc;

namespace {

// 3-site kernel matrix with zero potential, coupling 1, exponent 2
HamMatrix three_site_kernel() {
    const Cube c(Site::origin(1), 1);
    Eigen::MatrixXd m(3, 3);
    m << 0.0, 1.0, 0.25, 1.0, 0.0, 1.0, 0.25, 1.0, 0.0;
    return HamMatrix{c, 1.0, HoppingSpec{2.0, 1}, nullptr, m};
}

}  // namespace

TEST_CASE("resolvent of a one-site system is the scalar inverse") {
    const Cube c(Site::origin(1), 0);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 4);
    const HamMatrix H = assemble_hamiltonian(c, 1.0, real, HoppingSpec{2.0, 1});
    const double v = real->stored(Site({0}));
    const GreenMatrix G = green_function(H, 5.0);
    CHECK(G.entries(0, 0) == doctest::Approx(1.0 / (v - 5.0)).epsilon(1e-14));
    CHECK(G.asymmetry == 0.0);
}

TEST_CASE("resolvent entries match the closed form on the smallest kernel") {
    const HamMatrix H = three_site_kernel();
    const GreenMatrix G = green_function(H, 3.0);
    CHECK(G.entries(0, 0) == doctest::Approx(-0.39384615384615385).epsilon(1e-12));
    CHECK(G.entries(0, 1) == doctest::Approx(-0.16).epsilon(1e-12));
    CHECK(G.entries(0, 2) == doctest::Approx(-0.086153846153846154).epsilon(1e-12));
    CHECK(G.entries(1, 1) == doctest::Approx(-0.44).epsilon(1e-12));
    CHECK(G.condition_estimate > 0.0);
}

TEST_CASE("energy on the spectrum raises the singular-resolvent error") {
    const HamMatrix H = three_site_kernel();
    // (1, 0, -1) is an exact eigenvector with eigenvalue -1/4
    CHECK_THROWS_AS(green_function(H, -0.25), SingularResolventError);

    const Cube c(Site::origin(1), 3);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 8);
    const HamMatrix Hd = assemble_hamiltonian(c, kLambdaDiagonal, real, HoppingSpec{3.0, 1});
    CHECK_THROWS_AS(green_function(Hd, real->stored(Site({2}))), SingularResolventError);
}

TEST_CASE("resolvent agrees with an independent column solve") {
    const Cube c(Site::origin(1), 10);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 21);
    const HamMatrix H = assemble_hamiltonian(c, 2.0, real, HoppingSpec{3.0, 1});
    const double E = 4.0;  // beyond the spectral radius bound
    const GreenMatrix G = green_function(H, E);

    Eigen::MatrixXd A = H.mat;
    A.diagonal().array() -= E;
    const auto qr = A.colPivHouseholderQr();
    double worst = 0.0;
    for (int j = 0; j < H.size(); ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(H.size());
        e[j] = 1.0;
        const Eigen::VectorXd col = qr.solve(e);
        worst = std::max(worst, (G.entries.col(j) - col).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
    CHECK((G.entries - G.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(G.asymmetry < 1e-10);
    CHECK((A * G.entries - Eigen::MatrixXd::Identity(H.size(), H.size())).cwiseAbs().maxCoeff() <
          1e-8);
}

TEST_CASE("displacement norm of a one-by-one matrix ignores the order") {
    Eigen::MatrixXd m(1, 1);
    m << -0.7;
    const std::vector<Site> x = {Site({0})};
    for (double s : {0.0, 1.7, 6.0})
        CHECK(sobolev_matrix_norm(m, x, x, s) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("displacement norm of the two-site identity is one at every order") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    const std::vector<Site> x = {Site({0}), Site({1})};
    for (double s : {0.0, 0.75, 3.0, 10.0})
        CHECK(sobolev_matrix_norm(m, x, x, s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("displacement norm weights a lone off-diagonal entry by its distance") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 1) = -0.3;  // displacement 0 - 3 = -3
    const std::vector<Site> x = {Site({0}), Site({3})};
    for (double s : {0.0, 1.0, 2.5})
        CHECK(sobolev_matrix_norm(m, x, x, s) ==
              doctest::Approx(0.3 * std::pow(3.0, s)).epsilon(1e-12));
}

TEST_CASE("displacement norm sums squared shell suprema") {
    // diagonal shell sup 0.5, distance-2 shell carries 2^2 + 1^2
    Eigen::MatrixXd m(2, 2);
    m << 0.5, 2.0, -1.0, -0.25;
    const std::vector<Site> x = {Site({0}), Site({2})};
    CHECK(sobolev_matrix_norm(m, x, x, 1.0) == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(sobolev_matrix_norm(m, x, x, 0.0) == doctest::Approx(std::sqrt(5.25)).epsilon(1e-12));
    // c0 rescales the squared norm
    CHECK(sobolev_matrix_norm(m, x, x, 1.0, 4.0) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("displacement norm is nondecreasing in the order") {
    const Cube c(Site::origin(1), 6);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 31);
    const HamMatrix H = assemble_hamiltonian(c, 1.5, real, HoppingSpec{3.0, 1});
    const GreenMatrix G = green_function(H, 5.0);
    const SobolevProfile prof(G.entries, c.sites(), c.sites());
    double prev = 0.0;
    for (double s = 0.0; s <= 8.0; s += 0.25) {
        const double cur = prof.norm(s);
        CHECK(cur >= prev - 1e-13);
        prev = cur;
    }
}

TEST_CASE("endpoint classification agrees with a dense order grid") {
    const Params P = desk_params(1, 8.0);
    int goods = 0, bads = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double lambda = trial % 2 == 0 ? 50.0 : 1.5;
        const Cube c(Site::origin(1), 4);
        auto real =
            sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 1000 + trial);
        const HamMatrix H = assemble_hamiltonian(c, lambda, real, HoppingSpec{8.0, 1});
        const double E = -1.2 + 2.4 * trial / 49.0;
        const CubeVerdict v = classify_cube(H, E, P);
        (v.good ? goods : bads)++;

        bool grid_good = true;
        try {
            const GreenMatrix G = green_function(H, E);
            const SobolevProfile prof(G.entries, c.sites(), c.sites());
            const double logL = std::log(4.0);
            for (int i = 0; i < 20; ++i) {
                const double s = P.s0 + (P.r1 - P.s0) * i / 19.0;
                if (std::log(prof.norm(s)) > (P.tau_prime + P.delta * s) * logL) {
                    grid_good = false;
                    break;
                }
            }
        } catch (const SingularResolventError&) {
            grid_good = false;
        }
        CHECK(v.good == grid_good);
        CHECK(v.good == (v.margin_s0 <= 0.0 && v.margin_r1 <= 0.0));
    }
    // the sample is only informative if both verdicts occur
    CHECK(goods > 0);
    CHECK(bads > 0);
}

TEST_CASE("diagonal system with energy far from the potential is good") {
    const Params P = desk_params(1, 8.0);
    const Cube c(Site::origin(1), 4);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 2);
    const HamMatrix H = assemble_hamiltonian(c, kLambdaDiagonal, real, HoppingSpec{8.0, 1});
    const CubeVerdict v = classify_cube(H, 3.0, P);
    CHECK(v.good);
    CHECK(v.margin_s0 <= 0.0);
    CHECK(v.margin_r1 <= 0.0);

    // exactly on the local spectrum: no resolvent, bad by convention
    const CubeVerdict w = classify_cube(H, real->stored(Site({1})), P);
    CHECK_FALSE(w.good);
    CHECK(w.margin_s0 == std::numeric_limits<double>::infinity());
}

TEST_CASE("verdict is invariant under joint translation of cube and potential") {
    const Params P = desk_params(1, 8.0);
    const Cube at_origin(Site::origin(1), 3);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), at_origin.sites(), 77);
    const HamMatrix H0 = assemble_hamiltonian(at_origin, 2.0, real, HoppingSpec{8.0, 1});
    // same matrix viewed on a shifted cube is the jointly translated operator
    const HamMatrix Hs{Cube(Site({40}), 3), H0.lambda, H0.hopping, H0.realization, H0.mat};
    for (double E : {-0.9, -0.3, 0.2, 0.8}) {
        const CubeVerdict a = classify_cube(H0, E, P);
        const CubeVerdict b = classify_cube(Hs, E, P);
        CHECK(a.good == b.good);
        if (std::isfinite(a.margin_s0)) {
            CHECK(a.margin_s0 == doctest::Approx(b.margin_s0).epsilon(1e-12));
            CHECK(a.margin_r1 == doctest::Approx(b.margin_r1).epsilon(1e-12));
        }
    }
}

TEST_CASE("off-diagonal decay check holds for diagonal resolvents") {
    Params P = desk_params(1, 8.0);
    P.r1 = 8.0;  // puts tau' below (zeta - delta) r1 as the check requires
    const Cube c(Site::origin(1), 4);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 13);
    const HamMatrix H = assemble_hamiltonian(c, kLambdaDiagonal, real, HoppingSpec{8.0, 1});
    const GreenMatrix G = green_function(H, 2.5);
    const DecayCheck chk = offdiag_decay_check(G, P);
    CHECK(chk.holds);
    CHECK(chk.pairs_checked > 0);
    CHECK(chk.worst_margin > 0.0);
}

TEST_CASE("off-diagonal decay check reports the planted violator") {
    Params P = desk_params(1, 8.0);
    P.r1 = 8.0;
    const Cube c(Site::origin(1), 4);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 13);
    const HamMatrix H = assemble_hamiltonian(c, kLambdaDiagonal, real, HoppingSpec{8.0, 1});
    GreenMatrix G = green_function(H, 2.5);
    G.entries(0, 8) = 0.9;  // sites -4 and 4, distance 8, far above 8^-(1-zeta)r1
    const DecayCheck chk = offdiag_decay_check(G, P);
    CHECK_FALSE(chk.holds);
    CHECK(chk.worst_margin < 0.0);
    CHECK(chk.worst_from == Site({-4}));
    CHECK(chk.worst_to == Site({4}));
}

TEST_CASE("off-diagonal decay check rejects an unusable exponent window") {
    const Params P = desk_params(1, 8.0);  // (zeta - delta) r1 < tau' here
    const HamMatrix H = three_site_kernel();
    const GreenMatrix G = green_function(H, 3.0);
    CHECK_THROWS_AS(offdiag_decay_check(G, P), std::invalid_argument);
    Params bad_zeta = P;
    bad_zeta.r1 = 8.0;
    bad_zeta.zeta = 0.3;  // below delta
    CHECK_THROWS_AS(offdiag_decay_check(G, bad_zeta), std::invalid_argument);
}

TEST_CASE("interior splitting identity rejects degenerate calls") {
    const Cube B(Site::origin(1), 5);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), B.sites(), 1);
    const HamMatrix H = assemble_hamiltonian(B, 2.0, real, HoppingSpec{3.0, 1});
    const EigenSystem sys = diagonalize(H);
    // sub equal to the whole box has an empty exterior
    CHECK_THROWS_AS(poisson_residual(H, sys.eigenvalues[0], sys.eigenvectors.col(0), B),
                    std::invalid_argument);
    // sub leaving the box
    CHECK_THROWS_AS(poisson_residual(H, sys.eigenvalues[0], sys.eigenvectors.col(0),
                                     Cube(Site({4}), 3)),
                    std::invalid_argument);
    // not an eigenpair
    Eigen::VectorXd junk = Eigen::VectorXd::Ones(B.size());
    CHECK_THROWS_AS(poisson_residual(H, 0.0, junk, Cube(Site({0}), 2)), std::invalid_argument);
}

TEST_CASE("interior splitting identity is exact in the decoupled limit") {
    const Cube B(Site::origin(1), 5);
    const Cube sub(Site({0}), 2);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), B.sites(), 6);
    const HamMatrix H = assemble_hamiltonian(B, kLambdaDiagonal, real, HoppingSpec{3.0, 1});
    // delta eigenfunction at a site outside the sub-cube
    const Site m({4});
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(B.size());
    psi[B.index_of(m)] = 1.0;
    CHECK(poisson_residual(H, real->stored(m), psi, sub) == 0.0);
}

TEST_CASE("interior splitting identity holds for true eigenpairs") {
    const Cube B(Site::origin(1), 12);
    const Cube sub(Site({0}), 5);
    auto real = sample_potential(DistributionSpec::uniform_on(1.0), B.sites(), 44);
    const HamMatrix H = assemble_hamiltonian(B, 2.0, real, HoppingSpec{3.0, 1});
    const HamMatrix Hs = assemble_hamiltonian(sub, 2.0, real, HoppingSpec{3.0, 1});
    const EigenSystem big = diagonalize(H);
    const EigenSystem small = diagonalize(Hs);

    int checked = 0;
    for (int j = 0; j < big.size() && checked < 8; ++j) {
        double dist = 1e300;
        for (int i = 0; i < small.size(); ++i)
            dist = std::min(dist, std::abs(big.eigenvalues[j] - small.eigenvalues[i]));
        if (dist <= 1e-4) continue;
        CHECK(poisson_residual(H, big.eigenvalues[j], big.eigenvectors.col(j), sub) < 1e-8);
        ++checked;
    }
    CHECK(checked == 8);
}
