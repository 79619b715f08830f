// Acceptance gate: one line per criterion, nonzero exit if any fail.
// Every check runs even after a failure so the report is complete.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyloc/disorder.hpp"
#include "polyloc/dynamics.hpp"
#include "polyloc/errors.hpp"
#include "polyloc/experiment.hpp"
#include "polyloc/hamiltonian.hpp"
#include "polyloc/lattice.hpp"
#include "polyloc/msa.hpp"
#include "polyloc/params.hpp"
#include "polyloc/resolvent.hpp"
#include "polyloc/rng.hpp"
#include "polyloc/spectral.hpp"

using namespace polyloc;

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

// ---------------------------------------------------------------- criterion 1

bool exact_identities(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const Cube B(Site::origin(1), 12);
    const HoppingSpec hop{3.0, 1};
    const double lambda = 2.0;

    double worst_poisson = 0.0, worst_resolvent = 0.0, worst_recon = 0.0, worst_complete = 0.0;
    int accepted = 0;
    for (int t = 0; t < 1000 && accepted < 100; ++t) {
        const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(t);
        auto real = sample_potential(DistributionSpec::uniform_on(1.0), B.sites(), seed);
        const HamMatrix H = assemble_hamiltonian(B, lambda, real, hop);
        const EigenSystem sys = diagonalize(H);

        const int j = static_cast<int>(counter_bits(seed, 0x747269706c65ULL, 1) %
                                       static_cast<std::uint64_t>(sys.size()));
        const int off =
            static_cast<int>(counter_bits(seed, 0x747269706c65ULL, 2) % 15) - 7;
        const Cube sub(Site({off}), 5);
        const double E = sys.eigenvalues[j];

        const HamMatrix Hsub = assemble_hamiltonian(sub, lambda, real, hop);
        double gap = 1e30;
        for (double mu : diagonalize(Hsub).eigenvalues) gap = std::min(gap, std::abs(E - mu));
        if (gap <= 1e-4) continue;  // splitting needs an invertible restriction

        worst_poisson =
            std::max(worst_poisson, poisson_residual(H, E, sys.eigenvectors.col(j), sub));
        ++accepted;

        if (accepted <= 25) {
            const double Eoff = 3.7;
            const GreenMatrix G = green_function(H, Eoff);
            const Eigen::MatrixXd lhs =
                (H.mat - Eoff * Eigen::MatrixXd::Identity(H.size(), H.size())) * G.entries -
                Eigen::MatrixXd::Identity(H.size(), H.size());
            worst_resolvent = std::max(worst_resolvent, lhs.cwiseAbs().maxCoeff());

            const Eigen::MatrixXd recon = sys.eigenvectors *
                                          sys.eigenvalues.asDiagonal() *
                                          sys.eigenvectors.transpose();
            worst_recon = std::max(worst_recon, (recon - H.mat).cwiseAbs().maxCoeff() /
                                                    H.mat.cwiseAbs().maxCoeff());
            const Eigen::VectorXd rows = sys.eigenvectors.array().square().rowwise().sum();
            worst_complete =
                std::max(worst_complete, (rows.array() - 1.0).abs().maxCoeff());
        }
    }
    const double dt = elapsed_s(t0);
    detail = "triples " + std::to_string(accepted) + ", splitting " + fmt(worst_poisson) +
             ", resolvent " + fmt(worst_resolvent) + ", reconstruction " + fmt(worst_recon) +
             ", completeness " + fmt(worst_complete) + ", " + fmt(dt) + " s";
    return accepted == 100 && worst_poisson <= 1e-8 && worst_resolvent <= 1e-8 &&
           worst_recon <= 1e-8 && worst_complete <= 1e-8 && dt <= 120.0;
}

// ---------------------------------------------------------------- criterion 2

bool decoupled_limit(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const HoppingSpec hop{8.0, 1};
    bool spectrum_exact = true;
    for (std::uint64_t seed = 50; seed < 55; ++seed) {
        const Cube c(Site::origin(1), 10);
        auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), seed);
        const EigenSystem sys = diagonalize(assemble_hamiltonian(c, kLambdaDiagonal, real, hop));
        std::vector<double> vals;
        for (const Site& s : c.sites()) vals.push_back(real->stored(s));
        std::sort(vals.begin(), vals.end());
        for (int i = 0; i < sys.size(); ++i)
            if (sys.eigenvalues[i] != vals[static_cast<size_t>(i)]) spectrum_exact = false;
    }

    double moment_drift = 0.0;
    {
        const Cube c(Site::origin(1), 10);
        auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 60);
        const EigenSystem sys = diagonalize(assemble_hamiltonian(c, kLambdaDiagonal, real, hop));
        for (const State& phi :
             {power_law_state(2.0, c, true), delta_state(c, Site({3}))}) {
            const double m0 = moment(evolve(sys, phi, 0.0), 2.0);
            for (int k = 1; k <= 10; ++k)
                moment_drift = std::max(
                    moment_drift, std::abs(moment(evolve(sys, phi, 10.0 * k), 2.0) - m0));
        }
    }

    bool no_bad_pair = true;
    const Params P = desk_params(1, 8.0);
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        for (int L : {1, 2}) {
            const Site m({-(L + 1)}), n({L + 1});
            Realization real(DistributionSpec::uniform_on(1.0), seed);
            real.ensure(cube_sites(m, L));
            real.ensure(cube_sites(n, L));
            for (const EnergyGrid& g : {EnergyGrid{2.5, 0.4, 5}, EnergyGrid{-3.0, 0.9, 7}})
                if (event_bad_pair(real, kLambdaDiagonal, hop, m, n, L, g, P))
                    no_bad_pair = false;
        }
    }

    double worst_D = 0.0;
    for (std::uint64_t seed = 200; seed < 205; ++seed) {
        const Cube c(Site::origin(1), 8);
        auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), seed);
        const EigenSystem sys = diagonalize(assemble_hamiltonian(c, kLambdaDiagonal, real, hop));
        worst_D = std::max(worst_D, sule_constant(sys, 2.0, 1.0 / 3.0).D);
    }

    const double dt = elapsed_s(t0);
    detail = std::string("spectrum ") + (spectrum_exact ? "exact" : "off") + ", moment drift " +
             fmt(moment_drift) + ", D " + fmt(worst_D) + ", " + fmt(dt) + " s";
    return spectrum_exact && moment_drift <= 1e-10 && no_bad_pair && worst_D <= 1.0 && dt <= 30.0;
}

// ---------------------------------------------------------------- criterion 3

bool propagator_crosscheck(std::string& detail) {
    const Cube c(Site::origin(1), 32);  // smallest box at or above 64 sites
    const HoppingSpec hop{3.0, 1};
    double worst_diff = 0.0, worst_unit = 0.0;
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
        auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), seed);
        const HamMatrix H = assemble_hamiltonian(c, 2.0, real, hop);
        const EigenSystem sys = diagonalize(H);
        const State phi = delta_state(c, Site({0}));
        const double row_bound = H.mat.cwiseAbs().rowwise().sum().maxCoeff();
        const State a = evolve(sys, phi, 10.0);
        const State b = rk4_propagate(H, phi, 10.0, 0.02 / row_bound);
        worst_diff = std::max(worst_diff, (a.amp - b.amp).cwiseAbs().maxCoeff());
        worst_unit = std::max(worst_unit, std::abs(a.norm() - 1.0));
        worst_unit = std::max(worst_unit, std::abs(b.norm() - 1.0));
    }
    detail = "sup diff " + fmt(worst_diff) + ", unitarity " + fmt(worst_unit);
    return worst_diff <= 1e-6 && worst_unit <= 1e-8;
}

// ---------------------------------------------------------------- criterion 4

bool order_window_classification(std::string& detail) {
    const Params P = desk_params(1, 8.0);
    int disagreements = 0, goods = 0, bads = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double lambda = trial % 2 == 0 ? 50.0 : 1.5;
        const Cube c(Site::origin(1), 4);
        auto real = sample_potential(DistributionSpec::uniform_on(1.0), c.sites(), 1000 + trial);
        const HamMatrix H = assemble_hamiltonian(c, lambda, real, HoppingSpec{8.0, 1});
        const double E = -1.2 + 2.4 * trial / 49.0;
        const CubeVerdict v = classify_cube(H, E, P);
        (v.good ? goods : bads)++;

        bool grid_good = true;
        try {
            const GreenMatrix G = green_function(H, E);
            const SobolevProfile prof(G.entries, c.sites(), c.sites());
            for (int i = 0; i < 20; ++i) {
                const double s = P.s0 + (P.r1 - P.s0) * i / 19.0;
                if (std::log(prof.norm(s)) > (P.tau_prime + P.delta * s) * std::log(4.0))
                    grid_good = false;
            }
        } catch (const SingularResolventError&) {
            grid_good = false;
        }
        if (v.good != grid_good) ++disagreements;
    }

    double hand_err = 0.0;
    {
        Eigen::MatrixXd m(1, 1);
        m << 0.7;
        const std::vector<Site> x = {Site({0})};
        for (double s : {0.75, 3.0, 6.0})
            hand_err = std::max(hand_err, std::abs(sobolev_matrix_norm(m, x, x, s) - 0.7));
    }
    {
        const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
        const std::vector<Site> x = {Site({0}), Site({1})};
        for (double s : {0.75, 4.0})
            hand_err = std::max(hand_err, std::abs(sobolev_matrix_norm(m, x, x, s) - 1.0));
    }
    {
        Eigen::MatrixXd m(2, 2);
        m << 0.0, 0.3, 0.0, 0.0;
        const std::vector<Site> x = {Site({0}), Site({3})};
        for (double s : {1.0, 2.0})
            hand_err = std::max(hand_err,
                                std::abs(sobolev_matrix_norm(m, x, x, s) - 0.3 * std::pow(3.0, s)));
    }
    detail = std::to_string(disagreements) + " disagreements (" + std::to_string(goods) +
             " good / " + std::to_string(bads) + " bad), hand-norm error " + fmt(hand_err);
    return disagreements == 0 && goods > 0 && bads > 0 && hand_err <= 1e-12;
}

// ---------------------------------------------------------------- criterion 5

bool decay_fit_recovery(std::string& detail) {
    const Cube box(Site::origin(1), 32);
    double worst = 0.0;
    for (const Site& center : {Site({0}), Site({-7})}) {
        for (double gamma : {2.0, 4.0, 8.0}) {
            Eigen::VectorXd psi(box.size());
            for (int i = 0; i < box.size(); ++i)
                psi[i] = std::pow(
                    std::max(1.0, static_cast<double>(sup_distance(box.site(i), center))), -gamma);
            const DecayFit fit = fit_decay_exponent(psi, box, center);
            worst = std::max(worst, std::abs(fit.gamma_hat - gamma));
        }
    }
    detail = "max exponent error " + fmt(worst);
    return worst <= 0.05;
}

// ---------------------------------------------------------------- criterion 6

bool localization_contrast(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const Cube box(Site::origin(1), 60);
    const HoppingSpec hop{8.0, 1};
    const State phi0 = delta_state(box, Site({0}));

    double m100_strong = 0.0, m200_strong = 0.0, m50_strong = 0.0, m50_weak = 0.0;
    std::vector<double> gam_strong, gam_weak;
    for (std::uint64_t seed = 9001; seed <= 9020; ++seed) {
        for (double lambda : {50.0, 1.0}) {
            auto real = sample_potential(DistributionSpec::uniform_on(1.0), box.sites(), seed);
            const EigenSystem sys = diagonalize(assemble_hamiltonian(box, lambda, real, hop));
            const double m50 = moment(evolve(sys, phi0, 50.0), 2.0);
            if (lambda == 50.0) {
                m50_strong += m50;
                m100_strong += moment(evolve(sys, phi0, 100.0), 2.0);
                m200_strong += moment(evolve(sys, phi0, 200.0), 2.0);
            } else {
                m50_weak += m50;
            }
            std::vector<double>& pool = lambda == 50.0 ? gam_strong : gam_weak;
            for (int j = 0; j < sys.size(); ++j) {
                try {
                    pool.push_back(fit_decay_exponent(sys, j).gamma_hat);
                } catch (const InsufficientDataError&) {
                }
            }
        }
    }
    const double saturation = m200_strong / m100_strong;
    const double contrast = m50_weak / m50_strong;
    const double med_strong = median_of(gam_strong);
    const double med_weak = median_of(gam_weak);
    const double dt = elapsed_s(t0);
    detail = "saturation " + fmt(saturation) + " (<= 1.2), contrast " + fmt(contrast) +
             " (>= 3), exponent medians " + fmt(med_strong) + " vs " + fmt(med_weak) + ", " +
             fmt(dt) + " s";
    return saturation <= 1.2 && contrast >= 3.0 && med_strong > med_weak && dt <= 600.0;
}

// ---------------------------------------------------------------- criterion 7

bool bad_pair_statistics(std::string& detail) {
    BadPairConfig cfg;
    cfg.L_list = {4, 6, 8, 10};
    cfg.n_samples = 200;
    cfg.base_seed = 20000;
    cfg.dist = DistributionSpec::uniform_on(1.0);
    cfg.lambda = 50.0;
    cfg.hopping = HoppingSpec{8.0, 1};
    // grid half-width = spectral radius bound; dense enough that every size in
    // L_list sees a usable event rate at 200 samples
    cfg.grid = EnergyGrid{0.0, schur_bound(cfg.hopping) / cfg.lambda + 1.0, 61};
    cfg.params = desk_params(1, 8.0);
    cfg.jobs = 4;
    const BadPairTable table = estimate_bad_pair_probability(cfg);
    bool decreasing = true;
    std::string ps;
    for (size_t i = 0; i < table.rows.size(); ++i) {
        if (i && !(table.rows[i].p_hat < table.rows[i - 1].p_hat)) decreasing = false;
        ps += (i ? " " : "") + fmt(table.rows[i].p_hat);
    }

    // exact binomial coverage at (p=0.3, n=60) is 0.93429; a large run count
    // keeps sampling noise well below the 0.43% margin over the 93% floor
    int covered = 0;
    const int runs = 100000;
    for (int k = 0; k < runs; ++k) {
        long long hits = 0;
        for (std::uint64_t i = 0; i < 60; ++i)
            if (bits_to_unit(counter_bits(777 + static_cast<std::uint64_t>(k), kDomainBernoulli,
                                          i)) < 0.3)
                ++hits;
        const WilsonInterval w = wilson_interval(hits, 60);
        if (w.lo <= 0.3 && 0.3 <= w.hi) ++covered;
    }

    int stable = 0;
    const Params P = desk_params(1, 8.0);
    const Site m({-5}), n({5});
    for (int k = 0; k < 100; ++k) {
        Realization real(DistributionSpec::uniform_on(1.0), 30000 + static_cast<std::uint64_t>(k));
        real.ensure(cube_sites(m, 4));
        real.ensure(cube_sites(n, 4));
        // spacing 5e-3 resolves the L=4 bad window (~8e-3), so refinement
        // changes the verdict only for borderline draws
        const EnergyGrid coarse{0.0, 1.0, 401};
        const bool a = event_bad_pair(real, 50.0, HoppingSpec{8.0, 1}, m, n, 4, coarse, P);
        const bool b = event_bad_pair(real, 50.0, HoppingSpec{8.0, 1}, m, n, 4, coarse.refined(), P);
        if (a == b) ++stable;
    }

    detail = "p_hat [" + ps + "], coverage " + std::to_string(covered) + "/" +
             std::to_string(runs) + ", stability " + std::to_string(stable) + "/100";
    return decreasing && covered >= static_cast<int>(0.93 * runs) && stable >= 95;
}

// ---------------------------------------------------------------- criterion 8

bool maximizer_cubes_bad(std::string& detail) {
    const Cube box(Site::origin(1), 20);
    const Params P = desk_params(1, 8.0);
    const int L = 4;
    long long bad = 0, total = 0;
    for (std::uint64_t seed = 7000; seed < 7010; ++seed) {
        auto real = sample_potential(DistributionSpec::uniform_on(1.0), box.sites(), seed);
        const EigenSystem sys =
            diagonalize(assemble_hamiltonian(box, 50.0, real, HoppingSpec{8.0, 1}));
        for (int j = 0; j < sys.size(); ++j) {
            if (box.radius() - sup_distance(sys.centers[static_cast<size_t>(j)], box.center()) <
                2 * L)
                continue;
            ++total;
            if (!maximizer_cube_bad(sys, j, L, P).good) ++bad;
        }
    }
    const double frac = total ? static_cast<double>(bad) / static_cast<double>(total) : 0.0;
    detail = "bad fraction " + fmt(frac) + " (" + std::to_string(bad) + "/" +
             std::to_string(total) + ")";
    return total > 0 && frac >= 0.5;
}

// ---------------------------------------------------------------- criterion 9

// Two-part envelope. The tail bound quoted with the halved exponent is
// one-sided, so its product with L^((theta-d)/2) must stay below the L=4
// value (checked as monotone nonincreasing). Near-constancy of the product
// (max/min ratio <= 10) holds at the sharp rate L^-(theta-d), and is checked
// there.
bool tail_sum_envelope(std::string& detail) {
    struct Case {
        double theta;
        int d;
    };
    bool ok = true;
    std::string parts;
    for (const Case c : {Case{3.0, 1}, Case{5.0, 1}, Case{5.0, 2}}) {
        double lo = 1e300, hi = 0.0, prev = 1e300;
        bool monotone = true;
        for (int L = 4; L <= 64; ++L) {
            const double loose =
                tail_sum(c.theta, c.d, L).value * std::pow(L, (c.theta - c.d) / 2.0);
            if (loose > prev * (1.0 + 1e-12)) monotone = false;
            prev = loose;
            const double sharp = tail_sum(c.theta, c.d, L).value * std::pow(L, c.theta - c.d);
            lo = std::min(lo, sharp);
            hi = std::max(hi, sharp);
        }
        const double ratio = hi / lo;
        parts += (parts.empty() ? "" : ", ") + std::string("(") + fmt(c.theta) + "," +
                 std::to_string(c.d) + ") bound " + (monotone ? "ok" : "VIOLATED") +
                 ", sharp ratio " + fmt(ratio);
        if (!monotone || !(ratio <= 10.0)) ok = false;
    }
    detail = parts;
    return ok;
}

// --------------------------------------------------------------- criterion 10

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return "<missing " + path + ">";
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool compare_csvs(const std::string& a, const std::string& b, std::string& detail) {
    std::vector<std::string> names;
    if (!std::filesystem::is_directory(a)) {
        detail = "missing dir " + a;
        return false;
    }
    for (const auto& e : std::filesystem::directory_iterator(a))
        if (e.path().extension() == ".csv") names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    if (names.empty()) {
        detail = "no CSV files in " + a;
        return false;
    }
    for (const auto& name : names) {
        if (slurp(a + "/" + name) != slurp(b + "/" + name)) {
            detail = "differs: " + name;
            return false;
        }
    }
    detail = std::to_string(names.size()) + " files identical";
    return true;
}

std::string fresh(const std::string& name) {
    std::filesystem::remove_all(name);
    std::filesystem::create_directories(name);
    return name;
}

bool determinism(std::string& detail) {
    using nlohmann::json;
    bool ok = true;
    std::string note;

    {
        const json j = json::parse(R"({
            "kind": "spectrum",
            "geometry": {"d": 1, "radius": 8},
            "operator": {"r": 8.0, "lambda": 2.0,
                         "distribution": {"kind": "uniform", "M": 1.0}},
            "seeds": {"base": 0, "count": 4}
        })");
        const ExperimentConfig cfg = parse_experiment_config(j);
        RunOptions o1, o4;
        o1.jobs = 1;
        o1.out_dir_override = fresh("acc_spec_1");
        o4.jobs = 4;
        o4.out_dir_override = fresh("acc_spec_4");
        run_experiment(cfg, o1);
        run_experiment(cfg, o4);
        std::string d;
        if (!compare_csvs("acc_spec_1", "acc_spec_4", d)) {
            ok = false;
            note += "spectrum: " + d + "; ";
        }
    }
    {
        const json j = json::parse(R"({
            "kind": "msa-prob",
            "geometry": {"d": 1, "radius": 4},
            "operator": {"r": 8.0, "lambda": 2.0,
                         "distribution": {"kind": "uniform", "M": 1.0}},
            "seeds": {"base": 0, "count": 1},
            "msa-prob": {"L_list": [2, 3], "n_samples": 40,
                         "grid": {"e0": 0.0, "eta": 1.5, "points": 11}}
        })");
        const ExperimentConfig cfg = parse_experiment_config(j);
        RunOptions o1, o3;
        o1.jobs = 1;
        o1.out_dir_override = fresh("acc_msa_1");
        o3.jobs = 3;
        o3.out_dir_override = fresh("acc_msa_3");
        run_experiment(cfg, o1);
        run_experiment(cfg, o3);
        std::string d;
        if (!compare_csvs("acc_msa_1", "acc_msa_3", d)) {
            ok = false;
            note += "table: " + d + "; ";
        }
    }

#ifdef POLYLOC_CLI_PATH
    {
        const std::string cli = POLYLOC_CLI_PATH;
        const std::string fixture = std::string(POLYLOC_FIXTURE_DIR) + "/determinism.json";
        fresh("acc_cli_1");
        fresh("acc_cli_4");
        const std::string base = "\"" + cli + "\" run \"" + fixture + "\"";
        const int rc1 = std::system((base + " --jobs 1 --out acc_cli_1 > /dev/null 2>&1").c_str());
        const int rc4 = std::system((base + " --jobs 4 --out acc_cli_4 > /dev/null 2>&1").c_str());
        std::string d;
        if (rc1 != 0 || rc4 != 0) {
            ok = false;
            note += "cli exit " + std::to_string(rc1) + "/" + std::to_string(rc4) + "; ";
        } else if (!compare_csvs("acc_cli_1", "acc_cli_4", d)) {
            ok = false;
            note += "cli: " + d + "; ";
        }
    }
#else
    ok = false;
    note += "cli path not wired; ";
#endif

    detail = ok ? "in-process and subprocess outputs byte-identical" : note;
    return ok;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* what;
        std::function<bool(std::string&)> fn;
    };
    const std::vector<Criterion> all = {
        {1, "splitting/resolvent/reconstruction/completeness identities", exact_identities},
        {2, "decoupled-limit invariants", decoupled_limit},
        {3, "propagator agrees with the ODE integrator", propagator_crosscheck},
        {4, "endpoint classification and hand-computed norms", order_window_classification},
        {5, "planted decay exponents recovered", decay_fit_recovery},
        {6, "strong/weak disorder contrast", localization_contrast},
        {7, "bad-pair decay, interval calibration, grid stability", bad_pair_statistics},
        {8, "maximizer cubes classify bad", maximizer_cubes_bad},
        {9, "tail-sum scaling envelope", tail_sum_envelope},
        {10, "byte-identical output across worker counts", determinism},
    };

    int failures = 0;
    for (const auto& c : all) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::printf("[%s] criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", c.id, c.what,
                    detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/%d passed\n", static_cast<int>(all.size()) - failures,
                static_cast<int>(all.size()));
    return failures == 0 ? 0 : 1;
}
