#pragma once

#include <cstdint>
#include <vector>

#include "polyloc/disorder.hpp"
#include "polyloc/hamiltonian.hpp"
#include "polyloc/lattice.hpp"
#include "polyloc/params.hpp"

namespace polyloc {

// L_{k+1} = floor(L_k^alpha), strictly increasing; L0 >= 2, alpha > 1
struct ScaleSequence {
    long long L0;
    double alpha;
    std::vector<long long> scales;  // L_0 .. L_kmax

    long long at(int k) const;  // bounds-checked
    int kmax() const { return static_cast<int>(scales.size()) - 1; }
};

ScaleSequence scale_sequence(long long L0, double alpha, int kmax,
                             long long cap = 1000000000000000LL);

// uniform grid of `points` energies on [e0 - eta, e0 + eta], endpoints included
struct EnergyGrid {
    double e0 = 0.0;
    double eta = 1.0;
    int points = 2;

    std::vector<double> values() const;
    double spacing() const;
    EnergyGrid refined() const;  // spacing halved, same interval
};

// smallest k >= 0 with |m|^eps' < L_{k+1}; scales exhausted -> invalid_argument
int covering_scale_index(double eps_prime, const Site& m, const ScaleSequence& scales);

Annulus annulus_at_scale(const Site& center, int k, const ScaleSequence& scales, AnnulusVariant v);

// True iff some grid energy makes both cubes of radius L at m and n bad.
// Requires |m - n| > 2L (disjoint cubes); the realization must cover both.
bool event_bad_pair(const Realization& real, double lambda, const HoppingSpec& hopping,
                    const Site& m, const Site& n, int L, const EnergyGrid& grid,
                    const Params& params);

struct WilsonInterval {
    double lo;
    double hi;
};
// 95% score interval by default
WilsonInterval wilson_interval(long long successes, long long trials,
                               double z = 1.959963984540054);

struct BadPairRow {
    int L;
    long long n_samples;
    double p_hat;
    double ci_lo;
    double ci_hi;
    double l_pow_minus_2p;  // comparison column L^-2p
};

struct BadPairConfig {
    std::vector<int> L_list;
    long long n_samples = 100;
    std::uint64_t base_seed = 0;
    DistributionSpec dist;
    double lambda = 1.0;
    HoppingSpec hopping{8.0, 1};
    EnergyGrid grid;
    Params params;
    int jobs = 1;
};

struct BadPairTable {
    std::vector<BadPairRow> rows;
    double loglog_slope;  // least-squares slope of log p_hat vs log L (positive-p rows)
};

// Pair geometry: centers -(L+1) e1 and +(L+1) e1, separation 2L + 2.
// Seeds base_seed + i; deterministic for any job count.
BadPairTable estimate_bad_pair_probability(const BadPairConfig& cfg);

}  // namespace polyloc
