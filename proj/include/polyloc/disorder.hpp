#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "polyloc/lattice.hpp"

namespace polyloc {

enum class DistKind { uniform, discrete_grid, table_inverse_cdf };

// Single-site distribution with support inside [-M, M].
struct DistributionSpec {
    DistKind kind = DistKind::uniform;
    double half_width = 1.0;  // M

    // discrete_grid: atoms at points[i] with weights[i] (normalized on validate)
    std::vector<double> points;
    std::vector<double> weights;

    // table_inverse_cdf: nondecreasing quantile table at equispaced probabilities
    std::vector<double> table;

    static DistributionSpec uniform_on(double M);
    static DistributionSpec discrete(std::vector<double> points, std::vector<double> weights, double M);
    static DistributionSpec from_table(std::vector<double> quantiles, double M);

    // throws std::invalid_argument on malformed data
    void validate() const;

    double sample(double u) const;            // inverse cdf at u in [0,1)
    double cdf(double x) const;               // mu((-inf, x])
    double cdf_left(double x) const;          // mu((-inf, x))
    double measure(double a, double b) const; // mu([a, b]) for a <= b, else 0
    bool has_atoms() const;
};

// Frozen disorder sample: values are a pure function of (spec, seed, site).
class Realization {
public:
    Realization(DistributionSpec spec, std::uint64_t seed) : spec_(std::move(spec)), seed_(seed) {
        spec_.validate();
    }

    const DistributionSpec& spec() const { return spec_; }
    std::uint64_t seed() const { return seed_; }

    double value_at(const Site& s) const;

    // materialize values for a site list (idempotent)
    void ensure(const std::vector<Site>& sites);
    // materialized lookup; throws IncompleteRealizationError when missing
    double stored(const Site& s) const;
    const std::map<Site, double>& values() const { return values_; }

private:
    DistributionSpec spec_;
    std::uint64_t seed_;
    std::map<Site, double> values_;
};

std::shared_ptr<Realization> sample_potential(const DistributionSpec& spec,
                                              const std::vector<Site>& sites,
                                              std::uint64_t seed);

// Largest K such that mu([a,b]) <= K^-1 |a-b|^rho for short intervals:
// K = 1 / inf_k sup_{0<|a-b|<=k} |a-b|^-rho mu([a,b]).
// Returns 0 when the infimum diverges (atoms, or rho too large) and +inf when
// it vanishes (rho below the regularity of the law). Closed form for uniform
// and discrete laws, window scan for tables.
double holder_constant(const DistributionSpec& spec, double rho);

}  // namespace polyloc
