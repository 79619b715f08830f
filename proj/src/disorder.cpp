#include "polyloc/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "polyloc/errors.hpp"
#include "polyloc/rng.hpp"

namespace polyloc {

DistributionSpec DistributionSpec::uniform_on(double M) {
    DistributionSpec s;
    s.kind = DistKind::uniform;
    s.half_width = M;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::discrete(std::vector<double> points, std::vector<double> weights,
                                            double M) {
    DistributionSpec s;
    s.kind = DistKind::discrete_grid;
    s.half_width = M;
    s.points = std::move(points);
    s.weights = std::move(weights);
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::from_table(std::vector<double> quantiles, double M) {
    DistributionSpec s;
    s.kind = DistKind::table_inverse_cdf;
    s.half_width = M;
    s.table = std::move(quantiles);
    s.validate();
    return s;
}

void DistributionSpec::validate() const {
    if (!(half_width > 0.0))
        throw std::invalid_argument("DistributionSpec: half width must be positive");
    switch (kind) {
        case DistKind::uniform:
            return;
        case DistKind::discrete_grid: {
            if (points.size() < 2)
                throw std::invalid_argument("DistributionSpec: need >= 2 support points");
            if (points.size() != weights.size())
                throw std::invalid_argument("DistributionSpec: points/weights size mismatch");
            double tot = 0.0;
            for (size_t i = 0; i < points.size(); ++i) {
                if (std::abs(points[i]) > half_width)
                    throw std::invalid_argument("DistributionSpec: support outside [-M, M]");
                if (!(weights[i] > 0.0))
                    throw std::invalid_argument("DistributionSpec: weights must be positive");
                if (i > 0 && !(points[i] > points[i - 1]))
                    throw std::invalid_argument("DistributionSpec: points must be increasing");
                tot += weights[i];
            }
            if (!(tot > 0.0)) throw std::invalid_argument("DistributionSpec: zero total weight");
            return;
        }
        case DistKind::table_inverse_cdf: {
            if (table.size() < 2)
                throw std::invalid_argument("DistributionSpec: quantile table needs >= 2 entries");
            for (size_t i = 0; i < table.size(); ++i) {
                if (std::abs(table[i]) > half_width)
                    throw std::invalid_argument("DistributionSpec: support outside [-M, M]");
                if (i > 0 && table[i] < table[i - 1])
                    throw std::invalid_argument("DistributionSpec: quantile table must be nondecreasing");
            }
            if (!(table.back() > table.front()))
                throw std::invalid_argument("DistributionSpec: support must contain >= 2 points");
            return;
        }
    }
    throw std::invalid_argument("DistributionSpec: unknown kind");
}

double DistributionSpec::sample(double u) const {
    switch (kind) {
        case DistKind::uniform:
            return (2.0 * u - 1.0) * half_width;
        case DistKind::discrete_grid: {
            const double tot = std::accumulate(weights.begin(), weights.end(), 0.0);
            double acc = 0.0;
            for (size_t i = 0; i + 1 < points.size(); ++i) {
                acc += weights[i];
                if (u * tot < acc) return points[i];
            }
            return points.back();
        }
        case DistKind::table_inverse_cdf: {
            const double pos = u * static_cast<double>(table.size() - 1);
            const size_t i = std::min(static_cast<size_t>(pos), table.size() - 2);
            const double frac = pos - static_cast<double>(i);
            return table[i] + frac * (table[i + 1] - table[i]);
        }
    }
    return 0.0;
}

double DistributionSpec::cdf(double x) const {
    switch (kind) {
        case DistKind::uniform: {
            const double M = half_width;
            return std::clamp((x + M) / (2.0 * M), 0.0, 1.0);
        }
        case DistKind::discrete_grid: {
            const double tot = std::accumulate(weights.begin(), weights.end(), 0.0);
            double acc = 0.0;
            for (size_t i = 0; i < points.size(); ++i)
                if (points[i] <= x) acc += weights[i];
            return acc / tot;
        }
        case DistKind::table_inverse_cdf: {
            // largest probability whose quantile stays <= x
            if (x < table.front()) return 0.0;
            if (x >= table.back()) return 1.0;
            size_t i = static_cast<size_t>(std::upper_bound(table.begin(), table.end(), x) -
                                           table.begin());  // table[i] > x, i >= 1
            const double lo = table[i - 1], hi = table[i];
            double frac = (hi > lo) ? (x - lo) / (hi - lo) : 1.0;
            return (static_cast<double>(i - 1) + frac) / static_cast<double>(table.size() - 1);
        }
    }
    return 0.0;
}

double DistributionSpec::cdf_left(double x) const {
    switch (kind) {
        case DistKind::uniform:
            return cdf(x);
        case DistKind::discrete_grid: {
            const double tot = std::accumulate(weights.begin(), weights.end(), 0.0);
            double acc = 0.0;
            for (size_t i = 0; i < points.size(); ++i)
                if (points[i] < x) acc += weights[i];
            return acc / tot;
        }
        case DistKind::table_inverse_cdf: {
            if (x <= table.front()) return 0.0;
            if (x > table.back()) return 1.0;
            size_t i = static_cast<size_t>(std::lower_bound(table.begin(), table.end(), x) -
                                           table.begin());  // table[i] >= x, i >= 1
            const double lo = table[i - 1], hi = table[i];
            double frac = (hi > lo) ? (x - lo) / (hi - lo) : 0.0;
            return (static_cast<double>(i - 1) + frac) / static_cast<double>(table.size() - 1);
        }
    }
    return 0.0;
}

double DistributionSpec::measure(double a, double b) const {
    if (!(a <= b)) return 0.0;
    return std::max(0.0, cdf(b) - cdf_left(a));
}

bool DistributionSpec::has_atoms() const {
    switch (kind) {
        case DistKind::uniform:
            return false;
        case DistKind::discrete_grid:
            return true;
        case DistKind::table_inverse_cdf:
            for (size_t i = 1; i < table.size(); ++i)
                if (table[i] == table[i - 1]) return true;
            return false;
    }
    return false;
}

double Realization::value_at(const Site& s) const {
    return spec_.sample(bits_to_unit(site_bits(seed_, kDomainPotential, s)));
}

void Realization::ensure(const std::vector<Site>& sites) {
    for (const Site& s : sites) {
        auto it = values_.find(s);
        if (it == values_.end()) values_.emplace(s, value_at(s));
    }
}

double Realization::stored(const Site& s) const {
    auto it = values_.find(s);
    if (it == values_.end())
        throw IncompleteRealizationError("Realization: no potential value for site " + s.str());
    return it->second;
}

std::shared_ptr<Realization> sample_potential(const DistributionSpec& spec,
                                              const std::vector<Site>& sites, std::uint64_t seed) {
    auto r = std::make_shared<Realization>(spec, seed);
    r->ensure(sites);
    return r;
}

double holder_constant(const DistributionSpec& spec, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("holder_constant: rho must be positive");
    spec.validate();
    const double inf = std::numeric_limits<double>::infinity();
    if (spec.kind == DistKind::uniform) {
        if (rho == 1.0) return 2.0 * spec.half_width;
        return rho > 1.0 ? 0.0 : inf;
    }
    if (spec.kind == DistKind::discrete_grid || spec.has_atoms()) return 0.0;

    // window scan: T(w) = sup_a w^-rho mu([a, a+w]) on a geometric width ladder;
    // the short-interval supremum is the small-w limit of T
    const double M = spec.half_width;
    const int n_widths = 31;
    const int n_pos = 10000;
    std::vector<double> T(n_widths, 0.0);
    for (int j = 0; j < n_widths; ++j) {
        const double w = 2.0 * M * std::pow(2.0, -j);
        double sup = 0.0;
        const double lo = -M - w, hi = M;
        for (int i = 0; i <= n_pos; ++i) {
            const double a = lo + (hi - lo) * static_cast<double>(i) / n_pos;
            sup = std::max(sup, spec.measure(a, a + w));
        }
        T[j] = sup * std::pow(w, -rho);
    }
    const double last = T[n_widths - 1];
    const double prev = T[n_widths - 1 - 10];
    if (last > 1e12 || (prev > 0.0 && last > 100.0 * prev)) return 0.0;  // diverging
    if (last < 1e-12) return inf;                                       // vanishing
    return 1.0 / last;
}

}  // namespace polyloc
