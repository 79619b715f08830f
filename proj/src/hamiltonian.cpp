#include "polyloc/hamiltonian.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "polyloc/errors.hpp"

namespace polyloc {

void HoppingSpec::validate() const {
    if (d < 1) throw std::invalid_argument("HoppingSpec: d must be >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("HoppingSpec: r must be positive");
}

double hopping_entry(const Site& m, const Site& n, const HoppingSpec& spec) {
    spec.validate();
    if (m.dim() != spec.d || n.dim() != spec.d)
        throw std::invalid_argument("hopping_entry: site dimension mismatch");
    const int dist = sup_distance(m, n);
    if (dist == 0) return 0.0;
    return std::pow(static_cast<double>(dist), -spec.r);
}

double schur_bound(const HoppingSpec& spec) {
    spec.validate();
    if (!(spec.r > spec.d))
        throw DivergentSumError("schur_bound: row sums diverge unless r > d");
    return shell_power_tail(spec.r, spec.d, 1).value;
}

HamMatrix assemble_hamiltonian(const Cube& cube, double lambda,
                               std::shared_ptr<const Realization> realization,
                               const HoppingSpec& hopping) {
    hopping.validate();
    if (!realization) throw std::invalid_argument("assemble_hamiltonian: null realization");
    if (cube.dim() != hopping.d)
        throw std::invalid_argument("assemble_hamiltonian: cube/hopping dimension mismatch");
    if (!(lambda > 0.0))
        throw std::invalid_argument("assemble_hamiltonian: lambda must be positive");
    if (lambda < 1.0)
        std::cerr << "[polyloc] warning: lambda = " << lambda << " below 1, weak-coupling regime\n";

    const int n = cube.size();
    const auto& sites = cube.sites();
    const double il = std::isinf(lambda) ? 0.0 : 1.0 / lambda;

    // hopping depends on |m - n| only; precompute the power table
    const int max_dist = 2 * cube.radius();
    std::vector<double> pow_table(static_cast<size_t>(max_dist) + 1, 0.0);
    for (int k = 1; k <= max_dist; ++k)
        pow_table[k] = std::pow(static_cast<double>(k), -hopping.r);

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        H(i, i) = realization->stored(sites[i]);
        if (il != 0.0) {
            for (int j = i + 1; j < n; ++j) {
                const double t = il * pow_table[sup_distance(sites[i], sites[j])];
                H(i, j) = t;
                H(j, i) = t;
            }
        }
    }
    return HamMatrix{cube, lambda, hopping, std::move(realization), std::move(H)};
}

}  // namespace polyloc
