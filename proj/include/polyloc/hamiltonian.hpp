#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <memory>

#include "polyloc/disorder.hpp"
#include "polyloc/lattice.hpp"

namespace polyloc {

// Hopping kernel |m - n|^-r (sup-norm), zero on the diagonal.
struct HoppingSpec {
    double r;
    int d;
    void validate() const;
};

double hopping_entry(const Site& m, const Site& n, const HoppingSpec& spec);

// row-sum bound for the kernel: sum_{n != 0} |n|^-r, requires r > d
double schur_bound(const HoppingSpec& spec);

// coupling sentinel for the pure-diagonal limit
inline constexpr double kLambdaDiagonal = std::numeric_limits<double>::infinity();

struct HamMatrix {
    Cube cube;
    double lambda;
    HoppingSpec hopping;
    std::shared_ptr<const Realization> realization;
    Eigen::MatrixXd mat;

    bool diagonal() const { return std::isinf(lambda); }
    double inv_lambda() const { return diagonal() ? 0.0 : 1.0 / lambda; }
    int size() const { return static_cast<int>(mat.rows()); }
};

// H = lambda^-1 T + V on the cube; potential values must already be
// materialized in the realization (missing site -> IncompleteRealizationError).
// lambda < 1 is accepted with a warning.
HamMatrix assemble_hamiltonian(const Cube& cube, double lambda,
                               std::shared_ptr<const Realization> realization,
                               const HoppingSpec& hopping);

// operator data bundle used by experiment drivers
struct OperatorSpec {
    int d = 1;
    double r = 8.0;
    double lambda = 1.0;
    DistributionSpec dist;
    std::uint64_t seed = 0;

    HoppingSpec hopping() const { return HoppingSpec{r, d}; }
};

}  // namespace polyloc
