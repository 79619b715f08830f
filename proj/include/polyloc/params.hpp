#pragma once

#include <string>
#include <vector>

namespace polyloc {

// The full exponent budget steering cube classification, scale recursion,
// probability targets, and the reporting exponents. Dimensionless throughout.
struct Params {
    double alpha = 6.0;      // scale growth L_{k+1} = floor(L_k^alpha)
    double delta = 0.5;      // classification slope reserve
    double xi = 2.0;         // annulus decay budget
    double zeta = 0.95;      // off-diagonal decay fraction
    double p = 13.0;         // probability exponent target L^-2p
    double tau = 30.0;       // small-interval regularity exponent
    double tau_prime = 94.0; // classification threshold exponent
    double s0 = 0.75;        // lower edge of the norm window
    double r1 = 1792.0;      // upper edge of the norm window
    double rho = 1.0;        // law regularity order
    double kappa = 1.0;      // law regularity scale (carried, informational)
    int J = 24;              // even moment order for the probability bootstrap
    double r = 1800.0;       // hopping exponent
    int d = 1;               // lattice dimension
    double q = 1.125;        // transport moment order
    double theta = 11.25;    // initial-state decay exponent
    double gamma = 11.25;    // eigenfunction decay exponent target
    double eps_prime = 1.0 / 3.0;  // center-size allowance
};

// published parameter package: alpha=6, delta=1/2, xi=2, zeta=19/20,
// p=13d, tau=29d/rho+d, s0=3d/4, tau'=87d/rho+7d, r1=r-8d
Params theory_params(int d, double r, double rho);

// laptop-scale package: small exponents so cube verdicts are informative at
// L <= 10; violates several of the asymptotic relations by design
Params desk_params(int d, double r);

struct RelationCheck {
    std::string id;
    bool satisfied;
    double slack;   // rhs - lhs; >= 0 (or > 0 for strict relations) iff satisfied
    bool strict;    // true when equality fails the relation
};

// every admissibility relation, one row each; never throws on violations
std::vector<RelationCheck> params_check(const Params& p);

bool all_satisfied(const std::vector<RelationCheck>& checks);
// smallest even J making the probability bootstrap relation p > alpha d + 2 alpha p / J hold
int smallest_even_bootstrap_order(int d, double p, double alpha);

}  // namespace polyloc
