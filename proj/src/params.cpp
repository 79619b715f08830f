#include "polyloc/params.hpp"

#include <cmath>

namespace polyloc {

int smallest_even_bootstrap_order(int d, double p, double alpha) {
    for (int J = 2; J <= 1 << 20; J += 2)
        if (p > alpha * d + 2.0 * alpha * p / J) return J;
    return -1;
}

Params theory_params(int d, double r, double rho) {
    Params P;
    P.d = d;
    P.r = r;
    P.rho = rho;
    P.alpha = 6.0;
    P.delta = 0.5;
    P.xi = 2.0;
    P.zeta = 19.0 / 20.0;
    P.p = 13.0 * d;
    P.tau = 29.0 * d / rho + d;
    P.tau_prime = 87.0 * d / rho + 7.0 * d;
    P.s0 = 0.75 * d;
    P.r1 = r - 8.0 * d;
    P.kappa = 1.0;
    P.J = smallest_even_bootstrap_order(d, P.p, P.alpha);
    P.q = r / 1600.0;
    P.theta = r / 160.0;
    P.gamma = r / 160.0;
    P.eps_prime = 1.0 / 3.0;
    return P;
}

Params desk_params(int d, double r) {
    Params P;
    P.d = d;
    P.r = r;
    P.rho = 1.0;
    P.alpha = 2.0;
    P.delta = 0.5;
    P.xi = 2.0;
    P.zeta = 19.0 / 20.0;
    P.p = 2.0;
    P.tau = 3.0;
    P.tau_prime = 3.125;  // calibrated so verdicts are informative at L <= 10
    P.s0 = 0.75 * d;
    P.r1 = r - 2.0 * d;
    P.kappa = 1.0;
    P.J = 24;
    P.q = 2.0;
    P.theta = 2.0;
    P.gamma = 2.0;
    P.eps_prime = 1.0 / 3.0;
    return P;
}

namespace {

void add(std::vector<RelationCheck>& out, std::string id, double slack, bool strict) {
    const bool ok = strict ? slack > 0.0 : slack >= 0.0;
    out.push_back(RelationCheck{std::move(id), ok, slack, strict});
}

}  // namespace

std::vector<RelationCheck> params_check(const Params& P) {
    std::vector<RelationCheck> out;
    const double d = P.d;

    // domain constraints
    add(out, "domain_alpha", P.alpha - 1.0, true);
    add(out, "domain_delta_lo", P.delta, true);
    add(out, "domain_delta_hi", 1.0 - P.delta, true);
    add(out, "domain_xi", P.xi, true);
    add(out, "domain_tau", P.tau - 1.0, true);
    add(out, "domain_tau_prime", P.tau_prime - 1.0, true);
    add(out, "domain_r1", P.r1 - 1.0, true);
    add(out, "domain_rho", P.rho, true);
    add(out, "kappa_positive", P.kappa, true);
    add(out, "domain_p", P.p, true);
    add(out, "bootstrap_order_even", (P.J > 0 && P.J % 2 == 0) ? 1.0 : -1.0, true);

    // norm window: d/2 < s0 <= r1 < r - d/2
    add(out, "window_s0_above_half_d", P.s0 - d / 2.0, true);
    add(out, "window_s0_below_r1", P.r1 - P.s0, false);
    add(out, "window_r1_below_r", (P.r - d / 2.0) - P.r1, true);

    // scale-induction triple
    add(out, "induction_decay", -(-(1.0 - P.delta) * P.r1 + P.tau_prime + 2.0 * P.s0), true);
    add(out, "induction_annulus",
        -(-P.xi * P.r1 + P.tau_prime + P.alpha * P.tau + (3.0 + P.delta + 4.0 * P.xi) * P.s0), true);
    add(out, "induction_threshold",
        P.tau_prime - ((2.0 * P.tau_prime + 2.0 * P.alpha * P.tau +
                        (5.0 + 4.0 * P.xi + 2.0 * P.delta) * P.s0) / P.alpha + P.s0), true);

    // small-interval regularity vs probability target
    add(out, "tau_above_probability_load", P.tau - (2.0 * P.p + (2.0 + P.rho) * d) / P.rho, true);

    // scale-compatibility pair
    add(out, "xi_alpha_vs_delta", P.delta - (1.0 + P.xi) / P.alpha, false);
    add(out, "bootstrap_moment",
        P.J > 0 ? P.p - (P.alpha * d + 2.0 * P.alpha * P.p / P.J) : -1.0, true);

    // off-diagonal decay window
    add(out, "zeta_above_delta", P.zeta - P.delta, true);
    add(out, "zeta_below_one", 1.0 - P.zeta, true);
    add(out, "decay_margin", (P.zeta - P.delta) * P.r1 - P.tau_prime, true);

    // reporting exponents
    add(out, "moment_exponent", P.r / 1600.0 - P.q, false);
    add(out, "moment_positive", P.q, true);
    add(out, "moment_vs_gamma", P.gamma / 10.0 - P.q, false);
    add(out, "initial_decay", P.theta - P.r / 160.0, false);
    add(out, "sule_gamma_lo", P.gamma, false);
    add(out, "sule_gamma_hi", P.r / 160.0 - P.gamma, false);
    add(out, "sule_eps_lo", P.eps_prime - 1.0 / 3.0, false);
    add(out, "sule_eps_hi", 0.5 - P.eps_prime, true);

    return out;
}

bool all_satisfied(const std::vector<RelationCheck>& checks) {
    for (const auto& c : checks)
        if (!c.satisfied) return false;
    return true;
}

}  // namespace polyloc
