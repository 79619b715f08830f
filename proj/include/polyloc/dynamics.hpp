#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "polyloc/spectral.hpp"

namespace polyloc {

struct State {
    Cube cube;
    Eigen::VectorXcd amp;
    double norm0;  // norm recorded at creation

    double norm() const { return amp.norm(); }
};

// phi(n) = max(1, |n|)^-theta on the cube (distance from the origin);
// theta <= d/2 is accepted with a non-square-summable warning
State power_law_state(double theta, const Cube& cube, bool normalize = true);
State delta_state(const Cube& cube, const Site& at);
// sup_n |phi(n)| max(1, |n|)^theta
double power_law_bound_constant(const State& phi, double theta);

// u(t) = sum_j e^{-i E_j t} <psi_j, phi> psi_j
State evolve(const EigenSystem& sys, const State& phi, double t);

// M_q = sum |n|^q |u(n)|^2 with the origin contributing 0 for q > 0;
// q = 0 gives the squared norm
double moment(const State& u, double q);

// (sum (1 + |n|)^2s |u(n)|^2)^1/2
double sobolev_seq_norm(const State& u, double s);

struct MomentSeries {
    double q;
    double s;
    std::vector<double> times;
    std::vector<double> moment_q;
    std::vector<double> hs_norm;
    std::vector<double> norm_drift;
    std::vector<double> boundary_mass;  // mass within R/8 of the box boundary
    int first_contaminated = -1;        // first index with boundary mass > 1e-6, -1 if none
    double sup_moment = 0.0;
};

MomentSeries moment_trajectory(const EigenSystem& sys, const State& phi,
                               const std::vector<double>& times, double q, double s);

// classical RK4 on i u' = H u, fixed step <= dt; cross-check oracle for evolve.
// Requires dt <= 0.1 / ||H|| (Gershgorin row-sum estimate).
State rk4_propagate(const HamMatrix& H, const State& phi, double t, double dt);

}  // namespace polyloc
