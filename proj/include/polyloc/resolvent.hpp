#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "polyloc/hamiltonian.hpp"
#include "polyloc/params.hpp"

namespace polyloc {

struct GreenMatrix {
    Cube cube;
    double energy;
    Eigen::MatrixXd entries;     // symmetrized
    double condition_estimate;   // inf-norm based
    double asymmetry;            // max |G - G^T| before symmetrization
};

// (H - E)^-1 with a residual acceptance test; throws SingularResolventError
// when E sits numerically on the spectrum
GreenMatrix green_function(const HamMatrix& H, double E);

// Displacement profile of a matrix indexed by two site lists: for each
// displacement k the largest |M(x1,x2)| over pairs with x1 - x2 = k,
// aggregated into sup-norm shells. Norm evaluation at any order s is then
// O(#shells).
class SobolevProfile {
public:
    SobolevProfile(const Eigen::MatrixXd& m, const std::vector<Site>& rows,
                   const std::vector<Site>& cols);

    // ||M||_s = sqrt(c0 * sum_k sup^2(k) <k>^2s), <k> = max(1, |k|)
    double norm(double s, double c0 = 1.0) const;
    const std::vector<double>& shell_sumsq() const { return shell_ssq_; }

private:
    std::vector<double> shell_ssq_;
};

double sobolev_matrix_norm(const Eigen::MatrixXd& m, const std::vector<Site>& rows,
                           const std::vector<Site>& cols, double s, double c0 = 1.0);

struct CubeVerdict {
    std::string cube_id;
    double energy;
    bool good;
    // log||G||_s - (tau' + delta s) log L at the two window endpoints;
    // +inf when the resolvent is singular
    double margin_s0;
    double margin_r1;
};

// Good iff ||G(E)||_s <= L^(tau' + delta s) across the window [s0, r1].
// log||G||_s is convex in s and the threshold is affine, so the two endpoint
// checks decide the whole window.
CubeVerdict classify_cube(const HamMatrix& H, double E, const Params& params);

struct DecayCheck {
    bool holds;
    double worst_margin;  // min over checked pairs of bound - |G|, <0 when violated
    Site worst_from;
    Site worst_to;
    int pairs_checked;
};

// |G(n', n'')| <= |n' - n''|^-(1-zeta) r1 over pairs with |n' - n''| >= L/2
DecayCheck offdiag_decay_check(const GreenMatrix& G, const Params& params);

// Defect of the interior/exterior splitting identity for an eigenpair of the
// enclosing cube: max_n |psi(n) + lambda^-1 sum_{n' in sub} G_sub(n,n')
// sum_{n'' outside sub} T(n',n'') psi(n'')|.
double poisson_residual(const HamMatrix& big, double E, const Eigen::VectorXd& psi,
                        const Cube& sub);

}  // namespace polyloc
