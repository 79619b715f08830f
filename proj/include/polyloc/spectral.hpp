#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "polyloc/hamiltonian.hpp"
#include "polyloc/params.hpp"
#include "polyloc/resolvent.hpp"

namespace polyloc {

struct DecayFit {
    double gamma_hat;   // fitted power-law exponent of the shell maxima
    double r2;          // fit quality on the log-log model
    int shells_used;
};

struct EigenSystem {
    std::shared_ptr<const HamMatrix> ham;
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns, sign-normalized
    std::vector<Site> centers;     // argmax |psi_j|, lexicographic tie-break

    int size() const { return static_cast<int>(eigenvalues.size()); }
    const Cube& cube() const { return ham->cube; }
};

// Dense symmetric diagonalization with a deterministic basis convention:
// eigenvalues ascending; within numerically degenerate clusters the vectors
// are re-orthonormalized in order; each vector's largest-magnitude entry is
// made positive (first index on ties). The pure-diagonal sentinel bypasses
// the solver (exact coordinate eigenbasis, stable sort by value then site).
EigenSystem diagonalize(const HamMatrix& H);

Site localization_center(const Eigen::VectorXd& psi, const std::vector<Site>& sites);

// Log-log least squares of shell maxima of |psi| against shell radius,
// shells 2..m_max around the center, m_max keeping a box-boundary margin of
// one eighth of the box radius; shells with maxima below 1e-14 are skipped.
// Fewer than 4 usable shells -> InsufficientDataError.
DecayFit fit_decay_exponent(const Eigen::VectorXd& psi, const Cube& box, const Site& center);
DecayFit fit_decay_exponent(const EigenSystem& sys, int j);

// sup_n |psi(n)| max(1,|n - center|)^gamma / max(1,|center|)^(eps' gamma)
double sule_term(const Eigen::VectorXd& psi, const std::vector<Site>& sites, const Site& center,
                 double gamma, double eps_prime);

struct SuleReport {
    double gamma;
    double eps_prime;
    double D;                       // max over states
    std::vector<double> per_state;
    std::vector<Site> worst_site;   // attaining site per state
};

SuleReport sule_constant(const EigenSystem& sys, double gamma, double eps_prime);

// Classifies the cube of radius L around the j-th localization center at
// E = E_j with slope reserve 1/2; the cube must fit in the box with margin
// >= L. Localized states put E_j essentially on the sub-spectrum, so the
// verdict is expected bad.
CubeVerdict maximizer_cube_bad(const EigenSystem& sys, int j, int L, const Params& params);

struct CenterCount {
    long long count;                // #{j : |center_j| <= L}
    std::vector<int> sorted_norms;  // all |center_j|, ascending
    double growth_constant;         // min_j |n_(j)| / j^(1/d), 1-based j
};

CenterCount center_counting(const EigenSystem& sys, int L);

}  // namespace polyloc
