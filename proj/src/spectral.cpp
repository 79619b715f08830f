#include "polyloc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "polyloc/errors.hpp"

namespace polyloc {

namespace {

// first index whose magnitude is within a relative tie-band of the maximum;
// near-ties (symmetric states) must not be decided by solver roundoff
int argmax_magnitude(const Eigen::VectorXd& v) {
    const double m = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) >= m * (1.0 - 1e-12)) return static_cast<int>(i);
    return 0;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    if (v[argmax_magnitude(v)] < 0.0) v = -v;
}

}  // namespace

EigenSystem diagonalize(const HamMatrix& H) {
    const int n = H.size();
    EigenSystem sys;
    sys.ham = std::make_shared<HamMatrix>(H);

    if (H.diagonal()) {
        // exact coordinate eigenbasis; stable order by (value, site index)
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        const Eigen::VectorXd diag = H.mat.diagonal();
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return diag[a] < diag[b]; });
        sys.eigenvalues.resize(n);
        sys.eigenvectors = Eigen::MatrixXd::Zero(n, n);
        sys.centers.reserve(n);
        for (int j = 0; j < n; ++j) {
            sys.eigenvalues[j] = diag[order[j]];
            sys.eigenvectors(order[j], j) = 1.0;
            sys.centers.push_back(H.cube.site(order[j]));
        }
        return sys;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H.mat);
    if (solver.info() != Eigen::Success)
        throw SolverError("diagonalize: eigensolver failed with status " +
                          std::to_string(static_cast<int>(solver.info())));
    sys.eigenvalues = solver.eigenvalues();
    sys.eigenvectors = solver.eigenvectors();

    const double scale = std::max(1.0, sys.eigenvalues.cwiseAbs().maxCoeff());

    // re-orthonormalize numerically degenerate clusters in index order so the
    // basis inside a cluster does not depend on solver internals
    int lo = 0;
    while (lo < n) {
        int hi = lo;
        while (hi + 1 < n && sys.eigenvalues[hi + 1] - sys.eigenvalues[hi] < 1e-10 * scale) ++hi;
        if (hi > lo) {
            for (int j = lo; j <= hi; ++j) {
                auto vj = sys.eigenvectors.col(j);
                for (int k = lo; k < j; ++k)
                    vj -= sys.eigenvectors.col(k).dot(vj) * sys.eigenvectors.col(k);
                const double nrm = vj.norm();
                if (nrm > 0.0) vj /= nrm;
            }
        }
        lo = hi + 1;
    }

    for (int j = 0; j < n; ++j) fix_sign(sys.eigenvectors.col(j));

    // completeness at every site: rows of an orthogonal matrix are unit vectors
    for (int i = 0; i < n; ++i) {
        const double rs = sys.eigenvectors.row(i).squaredNorm();
        if (std::abs(rs - 1.0) > 1e-8)
            throw SolverError("diagonalize: completeness defect " + std::to_string(rs - 1.0) +
                              " at site index " + std::to_string(i));
    }
    // residual spot-check on a deterministic column sample
    {
        const int stride = std::max(1, n / 16);
        for (int j = 0; j < n; j += stride) {
            const double res =
                (H.mat * sys.eigenvectors.col(j) - sys.eigenvalues[j] * sys.eigenvectors.col(j))
                    .norm();
            if (res > 1e-8 * scale)
                throw SolverError("diagonalize: eigenpair residual " + std::to_string(res) +
                                  " at index " + std::to_string(j));
        }
    }

    sys.centers.reserve(n);
    for (int j = 0; j < n; ++j)
        sys.centers.push_back(localization_center(sys.eigenvectors.col(j), H.cube.sites()));
    return sys;
}

Site localization_center(const Eigen::VectorXd& psi, const std::vector<Site>& sites) {
    if (psi.size() != static_cast<Eigen::Index>(sites.size()))
        throw std::invalid_argument("localization_center: length mismatch");
    if (sites.empty()) throw std::invalid_argument("localization_center: empty site list");
    if (psi.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("localization_center: zero vector");
    // sites enumerated lexicographically; near-ties resolve to the first
    return sites[argmax_magnitude(psi)];
}

DecayFit fit_decay_exponent(const Eigen::VectorXd& psi, const Cube& box, const Site& center) {
    if (psi.size() != box.size())
        throw std::invalid_argument("fit_decay_exponent: length mismatch");
    const int R = box.radius();
    const int off = sup_distance(center, box.center());
    // keep a boundary margin of R/8; shells beyond it see box truncation
    const int m_max = static_cast<int>(std::floor(R - off - R / 8.0));
    if (m_max < 5)
        throw InsufficientDataError("fit_decay_exponent: box too small around center");

    std::vector<double> shell_max(static_cast<size_t>(m_max) + 1, 0.0);
    const auto& sites = box.sites();
    for (int i = 0; i < box.size(); ++i) {
        const int m = sup_distance(sites[i], center);
        if (m >= 2 && m <= m_max)
            shell_max[static_cast<size_t>(m)] = std::max(shell_max[static_cast<size_t>(m)], std::abs(psi[i]));
    }

    std::vector<double> xs, ys;
    for (int m = 2; m <= m_max; ++m) {
        if (shell_max[static_cast<size_t>(m)] < 1e-14) continue;  // numerically dead shell
        xs.push_back(std::log(static_cast<double>(m)));
        ys.push_back(std::log(shell_max[static_cast<size_t>(m)]));
    }
    if (xs.size() < 4)
        throw InsufficientDataError("fit_decay_exponent: fewer than 4 usable shells");

    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0;
    const double mean_y = sy / n;
    double ss_tot = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        ss_res += e * e;
        const double dev = ys[i] - mean_y;
        ss_tot += dev * dev;
    }
    const double r2 = ss_tot > 1e-30 ? 1.0 - ss_res / ss_tot : (ss_res < 1e-30 ? 1.0 : 0.0);
    return DecayFit{-slope, r2, static_cast<int>(xs.size())};
}

DecayFit fit_decay_exponent(const EigenSystem& sys, int j) {
    if (j < 0 || j >= sys.size()) throw std::invalid_argument("fit_decay_exponent: index out of range");
    return fit_decay_exponent(sys.eigenvectors.col(j), sys.cube(), sys.centers[static_cast<size_t>(j)]);
}

double sule_term(const Eigen::VectorXd& psi, const std::vector<Site>& sites, const Site& center,
                 double gamma, double eps_prime) {
    if (!(gamma > 0.0)) throw std::invalid_argument("sule_term: gamma must be positive");
    if (psi.size() != static_cast<Eigen::Index>(sites.size()))
        throw std::invalid_argument("sule_term: length mismatch");
    const double denom = std::pow(std::max(1.0, static_cast<double>(sup_norm(center))), eps_prime * gamma);
    double best = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const double w = std::pow(std::max(1.0, static_cast<double>(sup_distance(sites[static_cast<size_t>(i)], center))), gamma);
        best = std::max(best, std::abs(psi[i]) * w);
    }
    return best / denom;
}

SuleReport sule_constant(const EigenSystem& sys, double gamma, double eps_prime) {
    if (!(gamma > 0.0)) throw std::invalid_argument("sule_constant: gamma must be positive");
    if (!(eps_prime >= 1.0 / 3.0 && eps_prime < 0.5))
        std::fprintf(stderr, "[polyloc] warning: eps_prime = %g outside [1/3, 1/2)\n", eps_prime);

    SuleReport rep{gamma, eps_prime, 0.0, {}, {}};
    const auto& sites = sys.cube().sites();
    rep.per_state.reserve(static_cast<size_t>(sys.size()));
    rep.worst_site.reserve(static_cast<size_t>(sys.size()));
    for (int j = 0; j < sys.size(); ++j) {
        const Site& c = sys.centers[static_cast<size_t>(j)];
        const double denom = std::pow(std::max(1.0, static_cast<double>(sup_norm(c))), eps_prime * gamma);
        double best = 0.0;
        int arg = 0;
        const auto psi = sys.eigenvectors.col(j);
        for (int i = 0; i < sys.size(); ++i) {
            const double w = std::pow(std::max(1.0, static_cast<double>(sup_distance(sites[static_cast<size_t>(i)], c))), gamma);
            const double v = std::abs(psi[i]) * w;
            if (v > best) {
                best = v;
                arg = i;
            }
        }
        rep.per_state.push_back(best / denom);
        rep.worst_site.push_back(sites[static_cast<size_t>(arg)]);
        rep.D = std::max(rep.D, best / denom);
    }
    return rep;
}

CubeVerdict maximizer_cube_bad(const EigenSystem& sys, int j, int L, const Params& params) {
    if (j < 0 || j >= sys.size()) throw std::invalid_argument("maximizer_cube_bad: index out of range");
    if (L < 1) throw std::invalid_argument("maximizer_cube_bad: L must be >= 1");
    const Cube& box = sys.cube();
    const Site& c = sys.centers[static_cast<size_t>(j)];
    if (box.radius() - sup_distance(c, box.center()) < 2 * L)
        throw std::invalid_argument("maximizer_cube_bad: cube does not fit in the box with margin L");

    const Cube sub(c, L);
    const HamMatrix Hs =
        assemble_hamiltonian(sub, sys.ham->lambda, sys.ham->realization, sys.ham->hopping);
    Params p = params;
    p.delta = 0.5;
    return classify_cube(Hs, sys.eigenvalues[j], p);
}

CenterCount center_counting(const EigenSystem& sys, int L) {
    if (L < 0) throw std::invalid_argument("center_counting: L must be >= 0");
    CenterCount out{0, {}, 0.0};
    out.sorted_norms.reserve(static_cast<size_t>(sys.size()));
    for (const Site& c : sys.centers) out.sorted_norms.push_back(sup_norm(c));
    std::sort(out.sorted_norms.begin(), out.sorted_norms.end());
    for (int v : out.sorted_norms)
        if (v <= L) ++out.count;
    double cmin = std::numeric_limits<double>::infinity();
    const double inv_d = 1.0 / static_cast<double>(sys.cube().dim());
    for (size_t idx = 0; idx < out.sorted_norms.size(); ++idx) {
        const double jj = static_cast<double>(idx + 1);
        cmin = std::min(cmin, static_cast<double>(out.sorted_norms[idx]) / std::pow(jj, inv_d));
    }
    out.growth_constant = out.sorted_norms.empty() ? 0.0 : cmin;
    return out;
}

}  // namespace polyloc
