#include "polyloc/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "polyloc/errors.hpp"

namespace polyloc {

GreenMatrix green_function(const HamMatrix& H, double E) {
    const int n = H.size();
    Eigen::MatrixXd A = H.mat;
    A.diagonal().array() -= E;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::MatrixXd G = lu.solve(Eigen::MatrixXd::Identity(n, n));

    const double a_inf = A.cwiseAbs().rowwise().sum().maxCoeff();
    const double g_inf = G.cwiseAbs().rowwise().sum().maxCoeff();
    const double cond = a_inf * g_inf;

    const double residual = (A * G - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-8)
        throw SingularResolventError("green_function: energy on or too close to the spectrum, residual " +
                                         std::to_string(residual),
                                     cond);

    const double asym = (G - G.transpose()).cwiseAbs().maxCoeff();
    G = ((G + G.transpose()) * 0.5).eval();
    return GreenMatrix{H.cube, E, std::move(G), cond, asym};
}

SobolevProfile::SobolevProfile(const Eigen::MatrixXd& m, const std::vector<Site>& rows,
                               const std::vector<Site>& cols) {
    if (m.rows() != static_cast<Eigen::Index>(rows.size()) ||
        m.cols() != static_cast<Eigen::Index>(cols.size()))
        throw std::invalid_argument("SobolevProfile: matrix/site-list shape mismatch");
    if (rows.empty() || cols.empty())
        throw std::invalid_argument("SobolevProfile: empty site list");
    const int d = rows[0].dim();
    if (cols[0].dim() != d) throw std::invalid_argument("SobolevProfile: dimension mismatch");

    // dense displacement table: k = row - col, radix layout per coordinate
    std::vector<int> kmin(d, 0), kspan(d, 0);
    long long total = 1;
    for (int c = 0; c < d; ++c) {
        int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
        for (const Site& sr : rows) {
            lo = std::min(lo, sr[c]);
            hi = std::max(hi, sr[c]);
        }
        int clo = std::numeric_limits<int>::max(), chi = std::numeric_limits<int>::min();
        for (const Site& sc : cols) {
            clo = std::min(clo, sc[c]);
            chi = std::max(chi, sc[c]);
        }
        kmin[c] = lo - chi;
        kspan[c] = (hi - clo) - kmin[c] + 1;
        total *= kspan[c];
        if (total > (1LL << 28)) throw std::invalid_argument("SobolevProfile: displacement table too large");
    }

    std::vector<double> sup(static_cast<size_t>(total), 0.0);
    std::vector<int> shell(static_cast<size_t>(total), 0);
    {
        // precompute the shell (sup-norm) of each displacement cell once
        std::vector<int> k(d, 0);
        for (long long idx = 0; idx < total; ++idx) {
            long long rem = idx;
            int nrm = 0;
            for (int c = d - 1; c >= 0; --c) {
                k[c] = kmin[c] + static_cast<int>(rem % kspan[c]);
                rem /= kspan[c];
                nrm = std::max(nrm, std::abs(k[c]));
            }
            shell[static_cast<size_t>(idx)] = nrm;
        }
    }

    const size_t nr = rows.size(), nc = cols.size();
    for (size_t i = 0; i < nr; ++i) {
        for (size_t j = 0; j < nc; ++j) {
            long long idx = 0;
            for (int c = 0; c < d; ++c)
                idx = idx * kspan[c] + (rows[i][c] - cols[j][c] - kmin[c]);
            const double v = std::abs(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            if (v > sup[static_cast<size_t>(idx)]) sup[static_cast<size_t>(idx)] = v;
        }
    }

    int max_shell = 0;
    for (long long idx = 0; idx < total; ++idx)
        if (sup[static_cast<size_t>(idx)] > 0.0) max_shell = std::max(max_shell, shell[static_cast<size_t>(idx)]);
    shell_ssq_.assign(static_cast<size_t>(max_shell) + 1, 0.0);
    for (long long idx = 0; idx < total; ++idx) {
        const double v = sup[static_cast<size_t>(idx)];
        if (v > 0.0) shell_ssq_[static_cast<size_t>(shell[static_cast<size_t>(idx)])] += v * v;
    }
}

double SobolevProfile::norm(double s, double c0) const {
    if (!(c0 > 0.0)) throw std::invalid_argument("SobolevProfile: c0 must be positive");
    double acc = 0.0;
    for (size_t m = 0; m < shell_ssq_.size(); ++m) {
        if (shell_ssq_[m] == 0.0) continue;
        const double w = std::max(1.0, static_cast<double>(m));
        acc += shell_ssq_[m] * std::pow(w, 2.0 * s);
    }
    return std::sqrt(c0 * acc);
}

double sobolev_matrix_norm(const Eigen::MatrixXd& m, const std::vector<Site>& rows,
                           const std::vector<Site>& cols, double s, double c0) {
    return SobolevProfile(m, rows, cols).norm(s, c0);
}

CubeVerdict classify_cube(const HamMatrix& H, double E, const Params& params) {
    const int L = H.cube.radius();
    if (L < 1) throw std::invalid_argument("classify_cube: cube radius must be >= 1");
    if (!(params.d / 2.0 < params.s0 && params.s0 <= params.r1))
        throw std::invalid_argument("classify_cube: norm window requires d/2 < s0 <= r1");

    const double logL = std::log(static_cast<double>(L));
    const double inf = std::numeric_limits<double>::infinity();
    CubeVerdict v{H.cube.id(), E, false, inf, inf};
    try {
        const GreenMatrix G = green_function(H, E);
        const SobolevProfile prof(G.entries, H.cube.sites(), H.cube.sites());
        v.margin_s0 = std::log(prof.norm(params.s0)) - (params.tau_prime + params.delta * params.s0) * logL;
        v.margin_r1 = std::log(prof.norm(params.r1)) - (params.tau_prime + params.delta * params.r1) * logL;
        v.good = v.margin_s0 <= 0.0 && v.margin_r1 <= 0.0;
    } catch (const SingularResolventError&) {
        // singular resolvent: no finite norm, cube cannot be good
    }
    return v;
}

DecayCheck offdiag_decay_check(const GreenMatrix& G, const Params& params) {
    if (!(params.zeta > params.delta && params.zeta < 1.0))
        throw std::invalid_argument("offdiag_decay_check: requires delta < zeta < 1");
    if (!((params.zeta - params.delta) * params.r1 - params.tau_prime > 0.0))
        throw std::invalid_argument("offdiag_decay_check: requires tau' < (zeta - delta) r1");

    const auto& sites = G.cube.sites();
    const int n = static_cast<int>(sites.size());
    const double expo = (1.0 - params.zeta) * params.r1;
    const double half_L = G.cube.radius() / 2.0;

    DecayCheck out{true, std::numeric_limits<double>::infinity(), Site{}, Site{}, 0};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int dist = sup_distance(sites[i], sites[j]);
            if (dist < half_L || dist == 0) continue;
            const double bound = std::pow(static_cast<double>(dist), -expo);
            const double margin = bound - std::abs(G.entries(i, j));
            ++out.pairs_checked;
            if (margin < out.worst_margin) {
                out.worst_margin = margin;
                out.worst_from = sites[i];
                out.worst_to = sites[j];
            }
        }
    }
    if (out.pairs_checked == 0) out.worst_margin = 0.0;
    out.holds = out.worst_margin >= 0.0;
    return out;
}

double poisson_residual(const HamMatrix& big, double E, const Eigen::VectorXd& psi,
                        const Cube& sub) {
    const Cube& B = big.cube;
    if (psi.size() != B.size())
        throw std::invalid_argument("poisson_residual: eigenvector length mismatch");
    if (sub.dim() != B.dim())
        throw std::invalid_argument("poisson_residual: dimension mismatch");
    for (const Site& s : sub.sites())
        if (!B.contains(s))
            throw std::invalid_argument("poisson_residual: sub-cube leaves the enclosing cube");
    if (sub.size() >= B.size())
        throw std::invalid_argument("poisson_residual: sub-cube must have nonempty exterior");

    const double eig_res = (big.mat * psi - E * psi).norm();
    const double scale = std::max(1.0, big.mat.cwiseAbs().maxCoeff());
    if (eig_res > 1e-10 * scale)
        throw std::invalid_argument("poisson_residual: (E, psi) is not an eigenpair, residual " +
                                    std::to_string(eig_res));

    // restriction of H to the sub-cube, same realization
    const HamMatrix Hs = assemble_hamiltonian(sub, big.lambda, big.realization, big.hopping);
    const GreenMatrix G = green_function(Hs, E);  // SingularResolventError propagates

    const auto& sub_sites = sub.sites();
    const auto& big_sites = B.sites();
    const int ns = sub.size();

    // w(n') = sum over exterior sites n'' of T(n', n'') psi(n'')
    Eigen::VectorXd w = Eigen::VectorXd::Zero(ns);
    for (int b = 0; b < B.size(); ++b) {
        if (sub.contains(big_sites[b])) continue;
        const double amp = psi[b];
        if (amp == 0.0) continue;
        for (int i = 0; i < ns; ++i)
            w[i] += hopping_entry(sub_sites[i], big_sites[b], big.hopping) * amp;
    }

    Eigen::VectorXd predicted = -big.inv_lambda() * (G.entries * w);
    double worst = 0.0;
    for (int i = 0; i < ns; ++i) {
        const int bi = B.index_of(sub_sites[i]);
        worst = std::max(worst, std::abs(psi[bi] - predicted[i]));
    }
    return worst;
}

}  // namespace polyloc
