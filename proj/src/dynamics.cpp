#include "polyloc/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace polyloc {

State power_law_state(double theta, const Cube& cube, bool normalize) {
    if (!(theta > 0.0)) throw std::invalid_argument("power_law_state: theta must be positive");
    if (theta <= cube.dim() / 2.0)
        std::fprintf(stderr,
                     "[polyloc] warning: theta = %g <= d/2, state is not square-summable on Z^d\n",
                     theta);
    State st{cube, Eigen::VectorXcd(cube.size()), 0.0};
    const auto& sites = cube.sites();
    for (int i = 0; i < cube.size(); ++i)
        st.amp[i] = std::pow(std::max(1.0, static_cast<double>(sup_norm(sites[i]))), -theta);
    if (normalize) st.amp /= st.amp.norm();
    st.norm0 = st.amp.norm();
    return st;
}

State delta_state(const Cube& cube, const Site& at) {
    const int idx = cube.index_of(at);
    if (idx < 0) throw std::invalid_argument("delta_state: site outside the cube");
    State st{cube, Eigen::VectorXcd::Zero(cube.size()), 1.0};
    st.amp[idx] = 1.0;
    return st;
}

double power_law_bound_constant(const State& phi, double theta) {
    double best = 0.0;
    const auto& sites = phi.cube.sites();
    for (int i = 0; i < phi.cube.size(); ++i)
        best = std::max(best, std::abs(phi.amp[i]) *
                                  std::pow(std::max(1.0, static_cast<double>(sup_norm(sites[i]))), theta));
    return best;
}

State evolve(const EigenSystem& sys, const State& phi, double t) {
    if (!(phi.cube == sys.cube()))
        throw std::invalid_argument("evolve: state and system live on different cubes");
    const Eigen::VectorXcd coeff = sys.eigenvectors.transpose() * phi.amp;
    Eigen::VectorXcd rotated(coeff.size());
    for (Eigen::Index j = 0; j < coeff.size(); ++j) {
        const double ph = -sys.eigenvalues[j] * t;
        rotated[j] = coeff[j] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    State out{phi.cube, sys.eigenvectors * rotated, phi.norm0};
    return out;
}

namespace {

// index-ascending pairwise reduction; deterministic and accurate on long sums
double pairwise_sum(const double* data, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

}  // namespace

double moment(const State& u, double q) {
    if (!(q >= 0.0)) throw std::invalid_argument("moment: q must be >= 0");
    const auto& sites = u.cube.sites();
    std::vector<double> terms(static_cast<size_t>(u.cube.size()));
    for (int i = 0; i < u.cube.size(); ++i) {
        const double prob = std::norm(u.amp[i]);
        if (q == 0.0) {
            terms[static_cast<size_t>(i)] = prob;
            continue;
        }
        const int nrm = sup_norm(sites[i]);
        terms[static_cast<size_t>(i)] =
            nrm == 0 ? 0.0 : std::pow(static_cast<double>(nrm), q) * prob;
    }
    return pairwise_sum(terms.data(), terms.size());
}

double sobolev_seq_norm(const State& u, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("sobolev_seq_norm: s must be >= 0");
    const auto& sites = u.cube.sites();
    std::vector<double> terms(static_cast<size_t>(u.cube.size()));
    for (int i = 0; i < u.cube.size(); ++i) {
        const double w = std::pow(1.0 + static_cast<double>(sup_norm(sites[i])), 2.0 * s);
        terms[static_cast<size_t>(i)] = w * std::norm(u.amp[i]);
    }
    return std::sqrt(pairwise_sum(terms.data(), terms.size()));
}

MomentSeries moment_trajectory(const EigenSystem& sys, const State& phi,
                               const std::vector<double>& times, double q, double s) {
    MomentSeries out;
    out.q = q;
    out.s = s;
    const Cube& box = phi.cube;
    const int margin_radius = static_cast<int>(std::ceil(box.radius() * 7.0 / 8.0));
    for (size_t ti = 0; ti < times.size(); ++ti) {
        const State u = evolve(sys, phi, times[ti]);
        out.times.push_back(times[ti]);
        out.moment_q.push_back(moment(u, q));
        out.hs_norm.push_back(sobolev_seq_norm(u, s));
        out.norm_drift.push_back(std::abs(u.norm() - phi.norm0));
        double edge = 0.0;
        const auto& sites = box.sites();
        for (int i = 0; i < box.size(); ++i)
            if (sup_distance(sites[i], box.center()) > margin_radius) edge += std::norm(u.amp[i]);
        out.boundary_mass.push_back(edge);
        if (out.first_contaminated < 0 && edge > 1e-6) out.first_contaminated = static_cast<int>(ti);
        out.sup_moment = std::max(out.sup_moment, out.moment_q.back());
    }
    return out;
}

State rk4_propagate(const HamMatrix& H, const State& phi, double t, double dt) {
    if (!(phi.cube == H.cube))
        throw std::invalid_argument("rk4_propagate: state and operator live on different cubes");
    if (!(dt > 0.0) || !(t >= 0.0)) throw std::invalid_argument("rk4_propagate: need t >= 0, dt > 0");
    const double row_bound = H.mat.cwiseAbs().rowwise().sum().maxCoeff();
    if (dt > 0.1 / std::max(row_bound, 1e-300))
        throw std::invalid_argument("rk4_propagate: dt exceeds 0.1 / ||H||");

    State u = phi;
    if (t == 0.0) return u;
    const long long steps = static_cast<long long>(std::ceil(t / dt));
    const double h = t / static_cast<double>(steps);
    const std::complex<double> mih(0.0, -1.0);  // u' = -i H u
    Eigen::VectorXcd k1, k2, k3, k4;
    for (long long s_i = 0; s_i < steps; ++s_i) {
        k1 = mih * (H.mat * u.amp);
        k2 = mih * (H.mat * (u.amp + 0.5 * h * k1));
        k3 = mih * (H.mat * (u.amp + 0.5 * h * k2));
        k4 = mih * (H.mat * (u.amp + h * k3));
        u.amp += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return u;
}

}  // namespace polyloc
