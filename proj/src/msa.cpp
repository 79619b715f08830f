#include "polyloc/msa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "polyloc/errors.hpp"
#include "polyloc/resolvent.hpp"

namespace polyloc {

long long ScaleSequence::at(int k) const {
    if (k < 0 || k >= static_cast<int>(scales.size()))
        throw std::invalid_argument("ScaleSequence: scale index " + std::to_string(k) +
                                    " out of range");
    return scales[static_cast<size_t>(k)];
}

ScaleSequence scale_sequence(long long L0, double alpha, int kmax, long long cap) {
    if (L0 < 2) throw std::invalid_argument("scale_sequence: L0 must be >= 2");
    if (!(alpha > 1.0)) throw std::invalid_argument("scale_sequence: alpha must be > 1");
    if (kmax < 0) throw std::invalid_argument("scale_sequence: kmax must be >= 0");

    ScaleSequence seq{L0, alpha, {L0}};
    for (int k = 0; k < kmax; ++k) {
        const double prev = static_cast<double>(seq.scales.back());
        const double pw = std::pow(prev, alpha);
        if (pw > static_cast<double>(cap))
            throw ScaleOverflowError("scale_sequence: scale beyond cap after k = " + std::to_string(k),
                                     k);
        // floor of the real power; snap to nearby integers so exact powers
        // like 3^6 are not lost to rounding
        const double rounded = std::round(pw);
        long long next;
        if (std::abs(pw - rounded) < 1e-6 * std::max(1.0, rounded))
            next = static_cast<long long>(rounded);
        else
            next = static_cast<long long>(std::floor(pw));
        if (next <= seq.scales.back())
            throw DegenerateScaleError("scale_sequence: L_" + std::to_string(k + 1) + " = " +
                                       std::to_string(next) + " does not exceed L_" +
                                       std::to_string(k));
        seq.scales.push_back(next);
    }
    return seq;
}

std::vector<double> EnergyGrid::values() const {
    if (points < 2) throw std::invalid_argument("EnergyGrid: need >= 2 points");
    if (!(eta > 0.0)) throw std::invalid_argument("EnergyGrid: eta must be positive");
    std::vector<double> v(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i)
        v[static_cast<size_t>(i)] =
            e0 - eta + 2.0 * eta * static_cast<double>(i) / static_cast<double>(points - 1);
    return v;
}

double EnergyGrid::spacing() const { return 2.0 * eta / static_cast<double>(points - 1); }

EnergyGrid EnergyGrid::refined() const { return EnergyGrid{e0, eta, 2 * points - 1}; }

int covering_scale_index(double eps_prime, const Site& m, const ScaleSequence& scales) {
    if (!(eps_prime > 0.0)) throw std::invalid_argument("covering_scale_index: eps' must be positive");
    const double v = std::pow(static_cast<double>(sup_norm(m)), eps_prime);
    for (int k = 0; k + 1 <= scales.kmax(); ++k)
        if (v < static_cast<double>(scales.at(k + 1))) return k;
    throw std::invalid_argument("covering_scale_index: scales exhausted at |m|^eps' = " +
                                std::to_string(v));
}

Annulus annulus_at_scale(const Site& center, int k, const ScaleSequence& scales, AnnulusVariant v) {
    if (k + 1 > scales.kmax())
        throw std::invalid_argument("annulus_at_scale: needs scales up to k+1");
    const AnnulusRadii rad = annulus_radii(v, scales.at(k), scales.at(k + 1));
    return make_annulus(center, rad.outer, rad.inner);
}

bool event_bad_pair(const Realization& real, double lambda, const HoppingSpec& hopping,
                    const Site& m, const Site& n, int L, const EnergyGrid& grid,
                    const Params& params) {
    if (L < 1) throw std::invalid_argument("event_bad_pair: L must be >= 1");
    if (sup_distance(m, n) <= 2 * L)
        throw std::invalid_argument("event_bad_pair: cubes overlap, need |m - n| > 2L");

    auto shared = std::make_shared<Realization>(real);
    const HamMatrix Hm = assemble_hamiltonian(Cube(m, L), lambda, shared, hopping);
    const HamMatrix Hn = assemble_hamiltonian(Cube(n, L), lambda, shared, hopping);

    for (double E : grid.values()) {
        const CubeVerdict vm = classify_cube(Hm, E, params);
        if (vm.good) continue;
        const CubeVerdict vn = classify_cube(Hn, E, params);
        if (!vn.good) return true;
    }
    return false;
}

WilsonInterval wilson_interval(long long successes, long long trials, double z) {
    if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be positive");
    if (successes < 0 || successes > trials)
        throw std::invalid_argument("wilson_interval: successes out of range");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    WilsonInterval w{std::max(0.0, (center - half) / denom),
                     std::min(1.0, (center + half) / denom)};
    // the score bound is exact at the extremes; do not let roundoff leak past them
    if (successes == 0) w.lo = 0.0;
    if (successes == trials) w.hi = 1.0;
    return w;
}

BadPairTable estimate_bad_pair_probability(const BadPairConfig& cfg) {
    if (cfg.L_list.empty()) throw std::invalid_argument("estimate_bad_pair_probability: empty L list");
    if (cfg.n_samples < 1)
        throw std::invalid_argument("estimate_bad_pair_probability: need n_samples >= 1");
    cfg.dist.validate();

    const int d = cfg.hopping.d;
    struct Task {
        int L_idx;
        long long sample;
    };
    std::vector<Task> tasks;
    tasks.reserve(cfg.L_list.size() * static_cast<size_t>(cfg.n_samples));
    for (size_t li = 0; li < cfg.L_list.size(); ++li)
        for (long long s = 0; s < cfg.n_samples; ++s)
            tasks.push_back(Task{static_cast<int>(li), s});

    std::vector<char> outcome(tasks.size(), 0);
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            const int L = cfg.L_list[static_cast<size_t>(t.L_idx)];
            Site m = Site::origin(d), n = Site::origin(d);
            m[0] = -(L + 1);
            n[0] = L + 1;
            Realization real(cfg.dist, cfg.base_seed + static_cast<std::uint64_t>(t.sample));
            real.ensure(cube_sites(m, L));
            real.ensure(cube_sites(n, L));
            outcome[i] = event_bad_pair(real, cfg.lambda, cfg.hopping, m, n, L, cfg.grid,
                                        cfg.params)
                             ? 1
                             : 0;
        }
    };
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    BadPairTable table;
    size_t base = 0;
    for (size_t li = 0; li < cfg.L_list.size(); ++li) {
        long long hits = 0;
        for (long long s = 0; s < cfg.n_samples; ++s)
            hits += outcome[base + static_cast<size_t>(s)];
        base += static_cast<size_t>(cfg.n_samples);
        const int L = cfg.L_list[li];
        const double p_hat = static_cast<double>(hits) / static_cast<double>(cfg.n_samples);
        const WilsonInterval ci = wilson_interval(hits, cfg.n_samples);
        table.rows.push_back(BadPairRow{L, cfg.n_samples, p_hat, ci.lo, ci.hi,
                                        std::pow(static_cast<double>(L), -2.0 * cfg.params.p)});
    }

    // log-log slope over rows with positive frequency
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& row : table.rows) {
        if (row.p_hat <= 0.0) continue;
        const double x = std::log(static_cast<double>(row.L));
        const double y = std::log(row.p_hat);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    table.loglog_slope =
        cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
    return table;
}

}  // namespace polyloc
