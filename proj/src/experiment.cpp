#include "polyloc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "polyloc/csv.hpp"
#include "polyloc/errors.hpp"
#include "polyloc/resolvent.hpp"
#include "polyloc/version.hpp"

namespace polyloc {

namespace {

using nlohmann::json;

std::string join_path(const std::string& base, const std::string& key) {
    return base + "/" + key;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("expected an object", path);
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError("unknown key '" + item.key() + "'", path);
    }
}

const json& require(const json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(std::string("missing key '") + key + "'", path);
    return *it;
}

double get_num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("expected a number", path);
    return j.get<double>();
}

long long get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError("expected an integer", path);
    return j.get<long long>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError("expected a boolean", path);
    return j.get<bool>();
}

std::string get_str(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError("expected a string", path);
    return j.get<std::string>();
}

std::vector<double> get_num_list(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError("expected a non-empty array", path);
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(get_num(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Site get_site(const json& j, const std::string& path, int d) {
    if (!j.is_array() || static_cast<int>(j.size()) != d)
        throw ConfigError("expected an array of " + std::to_string(d) + " integers", path);
    Site s = Site::origin(d);
    for (int i = 0; i < d; ++i)
        s[i] = static_cast<int>(get_int(j[static_cast<size_t>(i)], path + "[" + std::to_string(i) + "]"));
    return s;
}

DistributionSpec parse_distribution(const json& j, const std::string& path) {
    check_keys(j, path, {"kind", "M", "points", "weights", "table"});
    const std::string kind = get_str(require(j, path, "kind"), join_path(path, "kind"));
    const double M = get_num(require(j, path, "M"), join_path(path, "M"));
    try {
        if (kind == "uniform") {
            check_keys(j, path, {"kind", "M"});
            return DistributionSpec::uniform_on(M);
        }
        if (kind == "discrete-grid") {
            check_keys(j, path, {"kind", "M", "points", "weights"});
            return DistributionSpec::discrete(
                get_num_list(require(j, path, "points"), join_path(path, "points")),
                get_num_list(require(j, path, "weights"), join_path(path, "weights")), M);
        }
        if (kind == "table-inverse-cdf") {
            check_keys(j, path, {"kind", "M", "table"});
            return DistributionSpec::from_table(
                get_num_list(require(j, path, "table"), join_path(path, "table")), M);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), path);
    }
    throw ConfigError("unknown distribution kind '" + kind + "'", join_path(path, "kind"));
}

json distribution_json(const DistributionSpec& d) {
    json j;
    j["M"] = d.half_width;
    switch (d.kind) {
        case DistKind::uniform:
            j["kind"] = "uniform";
            break;
        case DistKind::discrete_grid:
            j["kind"] = "discrete-grid";
            j["points"] = d.points;
            j["weights"] = d.weights;
            break;
        case DistKind::table_inverse_cdf:
            j["kind"] = "table-inverse-cdf";
            j["table"] = d.table;
            break;
    }
    return j;
}

struct ParamOverride {
    const char* key;
    double Params::*field;
};

constexpr ParamOverride kParamFields[] = {
    {"alpha", &Params::alpha},   {"delta", &Params::delta},
    {"xi", &Params::xi},         {"zeta", &Params::zeta},
    {"p", &Params::p},           {"tau", &Params::tau},
    {"tau_prime", &Params::tau_prime}, {"s0", &Params::s0},
    {"r1", &Params::r1},         {"rho", &Params::rho},
    {"kappa", &Params::kappa},   {"q", &Params::q},
    {"theta", &Params::theta},   {"gamma", &Params::gamma},
    {"eps_prime", &Params::eps_prime},
};

Params parse_params(const json& j, const std::string& path, int d, double r, bool allow_rd) {
    std::vector<const char*> allowed = {"preset", "J"};
    for (const auto& f : kParamFields) allowed.push_back(f.key);
    if (allow_rd) {
        allowed.push_back("r");
        allowed.push_back("d");
    }
    if (!j.is_object()) throw ConfigError("expected an object", path);
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                ok = true;
                break;
            }
        if (!ok) {
            if ((item.key() == "r" || item.key() == "d") && !allow_rd)
                throw ConfigError("'" + item.key() + "' is set by operator/geometry", path);
            throw ConfigError("unknown key '" + item.key() + "'", path);
        }
    }

    if (allow_rd) {
        if (j.contains("d")) d = static_cast<int>(get_int(j["d"], join_path(path, "d")));
        if (j.contains("r")) r = get_num(j["r"], join_path(path, "r"));
    }
    if (d < 1) throw ConfigError("d must be >= 1", path);

    double rho = 1.0;
    if (j.contains("rho")) rho = get_num(j["rho"], join_path(path, "rho"));

    std::string preset = "desk";
    if (j.contains("preset")) preset = get_str(j["preset"], join_path(path, "preset"));
    Params P;
    if (preset == "desk") {
        P = desk_params(d, r);
        P.rho = rho;
    } else if (preset == "theory") {
        P = theory_params(d, r, rho);
    } else {
        throw ConfigError("unknown preset '" + preset + "'", join_path(path, "preset"));
    }

    for (const auto& f : kParamFields)
        if (j.contains(f.key)) P.*(f.field) = get_num(j[f.key], join_path(path, f.key));
    if (j.contains("J")) P.J = static_cast<int>(get_int(j["J"], join_path(path, "J")));
    return P;
}

json params_json(const Params& P) {
    json j;
    j["alpha"] = P.alpha;
    j["delta"] = P.delta;
    j["xi"] = P.xi;
    j["zeta"] = P.zeta;
    j["p"] = P.p;
    j["tau"] = P.tau;
    j["tau_prime"] = P.tau_prime;
    j["s0"] = P.s0;
    j["r1"] = P.r1;
    j["rho"] = P.rho;
    j["kappa"] = P.kappa;
    j["J"] = P.J;
    j["r"] = P.r;
    j["d"] = P.d;
    j["q"] = P.q;
    j["theta"] = P.theta;
    j["gamma"] = P.gamma;
    j["eps_prime"] = P.eps_prime;
    return j;
}

std::vector<double> parse_times(const json& j, const std::string& path) {
    check_keys(j, path, {"kind", "t0", "t1", "count", "factor", "values"});
    const std::string kind = get_str(require(j, path, "kind"), join_path(path, "kind"));
    std::vector<double> out;
    if (kind == "linear") {
        check_keys(j, path, {"kind", "t0", "t1", "count"});
        const double t0 = get_num(require(j, path, "t0"), join_path(path, "t0"));
        const double t1 = get_num(require(j, path, "t1"), join_path(path, "t1"));
        const long long count = get_int(require(j, path, "count"), join_path(path, "count"));
        if (count < 1) throw ConfigError("count must be >= 1", join_path(path, "count"));
        for (long long i = 0; i < count; ++i)
            out.push_back(count == 1 ? t0
                                     : t0 + (t1 - t0) * static_cast<double>(i) /
                                               static_cast<double>(count - 1));
    } else if (kind == "geometric") {
        check_keys(j, path, {"kind", "t0", "factor", "count"});
        const double t0 = get_num(require(j, path, "t0"), join_path(path, "t0"));
        const double factor = get_num(require(j, path, "factor"), join_path(path, "factor"));
        const long long count = get_int(require(j, path, "count"), join_path(path, "count"));
        if (!(t0 > 0.0) || !(factor > 1.0))
            throw ConfigError("geometric grid needs t0 > 0 and factor > 1", path);
        double t = t0;
        for (long long i = 0; i < count; ++i, t *= factor) out.push_back(t);
    } else if (kind == "list") {
        check_keys(j, path, {"kind", "values"});
        out = get_num_list(require(j, path, "values"), join_path(path, "values"));
    } else {
        throw ConfigError("unknown time grid kind '" + kind + "'", join_path(path, "kind"));
    }
    for (double t : out)
        if (!(t >= 0.0)) throw ConfigError("times must be >= 0", path);
    return out;
}

}  // namespace

std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::spectrum: return "spectrum";
        case ExperimentKind::sule: return "sule";
        case ExperimentKind::dynamics: return "dynamics";
        case ExperimentKind::msa_prob: return "msa-prob";
        case ExperimentKind::goodbad: return "goodbad";
        case ExperimentKind::params_check: return "params-check";
    }
    return "?";
}

ExperimentConfig parse_experiment_config(const json& j) {
    const std::string root = "$";
    if (!j.is_object()) throw ConfigError("config must be a JSON object", root);
    const std::string kind = get_str(require(j, root, "kind"), join_path(root, "kind"));

    ExperimentConfig cfg;
    if (kind == "spectrum") cfg.kind = ExperimentKind::spectrum;
    else if (kind == "sule") cfg.kind = ExperimentKind::sule;
    else if (kind == "dynamics") cfg.kind = ExperimentKind::dynamics;
    else if (kind == "msa-prob") cfg.kind = ExperimentKind::msa_prob;
    else if (kind == "goodbad") cfg.kind = ExperimentKind::goodbad;
    else if (kind == "params-check") cfg.kind = ExperimentKind::params_check;
    else throw ConfigError("unknown kind '" + kind + "'", join_path(root, "kind"));

    if (cfg.kind == ExperimentKind::params_check) {
        check_keys(j, root, {"kind", "params", "output_dir"});
        cfg.params = parse_params(require(j, root, "params"), join_path(root, "params"), 1, 8.0,
                                  /*allow_rd=*/true);
        cfg.d = cfg.params.d;
        cfg.op.d = cfg.params.d;
        cfg.op.r = cfg.params.r;
        if (j.contains("output_dir"))
            cfg.output_dir = get_str(j["output_dir"], join_path(root, "output_dir"));
        return cfg;
    }

    check_keys(j, root,
               {"kind", "geometry", "operator", "params", "seeds", "output_dir", "spectrum", "sule",
                "dynamics", "msa-prob", "goodbad"});
    // a kind-specific block other than this run's kind is a configuration slip
    for (const char* block : {"spectrum", "sule", "dynamics", "msa-prob", "goodbad"})
        if (j.contains(block) && block != kind)
            throw ConfigError("block '" + std::string(block) + "' does not match kind '" + kind + "'",
                              root);

    {
        const json& g = require(j, root, "geometry");
        const std::string gp = join_path(root, "geometry");
        check_keys(g, gp, {"d", "radius"});
        cfg.d = static_cast<int>(get_int(require(g, gp, "d"), join_path(gp, "d")));
        cfg.radius = static_cast<int>(get_int(require(g, gp, "radius"), join_path(gp, "radius")));
        if (cfg.d < 1 || cfg.d > 3) throw ConfigError("d must be in {1, 2, 3}", join_path(gp, "d"));
        if (cfg.radius < 1) throw ConfigError("radius must be >= 1", join_path(gp, "radius"));
    }
    {
        const json& o = require(j, root, "operator");
        const std::string op = join_path(root, "operator");
        check_keys(o, op, {"r", "lambda", "distribution"});
        cfg.op.d = cfg.d;
        cfg.op.r = get_num(require(o, op, "r"), join_path(op, "r"));
        const json& lam = require(o, op, "lambda");
        if (lam.is_string()) {
            if (lam.get<std::string>() != "inf")
                throw ConfigError("lambda must be a number or \"inf\"", join_path(op, "lambda"));
            cfg.op.lambda = kLambdaDiagonal;
        } else {
            cfg.op.lambda = get_num(lam, join_path(op, "lambda"));
            if (!(cfg.op.lambda > 0.0))
                throw ConfigError("lambda must be positive", join_path(op, "lambda"));
        }
        cfg.op.dist = parse_distribution(require(o, op, "distribution"), join_path(op, "distribution"));
        if (!(cfg.op.r > cfg.d))
            throw ConfigError("r must exceed d", join_path(op, "r"));
    }

    cfg.params = parse_params(j.contains("params") ? j["params"] : json::object(),
                              join_path(root, "params"), cfg.d, cfg.op.r, /*allow_rd=*/false);

    if (j.contains("seeds")) {
        const json& s = j["seeds"];
        const std::string sp = join_path(root, "seeds");
        check_keys(s, sp, {"base", "count"});
        if (s.contains("base"))
            cfg.seed_base = static_cast<std::uint64_t>(get_int(s["base"], join_path(sp, "base")));
        if (s.contains("count")) {
            cfg.seed_count = static_cast<int>(get_int(s["count"], join_path(sp, "count")));
            if (cfg.seed_count < 1) throw ConfigError("count must be >= 1", join_path(sp, "count"));
        }
    }
    if (j.contains("output_dir"))
        cfg.output_dir = get_str(j["output_dir"], join_path(root, "output_dir"));

    switch (cfg.kind) {
        case ExperimentKind::spectrum: {
            if (j.contains("spectrum")) {
                const json& b = j["spectrum"];
                const std::string bp = join_path(root, "spectrum");
                check_keys(b, bp, {"fit_decay"});
                if (b.contains("fit_decay")) cfg.fit_decay = get_bool(b["fit_decay"], join_path(bp, "fit_decay"));
            }
            break;
        }
        case ExperimentKind::sule: {
            cfg.sule.gamma = cfg.params.gamma;
            cfg.sule.eps_prime = cfg.params.eps_prime;
            if (j.contains("sule")) {
                const json& b = j["sule"];
                const std::string bp = join_path(root, "sule");
                check_keys(b, bp, {"gamma", "eps_prime"});
                if (b.contains("gamma")) cfg.sule.gamma = get_num(b["gamma"], join_path(bp, "gamma"));
                if (b.contains("eps_prime"))
                    cfg.sule.eps_prime = get_num(b["eps_prime"], join_path(bp, "eps_prime"));
            }
            if (!(cfg.sule.gamma > 0.0))
                throw ConfigError("gamma must be positive", join_path(root, "sule"));
            break;
        }
        case ExperimentKind::dynamics: {
            const json& b = require(j, root, "dynamics");
            const std::string bp = join_path(root, "dynamics");
            check_keys(b, bp, {"state", "q", "s", "times"});
            cfg.dynamics.q = cfg.params.q;
            if (b.contains("q")) cfg.dynamics.q = get_num(b["q"], join_path(bp, "q"));
            if (b.contains("s")) cfg.dynamics.s = get_num(b["s"], join_path(bp, "s"));
            if (!(cfg.dynamics.q >= 0.0)) throw ConfigError("q must be >= 0", join_path(bp, "q"));
            if (!(cfg.dynamics.s >= 0.0)) throw ConfigError("s must be >= 0", join_path(bp, "s"));
            cfg.dynamics.times = parse_times(require(b, bp, "times"), join_path(bp, "times"));
            const json& st = require(b, bp, "state");
            const std::string stp = join_path(bp, "state");
            check_keys(st, stp, {"type", "site", "theta", "normalize"});
            const std::string type = get_str(require(st, stp, "type"), join_path(stp, "type"));
            cfg.dynamics.site = Site::origin(cfg.d);
            if (type == "delta") {
                check_keys(st, stp, {"type", "site"});
                cfg.dynamics.delta = true;
                if (st.contains("site"))
                    cfg.dynamics.site = get_site(st["site"], join_path(stp, "site"), cfg.d);
            } else if (type == "power-law") {
                check_keys(st, stp, {"type", "theta", "normalize"});
                cfg.dynamics.delta = false;
                cfg.dynamics.theta = get_num(require(st, stp, "theta"), join_path(stp, "theta"));
                if (st.contains("normalize"))
                    cfg.dynamics.normalize = get_bool(st["normalize"], join_path(stp, "normalize"));
            } else {
                throw ConfigError("unknown state type '" + type + "'", join_path(stp, "type"));
            }
            break;
        }
        case ExperimentKind::msa_prob: {
            const json& b = require(j, root, "msa-prob");
            const std::string bp = join_path(root, "msa-prob");
            check_keys(b, bp, {"L_list", "n_samples", "grid"});
            for (double v : get_num_list(require(b, bp, "L_list"), join_path(bp, "L_list"))) {
                if (v < 1 || v != std::floor(v))
                    throw ConfigError("L values must be integers >= 1", join_path(bp, "L_list"));
                cfg.msa.L_list.push_back(static_cast<int>(v));
            }
            cfg.msa.n_samples = get_int(require(b, bp, "n_samples"), join_path(bp, "n_samples"));
            if (cfg.msa.n_samples < 1)
                throw ConfigError("n_samples must be >= 1", join_path(bp, "n_samples"));
            const json& g = require(b, bp, "grid");
            const std::string gp = join_path(bp, "grid");
            check_keys(g, gp, {"e0", "eta", "points"});
            cfg.msa.grid.e0 = g.contains("e0") ? get_num(g["e0"], join_path(gp, "e0")) : 0.0;
            cfg.msa.grid.points =
                static_cast<int>(get_int(require(g, gp, "points"), join_path(gp, "points")));
            if (cfg.msa.grid.points < 2)
                throw ConfigError("grid needs >= 2 points", join_path(gp, "points"));
            if (g.contains("eta")) {
                if (g["eta"].is_string()) {
                    if (g["eta"].get<std::string>() != "auto")
                        throw ConfigError("eta must be a number or \"auto\"", join_path(gp, "eta"));
                    cfg.msa.grid_eta_auto = true;
                } else {
                    cfg.msa.grid.eta = get_num(g["eta"], join_path(gp, "eta"));
                    cfg.msa.grid_eta_auto = false;
                    if (!(cfg.msa.grid.eta > 0.0))
                        throw ConfigError("eta must be positive", join_path(gp, "eta"));
                }
            }
            break;
        }
        case ExperimentKind::goodbad: {
            const json& b = require(j, root, "goodbad");
            const std::string bp = join_path(root, "goodbad");
            check_keys(b, bp, {"L", "energies", "centers"});
            cfg.goodbad.L = static_cast<int>(get_int(require(b, bp, "L"), join_path(bp, "L")));
            if (cfg.goodbad.L < 1) throw ConfigError("L must be >= 1", join_path(bp, "L"));
            cfg.goodbad.energies = get_num_list(require(b, bp, "energies"), join_path(bp, "energies"));
            if (b.contains("centers")) {
                const json& cs = b["centers"];
                const std::string cp = join_path(bp, "centers");
                if (!cs.is_array() || cs.empty())
                    throw ConfigError("expected a non-empty array", cp);
                for (size_t i = 0; i < cs.size(); ++i)
                    cfg.goodbad.centers.push_back(
                        get_site(cs[i], cp + "[" + std::to_string(i) + "]", cfg.d));
            } else {
                cfg.goodbad.centers.push_back(Site::origin(cfg.d));
            }
            break;
        }
        default:
            break;
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file", path);
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what(), path);
    }
    return parse_experiment_config(j);
}

json ExperimentConfig::resolved_json() const {
    json j;
    j["kind"] = kind_name(kind);
    j["params"] = params_json(params);
    if (output_dir) j["output_dir"] = *output_dir;
    if (kind == ExperimentKind::params_check) return j;

    j["geometry"] = {{"d", d}, {"radius", radius}};
    json o;
    o["r"] = op.r;
    if (std::isinf(op.lambda)) o["lambda"] = "inf";
    else o["lambda"] = op.lambda;
    o["distribution"] = distribution_json(op.dist);
    j["operator"] = o;
    j["seeds"] = {{"base", seed_base}, {"count", seed_count}};

    switch (kind) {
        case ExperimentKind::spectrum:
            j["spectrum"] = {{"fit_decay", fit_decay}};
            break;
        case ExperimentKind::sule:
            j["sule"] = {{"gamma", sule.gamma}, {"eps_prime", sule.eps_prime}};
            break;
        case ExperimentKind::dynamics: {
            json st;
            if (dynamics.delta) {
                st["type"] = "delta";
                st["site"] = dynamics.site.coords;
            } else {
                st["type"] = "power-law";
                st["theta"] = dynamics.theta;
                st["normalize"] = dynamics.normalize;
            }
            j["dynamics"] = {{"state", st},
                             {"q", dynamics.q},
                             {"s", dynamics.s},
                             {"times", {{"kind", "list"}, {"values", dynamics.times}}}};
            break;
        }
        case ExperimentKind::msa_prob: {
            json g;
            g["e0"] = msa.grid.e0;
            if (msa.grid_eta_auto) g["eta"] = "auto";
            else g["eta"] = msa.grid.eta;
            g["points"] = msa.grid.points;
            j["msa-prob"] = {{"L_list", msa.L_list}, {"n_samples", msa.n_samples}, {"grid", g}};
            break;
        }
        case ExperimentKind::goodbad: {
            json cs = json::array();
            for (const Site& c : goodbad.centers) cs.push_back(c.coords);
            j["goodbad"] = {{"L", goodbad.L}, {"energies", goodbad.energies}, {"centers", cs}};
            break;
        }
        default:
            break;
    }
    return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(cfg.resolved_json().dump())));
    return buf;
}

namespace {

struct SeedOutcome {
    std::string csv_name;
    CsvTable table;
    json record;
    std::string error;  // non-empty on failure
};

// run fn over seed indices on a small pool; results land in index order
template <typename Fn>
std::vector<SeedOutcome> fan_out(int count, int jobs, Fn fn) {
    std::vector<SeedOutcome> out(static_cast<size_t>(count));
    std::atomic<int> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const int i = cursor.fetch_add(1);
            if (i >= count) return;
            try {
                out[static_cast<size_t>(i)] = fn(i);
            } catch (const std::exception& e) {
                out[static_cast<size_t>(i)].error = e.what();
            }
        }
    };
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int nthreads = std::min(jobs, count);
        pool.reserve(static_cast<size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

EigenSystem build_system(const ExperimentConfig& cfg, std::uint64_t seed) {
    const Cube box(Site::origin(cfg.d), cfg.radius);
    auto real = sample_potential(cfg.op.dist, box.sites(), seed);
    return diagonalize(assemble_hamiltonian(box, cfg.op.lambda, real, cfg.op.hopping()));
}

SeedOutcome spectrum_like_task(const ExperimentConfig& cfg, std::uint64_t seed, bool with_sule) {
    SeedOutcome out;
    const EigenSystem sys = build_system(cfg, seed);
    CsvTable t;
    t.header = {"j", "E_j"};
    for (int c = 0; c < cfg.d; ++c) t.header.push_back("center_" + std::to_string(c));
    t.header.push_back("gamma_hat");
    t.header.push_back("fit_q");
    if (with_sule) t.header.push_back("sule_term");
    t.header.push_back("plaw_const");

    SuleReport rep;
    if (with_sule) rep = sule_constant(sys, cfg.sule.gamma, cfg.sule.eps_prime);

    const double nan = std::nan("");
    std::vector<double> gammas;
    for (int jdx = 0; jdx < sys.size(); ++jdx) {
        std::vector<CsvValue> row;
        row.emplace_back(static_cast<long long>(jdx));
        row.emplace_back(sys.eigenvalues[jdx]);
        for (int c = 0; c < cfg.d; ++c)
            row.emplace_back(static_cast<long long>(sys.centers[static_cast<size_t>(jdx)][c]));
        double gh = nan, fq = nan;
        if (cfg.fit_decay || with_sule) {
            try {
                const DecayFit fit = fit_decay_exponent(sys, jdx);
                gh = fit.gamma_hat;
                fq = fit.r2;
                gammas.push_back(gh);
            } catch (const InsufficientDataError&) {
            }
        }
        row.emplace_back(gh);
        row.emplace_back(fq);
        if (with_sule) row.emplace_back(rep.per_state[static_cast<size_t>(jdx)]);
        // per-state constant of the origin-anchored power-law form
        row.emplace_back(sule_term(sys.eigenvectors.col(jdx), sys.cube().sites(),
                                   Site::origin(cfg.d), cfg.op.r / 600.0, 0.0));
        t.rows.push_back(std::move(row));
    }

    out.record["seed"] = seed;
    out.record["states"] = sys.size();
    out.record["fitted"] = gammas.size();
    if (!gammas.empty()) {
        std::sort(gammas.begin(), gammas.end());
        out.record["median_gamma_hat"] = gammas[gammas.size() / 2];
    }
    if (with_sule) out.record["D"] = rep.D;
    out.csv_name = (with_sule ? std::string("sule_seed") : std::string("spectrum_seed")) +
                   std::to_string(seed) + ".csv";
    out.table = std::move(t);
    return out;
}

SeedOutcome dynamics_task(const ExperimentConfig& cfg, std::uint64_t seed) {
    SeedOutcome out;
    const EigenSystem sys = build_system(cfg, seed);
    const Cube& box = sys.cube();
    const State phi = cfg.dynamics.delta
                          ? delta_state(box, cfg.dynamics.site)
                          : power_law_state(cfg.dynamics.theta, box, cfg.dynamics.normalize);
    const MomentSeries series =
        moment_trajectory(sys, phi, cfg.dynamics.times, cfg.dynamics.q, cfg.dynamics.s);

    CsvTable t;
    t.header = {"t", "M_q", "Hs_norm", "norm_drift"};
    for (size_t i = 0; i < series.times.size(); ++i)
        t.rows.push_back({series.times[i], series.moment_q[i], series.hs_norm[i],
                          series.norm_drift[i]});

    const double theta_rep = cfg.dynamics.delta ? cfg.params.theta : cfg.dynamics.theta;
    out.record["seed"] = seed;
    out.record["sup_moment"] = series.sup_moment;
    out.record["c_phi_theta"] = theta_rep;
    out.record["c_phi"] = power_law_bound_constant(phi, theta_rep);
    if (series.first_contaminated >= 0)
        out.record["first_contaminated_time"] = series.times[static_cast<size_t>(series.first_contaminated)];
    else
        out.record["first_contaminated_time"] = nullptr;
    out.csv_name = "dynamics_seed" + std::to_string(seed) + ".csv";
    out.table = std::move(t);
    return out;
}

SeedOutcome goodbad_task(const ExperimentConfig& cfg, std::uint64_t seed) {
    SeedOutcome out;
    CsvTable t;
    t.header = {"cube", "E", "verdict", "margin_s0", "margin_r1"};
    long long good_count = 0, total = 0;
    for (const Site& center : cfg.goodbad.centers) {
        const Cube cube(center, cfg.goodbad.L);
        auto real = sample_potential(cfg.op.dist, cube.sites(), seed);
        const HamMatrix H = assemble_hamiltonian(cube, cfg.op.lambda, real, cfg.op.hopping());
        for (double E : cfg.goodbad.energies) {
            const CubeVerdict v = classify_cube(H, E, cfg.params);
            t.rows.push_back({v.cube_id, v.energy, std::string(v.good ? "good" : "bad"),
                              v.margin_s0, v.margin_r1});
            ++total;
            if (v.good) ++good_count;
        }
    }
    out.record["seed"] = seed;
    out.record["verdicts"] = total;
    out.record["good"] = good_count;
    out.csv_name = "goodbad_seed" + std::to_string(seed) + ".csv";
    out.table = std::move(t);
    return out;
}

}  // namespace

std::vector<std::string> preset_names() { return {"desk", "theory"}; }

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
    const auto t_start = std::chrono::steady_clock::now();

    std::string out_dir;
    if (opt.out_dir_override) out_dir = *opt.out_dir_override;
    else if (cfg.output_dir) out_dir = *cfg.output_dir;
    else if (const char* env = std::getenv("POLYLOC_OUT")) out_dir = env;
    else out_dir = ".";
    std::filesystem::create_directories(out_dir);

    ExperimentConfig run_cfg = cfg;
    if (opt.seed_override) run_cfg.seed_base = *opt.seed_override;

    const auto report = params_check(run_cfg.params);
    {
        int violated = 0;
        for (const auto& c : report)
            if (!c.satisfied) ++violated;
        if (violated > 0)
            std::cerr << "[polyloc] warning: " << violated << " of " << report.size()
                      << " parameter relations violated (expected for desk-scale presets)\n";
    }

    RunResult result;
    result.out_dir = out_dir;
    json records = json::array();

    auto write_table = [&](const std::string& name, const CsvTable& t) {
        write_csv(t, out_dir + "/" + name);
        result.csv_files.push_back(name);
    };

    switch (run_cfg.kind) {
        case ExperimentKind::params_check: {
            CsvTable t;
            t.header = {"relation", "satisfied", "slack"};
            for (const auto& c : report)
                t.rows.push_back({c.id, std::string(c.satisfied ? "yes" : "no"), c.slack});
            write_table("params_check.csv", t);
            json rec;
            rec["all_satisfied"] = all_satisfied(report);
            records.push_back(rec);
            break;
        }
        case ExperimentKind::msa_prob: {
            BadPairConfig bc;
            bc.L_list = run_cfg.msa.L_list;
            bc.n_samples = run_cfg.msa.n_samples;
            bc.base_seed = run_cfg.seed_base;
            bc.dist = run_cfg.op.dist;
            bc.lambda = run_cfg.op.lambda;
            bc.hopping = run_cfg.op.hopping();
            bc.params = run_cfg.params;
            bc.jobs = opt.jobs;
            bc.grid = run_cfg.msa.grid;
            if (run_cfg.msa.grid_eta_auto) {
                const double il = std::isinf(run_cfg.op.lambda) ? 0.0 : 1.0 / run_cfg.op.lambda;
                bc.grid.eta = il * schur_bound(bc.hopping) + run_cfg.op.dist.half_width;
            }
            const double kernel_norm = schur_bound(bc.hopping);
            if (std::abs(bc.grid.e0) > 2.0 * (kernel_norm + run_cfg.op.dist.half_width))
                std::cerr << "[polyloc] warning: grid center far outside the spectral window\n";

            const BadPairTable table = estimate_bad_pair_probability(bc);
            CsvTable t;
            t.header = {"L", "n_samples", "p_hat", "ci_lo", "ci_hi", "L_pow_minus2p"};
            for (const auto& row : table.rows)
                t.rows.push_back({static_cast<long long>(row.L), row.n_samples, row.p_hat,
                                  row.ci_lo, row.ci_hi, row.l_pow_minus_2p});
            write_table("msa_prob.csv", t);
            json rec;
            rec["loglog_slope"] = table.loglog_slope;
            rec["grid"] = {{"e0", bc.grid.e0}, {"eta", bc.grid.eta}, {"points", bc.grid.points},
                           {"spacing", bc.grid.spacing()}};
            records.push_back(rec);
            break;
        }
        default: {
            auto task = [&](int i) -> SeedOutcome {
                const std::uint64_t seed = run_cfg.seed_base + static_cast<std::uint64_t>(i);
                switch (run_cfg.kind) {
                    case ExperimentKind::spectrum:
                        return spectrum_like_task(run_cfg, seed, false);
                    case ExperimentKind::sule:
                        return spectrum_like_task(run_cfg, seed, true);
                    case ExperimentKind::dynamics:
                        return dynamics_task(run_cfg, seed);
                    case ExperimentKind::goodbad:
                        return goodbad_task(run_cfg, seed);
                    default:
                        throw std::logic_error("unreachable");
                }
            };
            const auto outcomes = fan_out(run_cfg.seed_count, opt.jobs, task);
            for (int i = 0; i < run_cfg.seed_count; ++i) {
                const auto& oc = outcomes[static_cast<size_t>(i)];
                if (!oc.error.empty())
                    throw std::runtime_error(
                        "seed " + std::to_string(run_cfg.seed_base + static_cast<std::uint64_t>(i)) +
                        ": " + oc.error);
                write_table(oc.csv_name, oc.table);
                records.push_back(oc.record);
            }
            break;
        }
    }

    json summary;
    summary["version"] = kVersion;
    summary["kind"] = kind_name(run_cfg.kind);
    summary["config"] = run_cfg.resolved_json();
    summary["config_hash"] = config_hash(run_cfg);
    {
        json pr = json::array();
        for (const auto& c : report)
            pr.push_back({{"relation", c.id}, {"satisfied", c.satisfied}, {"slack", c.slack}});
        summary["params_report"] = pr;
    }
    summary["outputs"] = result.csv_files;
    summary["records"] = records;
    summary["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    std::ofstream sf(out_dir + "/summary.json", std::ios::binary);
    if (!sf) throw std::runtime_error("run_experiment: cannot write summary.json");
    sf << summary.dump(2) << "\n";
    result.summary = std::move(summary);
    return result;
}

}  // namespace polyloc
