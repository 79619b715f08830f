#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "polyloc/disorder.hpp"
#include "polyloc/dynamics.hpp"
#include "polyloc/errors.hpp"
#include "polyloc/experiment.hpp"
#include "polyloc/hamiltonian.hpp"
#include "polyloc/lattice.hpp"
#include "polyloc/msa.hpp"
#include "polyloc/params.hpp"
#include "polyloc/resolvent.hpp"
#include "polyloc/spectral.hpp"
#include "polyloc/version.hpp"

namespace py = pybind11;
using namespace polyloc;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "long-range lattice operators on finite cubes";
    m.attr("__version__") = kVersion;
    m.attr("LAMBDA_DIAGONAL") = kLambdaDiagonal;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DivergentSumError>(m, "DivergentSumError", PyExc_ValueError);
    py::register_exception<SingularResolventError>(m, "SingularResolventError", PyExc_ArithmeticError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_ValueError);
    py::register_exception<ScaleOverflowError>(m, "ScaleOverflowError", PyExc_OverflowError);
    py::register_exception<DegenerateScaleError>(m, "DegenerateScaleError", PyExc_ValueError);
    py::register_exception<IncompleteRealizationError>(m, "IncompleteRealizationError", PyExc_KeyError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    // geometry
    py::class_<Site>(m, "Site")
        .def(py::init<std::vector<int>>(), py::arg("coords"))
        .def_static("origin", &Site::origin, py::arg("d"))
        .def_readwrite("coords", &Site::coords)
        .def("dim", &Site::dim)
        .def("__len__", &Site::dim)
        .def("__getitem__", [](const Site& s, int i) {
            if (i < 0 || i >= s.dim()) throw py::index_error();
            return s[i];
        })
        .def(py::self == py::self)
        .def(py::self < py::self)
        .def("__add__", [](const Site& a, const Site& b) { return a + b; })
        .def("__sub__", [](const Site& a, const Site& b) { return a - b; })
        .def("__hash__", [](const Site& s) { return py::hash(py::tuple(py::cast(s.coords))); })
        .def("__repr__", [](const Site& s) { return "Site(" + s.str() + ")"; });
    py::implicitly_convertible<py::list, Site>();
    py::implicitly_convertible<py::tuple, Site>();

    m.def("sup_norm", &sup_norm, py::arg("n"));
    m.def("sup_distance", &sup_distance, py::arg("m"), py::arg("n"));

    py::class_<Cube>(m, "Cube")
        .def(py::init<Site, int>(), py::arg("center"), py::arg("radius"))
        .def_property_readonly("center", &Cube::center)
        .def_property_readonly("radius", &Cube::radius)
        .def("dim", &Cube::dim)
        .def("__len__", &Cube::size)
        .def("sites", &Cube::sites)
        .def("contains", &Cube::contains, py::arg("site"))
        .def("index_of", &Cube::index_of, py::arg("site"))
        .def("site", &Cube::site, py::arg("i"))
        .def(py::self == py::self)
        .def("__repr__", [](const Cube& c) { return "Cube(" + c.id() + ")"; })
        .def("id", &Cube::id);

    py::class_<Annulus>(m, "Annulus")
        .def_readonly("outer", &Annulus::outer)
        .def_readonly("inner", &Annulus::inner)
        .def_readonly("sites", &Annulus::sites);
    m.def("make_annulus", &make_annulus, py::arg("center"), py::arg("outer_radius"),
          py::arg("inner_radius"));

    py::enum_<AnnulusVariant>(m, "AnnulusVariant")
        .value("msa", AnnulusVariant::msa)
        .value("sule", AnnulusVariant::sule);
    py::class_<AnnulusRadii>(m, "AnnulusRadii")
        .def_readonly("inner", &AnnulusRadii::inner)
        .def_readonly("outer", &AnnulusRadii::outer)
        .def("__repr__", [](const AnnulusRadii& a) {
            return "AnnulusRadii(inner=" + std::to_string(a.inner) +
                   ", outer=" + std::to_string(a.outer) + ")";
        });
    m.def("annulus_radii", &annulus_radii, py::arg("variant"), py::arg("Lk"), py::arg("Lk1"));

    py::class_<TailSum>(m, "TailSum")
        .def_readonly("value", &TailSum::value)
        .def_readonly("error_bound", &TailSum::error_bound)
        .def("__repr__", [](const TailSum& t) {
            std::ostringstream os;
            os << "TailSum(value=" << t.value << ", error_bound=" << t.error_bound << ")";
            return os.str();
        });
    m.def("tail_sum", &tail_sum, py::arg("theta"), py::arg("d"), py::arg("L"));
    m.def("shell_power_tail", &shell_power_tail, py::arg("theta"), py::arg("d"), py::arg("L"));
    m.def("shell_count", &shell_count, py::arg("d"), py::arg("m"));

    // disorder
    py::class_<DistributionSpec>(m, "DistributionSpec")
        .def_static("uniform", &DistributionSpec::uniform_on, py::arg("M"))
        .def_static("discrete", &DistributionSpec::discrete, py::arg("points"), py::arg("weights"),
                    py::arg("M"))
        .def_static("from_table", &DistributionSpec::from_table, py::arg("quantiles"), py::arg("M"))
        .def_readonly("half_width", &DistributionSpec::half_width)
        .def("sample", &DistributionSpec::sample, py::arg("u"))
        .def("cdf", &DistributionSpec::cdf, py::arg("x"))
        .def("measure", &DistributionSpec::measure, py::arg("a"), py::arg("b"))
        .def("has_atoms", &DistributionSpec::has_atoms);
    m.def("holder_constant", &holder_constant, py::arg("spec"), py::arg("rho"));

    py::class_<Realization, std::shared_ptr<Realization>>(m, "Realization")
        .def_property_readonly("seed", &Realization::seed)
        .def("value_at", &Realization::value_at, py::arg("site"))
        .def("ensure", &Realization::ensure, py::arg("sites"));
    m.def("sample_potential", &sample_potential, py::arg("spec"), py::arg("sites"), py::arg("seed"));

    // operator
    py::class_<HoppingSpec>(m, "HoppingSpec")
        .def(py::init([](double r, int d) {
                 HoppingSpec h{r, d};
                 h.validate();
                 return h;
             }),
             py::arg("r"), py::arg("d"))
        .def_readonly("r", &HoppingSpec::r)
        .def_readonly("d", &HoppingSpec::d);
    m.def("hopping_entry", &hopping_entry, py::arg("m"), py::arg("n"), py::arg("spec"));
    m.def(
        "schur_bound", [](double r, int d) { return schur_bound(HoppingSpec{r, d}); }, py::arg("r"),
        py::arg("d"));

    py::class_<HamMatrix>(m, "HamMatrix")
        .def_readonly("cube", &HamMatrix::cube)
        .def_property_readonly("lam", [](const HamMatrix& h) { return h.lambda; })
        .def_readonly("matrix", &HamMatrix::mat)
        .def("diagonal", &HamMatrix::diagonal)
        .def("inv_lambda", &HamMatrix::inv_lambda)
        .def("__len__", &HamMatrix::size);
    m.def(
        "assemble_hamiltonian",
        [](const Cube& cube, double lam, std::shared_ptr<const Realization> real, double r) {
            return assemble_hamiltonian(cube, lam, std::move(real), HoppingSpec{r, cube.dim()});
        },
        py::arg("cube"), py::arg("lam"), py::arg("realization"), py::arg("r"));

    // resolvent
    py::class_<GreenMatrix>(m, "GreenMatrix")
        .def_readonly("cube", &GreenMatrix::cube)
        .def_readonly("energy", &GreenMatrix::energy)
        .def_readonly("entries", &GreenMatrix::entries)
        .def_readonly("condition_estimate", &GreenMatrix::condition_estimate)
        .def_readonly("asymmetry", &GreenMatrix::asymmetry);
    m.def("green_function", &green_function, py::arg("H"), py::arg("E"));
    m.def("sobolev_matrix_norm", &sobolev_matrix_norm, py::arg("matrix"), py::arg("rows"),
          py::arg("cols"), py::arg("s"), py::arg("c0") = 1.0);

    py::class_<CubeVerdict>(m, "CubeVerdict")
        .def_readonly("cube_id", &CubeVerdict::cube_id)
        .def_readonly("energy", &CubeVerdict::energy)
        .def_readonly("good", &CubeVerdict::good)
        .def_readonly("margin_s0", &CubeVerdict::margin_s0)
        .def_readonly("margin_r1", &CubeVerdict::margin_r1)
        .def("__repr__", [](const CubeVerdict& v) {
            std::ostringstream os;
            os << "CubeVerdict(" << v.cube_id << ", E=" << v.energy << ", "
               << (v.good ? "good" : "bad") << ")";
            return os.str();
        });
    m.def("classify_cube", &classify_cube, py::arg("H"), py::arg("E"), py::arg("params"));

    py::class_<DecayCheck>(m, "DecayCheck")
        .def_readonly("holds", &DecayCheck::holds)
        .def_readonly("worst_margin", &DecayCheck::worst_margin)
        .def_readonly("worst_from", &DecayCheck::worst_from)
        .def_readonly("worst_to", &DecayCheck::worst_to)
        .def_readonly("pairs_checked", &DecayCheck::pairs_checked);
    m.def("offdiag_decay_check", &offdiag_decay_check, py::arg("G"), py::arg("params"));
    m.def("poisson_residual", &poisson_residual, py::arg("big"), py::arg("E"), py::arg("psi"),
          py::arg("sub"));

    // spectral data
    py::class_<EigenSystem>(m, "EigenSystem")
        .def_readonly("eigenvalues", &EigenSystem::eigenvalues)
        .def_readonly("eigenvectors", &EigenSystem::eigenvectors)
        .def_readonly("centers", &EigenSystem::centers)
        .def("__len__", &EigenSystem::size)
        .def_property_readonly("cube", [](const EigenSystem& s) { return s.cube(); })
        .def_property_readonly("hamiltonian", [](const EigenSystem& s) { return *s.ham; });
    m.def("diagonalize", &diagonalize, py::arg("H"));
    m.def("localization_center", &localization_center, py::arg("psi"), py::arg("sites"));

    py::class_<DecayFit>(m, "DecayFit")
        .def_readonly("gamma_hat", &DecayFit::gamma_hat)
        .def_readonly("r2", &DecayFit::r2)
        .def_readonly("shells_used", &DecayFit::shells_used)
        .def("__repr__", [](const DecayFit& f) {
            std::ostringstream os;
            os << "DecayFit(gamma_hat=" << f.gamma_hat << ", r2=" << f.r2
               << ", shells_used=" << f.shells_used << ")";
            return os.str();
        });
    m.def(
        "fit_decay_exponent",
        [](const Eigen::VectorXd& psi, const Cube& box, const Site& center) {
            return fit_decay_exponent(psi, box, center);
        },
        py::arg("psi"), py::arg("box"), py::arg("center"));
    m.def(
        "fit_decay_exponent", [](const EigenSystem& s, int j) { return fit_decay_exponent(s, j); },
        py::arg("system"), py::arg("j"));

    m.def("sule_term", &sule_term, py::arg("psi"), py::arg("sites"), py::arg("center"),
          py::arg("gamma"), py::arg("eps_prime"));
    py::class_<SuleReport>(m, "SuleReport")
        .def_readonly("gamma", &SuleReport::gamma)
        .def_readonly("eps_prime", &SuleReport::eps_prime)
        .def_readonly("D", &SuleReport::D)
        .def_readonly("per_state", &SuleReport::per_state)
        .def_readonly("worst_site", &SuleReport::worst_site);
    m.def("sule_constant", &sule_constant, py::arg("system"), py::arg("gamma"),
          py::arg("eps_prime"));
    m.def("maximizer_cube_bad", &maximizer_cube_bad, py::arg("system"), py::arg("j"), py::arg("L"),
          py::arg("params"));

    py::class_<CenterCount>(m, "CenterCount")
        .def_readonly("count", &CenterCount::count)
        .def_readonly("sorted_norms", &CenterCount::sorted_norms)
        .def_readonly("growth_constant", &CenterCount::growth_constant);
    m.def("center_counting", &center_counting, py::arg("system"), py::arg("L"));

    // dynamics
    py::class_<State>(m, "State")
        .def(py::init([](const Cube& cube, const Eigen::VectorXcd& amp) {
                 if (amp.size() != cube.size())
                     throw std::invalid_argument("State: amplitude length != cube size");
                 return State{cube, amp, amp.norm()};
             }),
             py::arg("cube"), py::arg("amp"))
        .def_readonly("cube", &State::cube)
        .def_readonly("amp", &State::amp)
        .def_readonly("norm0", &State::norm0)
        .def("norm", &State::norm);
    m.def("power_law_state", &power_law_state, py::arg("theta"), py::arg("cube"),
          py::arg("normalize") = true);
    m.def("delta_state", &delta_state, py::arg("cube"), py::arg("at"));
    m.def("power_law_bound_constant", &power_law_bound_constant, py::arg("phi"), py::arg("theta"));
    m.def("evolve", &evolve, py::arg("system"), py::arg("phi"), py::arg("t"));
    m.def("moment", &moment, py::arg("u"), py::arg("q"));
    m.def("sobolev_seq_norm", &sobolev_seq_norm, py::arg("u"), py::arg("s"));

    py::class_<MomentSeries>(m, "MomentSeries")
        .def_readonly("q", &MomentSeries::q)
        .def_readonly("s", &MomentSeries::s)
        .def_readonly("times", &MomentSeries::times)
        .def_readonly("moment_q", &MomentSeries::moment_q)
        .def_readonly("hs_norm", &MomentSeries::hs_norm)
        .def_readonly("norm_drift", &MomentSeries::norm_drift)
        .def_readonly("boundary_mass", &MomentSeries::boundary_mass)
        .def_readonly("first_contaminated", &MomentSeries::first_contaminated)
        .def_readonly("sup_moment", &MomentSeries::sup_moment);
    m.def("moment_trajectory", &moment_trajectory, py::arg("system"), py::arg("phi"),
          py::arg("times"), py::arg("q"), py::arg("s"));
    m.def("rk4_propagate", &rk4_propagate, py::arg("H"), py::arg("phi"), py::arg("t"),
          py::arg("dt"));

    // parameters
    py::class_<Params>(m, "Params")
        .def(py::init<>())
        .def_readwrite("alpha", &Params::alpha)
        .def_readwrite("delta", &Params::delta)
        .def_readwrite("xi", &Params::xi)
        .def_readwrite("zeta", &Params::zeta)
        .def_readwrite("p", &Params::p)
        .def_readwrite("tau", &Params::tau)
        .def_readwrite("tau_prime", &Params::tau_prime)
        .def_readwrite("s0", &Params::s0)
        .def_readwrite("r1", &Params::r1)
        .def_readwrite("rho", &Params::rho)
        .def_readwrite("kappa", &Params::kappa)
        .def_readwrite("J", &Params::J)
        .def_readwrite("r", &Params::r)
        .def_readwrite("d", &Params::d)
        .def_readwrite("q", &Params::q)
        .def_readwrite("theta", &Params::theta)
        .def_readwrite("gamma", &Params::gamma)
        .def_readwrite("eps_prime", &Params::eps_prime);
    m.def("theory_params", &theory_params, py::arg("d"), py::arg("r"), py::arg("rho"));
    m.def("desk_params", &desk_params, py::arg("d"), py::arg("r"));

    py::class_<RelationCheck>(m, "RelationCheck")
        .def_readonly("id", &RelationCheck::id)
        .def_readonly("satisfied", &RelationCheck::satisfied)
        .def_readonly("slack", &RelationCheck::slack)
        .def_readonly("strict", &RelationCheck::strict)
        .def("__repr__", [](const RelationCheck& c) {
            std::ostringstream os;
            os << "RelationCheck(" << c.id << ", " << (c.satisfied ? "ok" : "VIOLATED")
               << ", slack=" << c.slack << ")";
            return os.str();
        });
    m.def("params_check", &params_check, py::arg("params"));
    m.def("all_satisfied", &all_satisfied, py::arg("checks"));
    m.def("smallest_even_bootstrap_order", &smallest_even_bootstrap_order, py::arg("d"),
          py::arg("p"), py::arg("alpha"));

    // scales and probability estimates
    py::class_<ScaleSequence>(m, "ScaleSequence")
        .def_readonly("L0", &ScaleSequence::L0)
        .def_readonly("alpha", &ScaleSequence::alpha)
        .def_readonly("scales", &ScaleSequence::scales)
        .def("at", &ScaleSequence::at, py::arg("k"))
        .def("kmax", &ScaleSequence::kmax);
    m.def("scale_sequence", &scale_sequence, py::arg("L0"), py::arg("alpha"), py::arg("kmax"),
          py::arg("cap") = 1000000000000000LL);
    m.def("covering_scale_index", &covering_scale_index, py::arg("eps_prime"), py::arg("m"),
          py::arg("scales"));
    m.def("annulus_at_scale", &annulus_at_scale, py::arg("center"), py::arg("k"),
          py::arg("scales"), py::arg("variant"));

    py::class_<EnergyGrid>(m, "EnergyGrid")
        .def(py::init([](double e0, double eta, int points) {
                 return EnergyGrid{e0, eta, points};
             }),
             py::arg("e0"), py::arg("eta"), py::arg("points"))
        .def_readwrite("e0", &EnergyGrid::e0)
        .def_readwrite("eta", &EnergyGrid::eta)
        .def_readwrite("points", &EnergyGrid::points)
        .def("values", &EnergyGrid::values)
        .def("spacing", &EnergyGrid::spacing)
        .def("refined", &EnergyGrid::refined);

    m.def("event_bad_pair", &event_bad_pair, py::arg("realization"), py::arg("lam"),
          py::arg("hopping"), py::arg("m"), py::arg("n"), py::arg("L"), py::arg("grid"),
          py::arg("params"));
    m.def(
        "wilson_interval",
        [](long long successes, long long trials) {
            const WilsonInterval w = wilson_interval(successes, trials);
            return py::make_tuple(w.lo, w.hi);
        },
        py::arg("successes"), py::arg("trials"));

    py::class_<BadPairRow>(m, "BadPairRow")
        .def_readonly("L", &BadPairRow::L)
        .def_readonly("n_samples", &BadPairRow::n_samples)
        .def_readonly("p_hat", &BadPairRow::p_hat)
        .def_readonly("ci_lo", &BadPairRow::ci_lo)
        .def_readonly("ci_hi", &BadPairRow::ci_hi)
        .def_readonly("l_pow_minus_2p", &BadPairRow::l_pow_minus_2p);
    py::class_<BadPairConfig>(m, "BadPairConfig")
        .def(py::init<>())
        .def_readwrite("L_list", &BadPairConfig::L_list)
        .def_readwrite("n_samples", &BadPairConfig::n_samples)
        .def_readwrite("base_seed", &BadPairConfig::base_seed)
        .def_readwrite("dist", &BadPairConfig::dist)
        .def_readwrite("lam", &BadPairConfig::lambda)
        .def_readwrite("hopping", &BadPairConfig::hopping)
        .def_readwrite("grid", &BadPairConfig::grid)
        .def_readwrite("params", &BadPairConfig::params)
        .def_readwrite("jobs", &BadPairConfig::jobs);
    py::class_<BadPairTable>(m, "BadPairTable")
        .def_readonly("rows", &BadPairTable::rows)
        .def_readonly("loglog_slope", &BadPairTable::loglog_slope);
    m.def("estimate_bad_pair_probability", &estimate_bad_pair_probability, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    // experiment driver
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_property_readonly("kind", [](const ExperimentConfig& c) { return kind_name(c.kind); })
        .def_readwrite("seed_base", &ExperimentConfig::seed_base)
        .def_readwrite("seed_count", &ExperimentConfig::seed_count)
        .def("resolved", [](const ExperimentConfig& c) { return json_to_py(c.resolved_json()); })
        .def("__repr__", [](const ExperimentConfig& c) {
            return "ExperimentConfig(kind=" + kind_name(c.kind) + ")";
        });
    m.def("load_config", &load_experiment_config, py::arg("path"));
    m.def(
        "parse_config",
        [](const std::string& text) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(text);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("JSON parse error: ") + e.what(), "$");
            }
            return parse_experiment_config(j);
        },
        py::arg("text"));
    m.def("config_hash", &config_hash, py::arg("config"));
    m.def("preset_names", &preset_names);
    m.def(
        "run",
        [](const ExperimentConfig& cfg, std::optional<std::uint64_t> seed, int jobs,
           std::optional<std::string> out_dir) {
            RunOptions opt;
            opt.seed_override = seed;
            opt.jobs = jobs;
            opt.out_dir_override = std::move(out_dir);
            RunResult res;
            {
                py::gil_scoped_release release;
                res = run_experiment(cfg, opt);
            }
            py::dict d;
            d["out_dir"] = res.out_dir;
            d["csv_files"] = res.csv_files;
            d["summary"] = json_to_py(res.summary);
            return d;
        },
        py::arg("config"), py::arg("seed") = py::none(), py::arg("jobs") = 1,
        py::arg("out_dir") = py::none());
}
