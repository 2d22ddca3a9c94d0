// Python bindings for the rate/dynamics library. Thin: structs map to
// classes with the same field names, validation_error maps to ValueError,
// numerical_error to RuntimeError.

#include <complex>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gaugeme/dynamics.hpp"
#include "gaugeme/errors.hpp"
#include "gaugeme/gauge.hpp"
#include "gaugeme/lindblad.hpp"
#include "gaugeme/rates.hpp"
#include "gaugeme/scenarios.hpp"

namespace py = pybind11;
using namespace gaugeme;

PYBIND11_MODULE(_core, m) {
    m.doc() = "gauge-dependent spontaneous emission rates and two-level dynamics";
    m.attr("__version__") = GAUGEME_VERSION;

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const validation_error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const numerical_error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    // ---- gauges --------------------------------------------------------

    py::class_<gauge_representation>(m, "GaugeRepresentation")
        .def_static("minimal_coupling", &gauge_representation::minimal_coupling)
        .def_static("multipolar", &gauge_representation::multipolar)
        .def_static("rotating_wave", &gauge_representation::rotating_wave)
        .def_static("custom_from_family", &gauge_representation::custom_from_family,
                    py::arg("family_tag"))
        .def_property_readonly("name",
                               [](const gauge_representation& g) { return to_string(g.kind); })
        .def_readonly("family", &gauge_representation::family)
        .def("__repr__", [](const gauge_representation& g) {
            std::string r = "GaugeRepresentation(";
            r += to_string(g.kind);
            if (!g.family.empty()) r += ", " + g.family;
            return r + ")";
        });

    m.def("spectral_weight", &spectral_weight, py::arg("gauge"), py::arg("omega0"),
          py::arg("omega_k"), py::arg("sign"),
          "Band weight f_sign(omega_k); sign=-1 for decay, +1 for excitation.");

    // ---- physical inputs and rates --------------------------------------

    py::class_<physical_params>(m, "PhysicalParams")
        .def(py::init<>())
        .def_readwrite("omega0", &physical_params::omega0)
        .def_readwrite("omega0_tilde", &physical_params::omega0_tilde)
        .def_readwrite("gamma", &physical_params::gamma)
        .def_readwrite("delta_t", &physical_params::delta_t)
        .def_readwrite("omega_min", &physical_params::omega_min)
        .def_readwrite("omega_max", &physical_params::omega_max)
        .def_readwrite("dipole_factor", &physical_params::dipole_factor)
        .def("effective_omega0_tilde", &physical_params::effective_omega0_tilde)
        .def("validate", &physical_params::validate)
        .def("warnings", &physical_params::warnings);

    py::class_<rate_options>(m, "RateOptions")
        .def(py::init<>())
        .def_readwrite("rel_tol", &rate_options::rel_tol)
        .def_readwrite("window_half_periods", &rate_options::window_half_periods);

    py::class_<rate_set>(m, "RateSet")
        .def(py::init<>())
        .def_readwrite("a_minus", &rate_set::a_minus)
        .def_readwrite("a_plus", &rate_set::a_plus)
        .def_readwrite("b", &rate_set::b)
        .def_readwrite("omega0_tilde", &rate_set::omega0_tilde);

    m.def("gamma_from_dipole", &gamma_from_dipole, py::arg("omega0"), py::arg("dipole_abs"),
          "Free-space decay rate for a dipole matrix element in metres.");
    m.def("transition_rate", &transition_rate, py::arg("params"), py::arg("gauge"),
          py::arg("sign"), py::arg("options") = rate_options{},
          py::call_guard<py::gil_scoped_release>(),
          "A- (sign=-1) or A+ (sign=+1) by adaptive quadrature.");
    m.def("a_plus_closed_form", &a_plus_closed_form, py::arg("params"), py::arg("gauge"),
          "Closed-form A+ for the minimal-coupling and multipolar gauges.");
    m.def("cross_coefficient", &cross_coefficient, py::arg("params"), py::arg("gauge"),
          py::arg("options") = rate_options{}, py::call_guard<py::gil_scoped_release>(),
          "Population-coherence coupling B.");
    m.def("cross_coefficient_approx", &cross_coefficient_approx, py::arg("params"),
          py::arg("gauge"), py::arg("options") = rate_options{},
          py::call_guard<py::gil_scoped_release>(),
          "Stationary-phase approximation of B (principal-value form).");
    m.def("cross_coefficient_bound", &cross_coefficient_bound, py::arg("params"),
          py::arg("gauge"), py::arg("options") = rate_options{},
          py::call_guard<py::gil_scoped_release>(),
          "|B| with the oscillatory prefactors maximised.");
    m.def("compute_rate_set", &compute_rate_set, py::arg("params"), py::arg("gauge"),
          py::arg("options") = rate_options{}, py::call_guard<py::gil_scoped_release>(),
          "A-, A+, B, and the renormalised frequency in one call.");

    // ---- dissipator ------------------------------------------------------

    py::class_<dissipator_matrix>(m, "DissipatorMatrix")
        .def(py::init<>())
        .def_readwrite("a_plus", &dissipator_matrix::a_plus)
        .def_readwrite("b", &dissipator_matrix::b)
        .def_readwrite("a_minus", &dissipator_matrix::a_minus);

    m.def("build_dissipator", &build_dissipator, py::arg("rates"),
          "Coefficient matrix of the dissipator in the (sigma+, sigma-) basis.");
    m.def(
        "build_dissipator_from_values",
        [](double a_plus, complexd b, double a_minus) {
            return dissipator_matrix{a_plus, b, a_minus};
        },
        py::arg("a_plus"), py::arg("b"), py::arg("a_minus"));

    py::class_<positivity_report>(m, "PositivityReport")
        .def_readonly("holds", &positivity_report::holds)
        .def_readonly("det", &positivity_report::det)
        .def_readonly("ratio", &positivity_report::ratio);

    m.def("positivity_check", &positivity_check, py::arg("matrix"),
          "Complete positivity of the master equation: det M >= 0.");

    py::class_<lindblad_operator>(m, "LindbladOperator")
        .def_readonly("c_plus", &lindblad_operator::c_plus)
        .def_readonly("c_minus", &lindblad_operator::c_minus)
        .def("matrix", [](const lindblad_operator& op) {
            const matrix2c mat = op.matrix();
            return std::vector<std::vector<complexd>>{{mat(0, 0), mat(0, 1)},
                                                      {mat(1, 0), mat(1, 1)}};
        });

    py::class_<lindblad_decomposition>(m, "LindbladDecomposition")
        .def_readonly("lambda_", &lindblad_decomposition::lambda)
        .def_readonly("ops", &lindblad_decomposition::ops);

    m.def("diagonalize", &diagonalize, py::arg("matrix"),
          "Eigen-decomposition of the dissipator into jump channels.");

    py::class_<positivity_scan_row>(m, "PositivityScanRow")
        .def_readonly("omega_max", &positivity_scan_row::omega_max)
        .def_readonly("a_plus", &positivity_scan_row::a_plus)
        .def_readonly("a_minus", &positivity_scan_row::a_minus)
        .def_readonly("b_bound", &positivity_scan_row::b_bound)
        .def_readonly("ratio", &positivity_scan_row::ratio);

    m.def("positivity_bound_scan", &positivity_bound_scan, py::arg("params"), py::arg("gauge"),
          py::arg("omega_max_grid"), py::arg("options") = rate_options{},
          py::arg("n_threads") = 0, py::call_guard<py::gil_scoped_release>(),
          "Positivity margin A+A-/bound(B)^2 across band edges.");

    // ---- states and dynamics --------------------------------------------

    py::class_<density_matrix>(m, "DensityMatrix")
        .def(py::init<>())
        .def_static("ground", &density_matrix::ground)
        .def_static("excited", &density_matrix::excited)
        .def_readwrite("rho11", &density_matrix::rho11)
        .def_readwrite("rho22", &density_matrix::rho22)
        .def_readwrite("rho12", &density_matrix::rho12)
        .def("trace", &density_matrix::trace)
        .def("min_eigenvalue", &density_matrix::min_eigenvalue)
        .def("validate", &density_matrix::validate, py::arg("tol") = 1e-9);

    py::enum_<frame_policy>(m, "FramePolicy")
        .value("automatic", frame_policy::automatic)
        .value("lab", frame_policy::lab)
        .value("rotating", frame_policy::rotating);

    py::class_<evolve_options>(m, "EvolveOptions")
        .def(py::init<>())
        .def_readwrite("frame", &evolve_options::frame)
        .def_readwrite("rel_tol", &evolve_options::rel_tol)
        .def_readwrite("abs_tol", &evolve_options::abs_tol);

    py::class_<evolve_result>(m, "EvolveResult")
        .def_readonly("times", &evolve_result::times)
        .def_readonly("states", &evolve_result::states)
        .def_readonly("rotating_frame", &evolve_result::rotating_frame)
        .def_readonly("dropped_b_bound", &evolve_result::dropped_b_bound);

    m.def("evolve", &evolve, py::arg("rho0"), py::arg("rates"), py::arg("t_final"),
          py::arg("n_points"), py::arg("options") = evolve_options{},
          py::call_guard<py::gil_scoped_release>(),
          "Master-equation evolution on a uniform output grid.");
    m.def("steady_state", &steady_state, py::arg("rates"));
    m.def("emission_rate", &emission_rate, py::arg("rho"), py::arg("rates"),
          "Photon emission rate A- rho22 + A+ rho11.");

    py::class_<steady_emission>(m, "SteadyEmission")
        .def_readonly("total", &steady_emission::total)
        .def_readonly("narrowband", &steady_emission::narrowband);

    m.def("steady_emission_rate", &steady_emission_rate, py::arg("rates"),
          "Stationary emission rate and its detector-band share.");

    // ---- trajectories ----------------------------------------------------

    py::class_<emission_record>(m, "EmissionRecord")
        .def_readonly("time", &emission_record::time)
        .def_readonly("channel", &emission_record::channel);

    py::class_<trajectory_options>(m, "TrajectoryOptions")
        .def(py::init<>())
        .def_readwrite("omega0_tilde", &trajectory_options::omega0_tilde)
        .def_readwrite("n_grid", &trajectory_options::n_grid)
        .def_readwrite("n_threads", &trajectory_options::n_threads)
        .def_readwrite("max_jump_prob", &trajectory_options::max_jump_prob)
        .def_readwrite("min_steps", &trajectory_options::min_steps);

    py::class_<trajectory_result>(m, "TrajectoryResult")
        .def_readonly("times", &trajectory_result::times)
        .def_readonly("mean", &trajectory_result::mean)
        .def_readonly("stderr_rho22", &trajectory_result::stderr_rho22)
        .def_readonly("emissions", &trajectory_result::emissions)
        .def("mean_rho22", [](const trajectory_result& r) {
            std::vector<double> out;
            out.reserve(r.mean.size());
            for (const auto& st : r.mean) out.push_back(st.rho22);
            return out;
        });

    m.def("simulate_trajectories", &simulate_trajectories, py::arg("rho0"),
          py::arg("decomposition"), py::arg("t_final"), py::arg("n_trajectories"),
          py::arg("seed"), py::arg("options") = trajectory_options{},
          py::call_guard<py::gil_scoped_release>(),
          "Quantum-jump unravelling; deterministic in (seed, trajectory index).");

    // ---- scenarios -------------------------------------------------------

    py::class_<scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("name", &scenario::name)
        .def_readwrite("params", &scenario::params)
        .def_readwrite("gauge", &scenario::gauge)
        .def_readwrite("provenance", &scenario::provenance);

    m.def("preset", &preset, py::arg("name"));
    m.def("preset_names", &preset_names);
    m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("source_name") = "inline");
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("serialize_scenario", &serialize_scenario, py::arg("scenario"));
}
