#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gfbbm/conserved.hpp"
#include "gfbbm/evolution.hpp"
#include "gfbbm/io.hpp"
#include "gfbbm/solitary.hpp"
#include "gfbbm/stability.hpp"

namespace py = pybind11;
using namespace gfbbm;

namespace {

py::array_t<double> as_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> as_vector(const py::array_t<double>& a) {
  py::buffer_info info = py::array_t<double, py::array::c_style |
                                                 py::array::forcecast>(a)
                             .request();
  const double* data = static_cast<const double*>(info.ptr);
  return {data, data + info.size};
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Positive: return "positive";
    case Branch::Negative: return "negative";
    case Branch::None: return "none";
  }
  return "none";
}

}  // namespace

PYBIND11_MODULE(_gfbbm, m) {
  m.doc() = "Solitary waves of the generalized fractional BBM equation: "
            "Petviashvili solver, stability classification and "
            "pseudo-spectral evolution";

  // base classes registered first: translators run newest-first, so the
  // most-derived exception wins
  auto& base_exc = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base_exc);
  py::register_exception<DimensionError>(m, "DimensionError", base_exc);
  py::register_exception<SymmetryError>(m, "SymmetryError", base_exc);
  auto& existence_exc =
      py::register_exception<ExistenceError>(m, "ExistenceError", base_exc);
  py::register_exception<HamiltonianError>(m, "HamiltonianError",
                                           existence_exc);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base_exc);
  py::register_exception<DivergenceError>(m, "DivergenceError", base_exc);
  py::register_exception<DomainError>(m, "DomainError", base_exc);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError",
                                               base_exc);
  py::register_exception<ResourceError>(m, "ResourceError", base_exc);
  py::register_exception<NumericError>(m, "NumericError", base_exc);
  py::register_exception<BlowUpError>(m, "BlowUpError", base_exc);
  py::register_exception<IoError>(m, "IoError", base_exc);

  py::class_<SpectralGrid>(m, "SpectralGrid")
      .def(py::init<double, int>(), py::arg("half_length"),
           py::arg("n_points"))
      .def_property_readonly("half_length", &SpectralGrid::half_length)
      .def_property_readonly("n_points", &SpectralGrid::n_points)
      .def_property_readonly("spacing", &SpectralGrid::spacing)
      .def_property_readonly(
          "nodes", [](const SpectralGrid& g) { return as_array(g.nodes()); })
      .def_property_readonly("wavenumbers",
                             [](const SpectralGrid& g) {
                               return as_array(g.wavenumbers());
                             })
      .def("__repr__", [](const SpectralGrid& g) {
        return "SpectralGrid(half_length=" + format_double(g.half_length()) +
               ", n_points=" + std::to_string(g.n_points()) + ")";
      });
  m.def("make_grid", &make_grid, py::arg("half_length"), py::arg("n_points"));

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double alpha, int p, double c) {
             ModelParams params{alpha, p, c};
             params.validate();
             return params;
           }),
           py::arg("alpha"), py::arg("p"), py::arg("c"))
      .def_readonly("alpha", &ModelParams::alpha)
      .def_readonly("p", &ModelParams::p)
      .def_readonly("c", &ModelParams::c)
      .def_property_readonly(
          "branch",
          [](const ModelParams& p) { return branch_name(p.branch()); })
      .def_property_readonly("hamiltonian_defined",
                             &ModelParams::hamiltonian_defined)
      .def_property_readonly("p_max", &ModelParams::p_max)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(alpha=" + format_double(p.alpha) +
               ", p=" + std::to_string(p.p) + ", c=" + format_double(p.c) +
               ")";
      });

  py::class_<PetviashviliSettings>(m, "PetviashviliSettings")
      .def(py::init([](double tolerance, int max_iterations, double nu,
                       double guess_amplitude, double guess_width) {
             PetviashviliSettings s;
             s.tolerance = tolerance;
             s.max_iterations = max_iterations;
             s.nu = nu;
             s.guess_amplitude = guess_amplitude;
             s.guess_width = guess_width;
             return s;
           }),
           py::arg("tolerance") = 1e-12, py::arg("max_iterations") = 500,
           py::arg("nu") = 0.0, py::arg("guess_amplitude") = 0.0,
           py::arg("guess_width") = 0.0)
      .def_readwrite("tolerance", &PetviashviliSettings::tolerance)
      .def_readwrite("max_iterations", &PetviashviliSettings::max_iterations)
      .def_readwrite("nu", &PetviashviliSettings::nu);

  py::class_<SolitaryWave>(m, "SolitaryWave")
      .def_readonly("params", &SolitaryWave::params)
      .def_readonly("grid", &SolitaryWave::grid)
      .def_property_readonly(
          "profile", [](const SolitaryWave& w) { return as_array(w.profile); })
      .def_readonly("residual", &SolitaryWave::residual)
      .def_readonly("iterations", &SolitaryWave::iterations)
      .def_property_readonly("stabilizing_factor_history",
                             [](const SolitaryWave& w) {
                               return as_array(w.stabilizing_factor_history);
                             })
      .def_readonly("domain_warning", &SolitaryWave::domain_warning)
      .def_readonly("aliasing_warning", &SolitaryWave::aliasing_warning)
      .def_readonly("even_symmetry_defect",
                    &SolitaryWave::even_symmetry_defect);

  py::class_<GroundState>(m, "GroundState")
      .def_readonly("alpha", &GroundState::alpha)
      .def_readonly("p", &GroundState::p)
      .def_readonly("grid", &GroundState::grid)
      .def_property_readonly(
          "profile", [](const GroundState& g) { return as_array(g.profile); })
      .def_readonly("residual", &GroundState::residual)
      .def_readonly("iterations", &GroundState::iterations);

  m.def("solve_petviashvili", &solve_petviashvili, py::arg("params"),
        py::arg("grid"), py::arg("settings") = PetviashviliSettings{});
  m.def("exact_solution", &exact_solution, py::arg("c"), py::arg("grid"));
  m.def("solve_ground_state", &solve_ground_state, py::arg("alpha"),
        py::arg("p"), py::arg("grid"),
        py::arg("settings") = PetviashviliSettings{});
  m.def(
      "ground_state_rescale",
      [](const py::array_t<double>& phi, const SpectralGrid& phi_grid,
         const ModelParams& params, const SpectralGrid& grid) {
        return ground_state_rescale(as_vector(phi), phi_grid, params, grid);
      },
      py::arg("normalized_profile"), py::arg("profile_grid"),
      py::arg("params"), py::arg("grid"));
  m.def("pohozaev_ratio", [](const SolitaryWave& wave) {
    const PohozaevRatio r = pohozaev_ratio(wave);
    return py::make_tuple(r.measured, r.predicted);
  });
  m.def(
      "equation_residual",
      [](const py::array_t<double>& profile, const ModelParams& params,
         const SpectralGrid& grid) {
        return equation_residual(as_vector(profile), params, grid);
      },
      py::arg("profile"), py::arg("params"), py::arg("grid"));
  m.def(
      "center_at_peak",
      [](const py::array_t<double>& field, const SpectralGrid& grid) {
        return as_array(center_at_peak(as_vector(field), grid));
      },
      py::arg("field"), py::arg("grid"));

  // spectral core
  m.def(
      "fractional_derivative",
      [](const py::array_t<double>& field, double order,
         const SpectralGrid& grid) {
        return as_array(fractional_derivative(as_vector(field), order, grid));
      },
      py::arg("field"), py::arg("order"), py::arg("grid"));
  m.def(
      "apply_symbol",
      [](const py::array_t<double>& field,
         const std::function<Complex(double)>& symbol,
         const SpectralGrid& grid) {
        return as_array(apply_symbol(as_vector(field), symbol, grid));
      },
      py::arg("field"), py::arg("symbol"), py::arg("grid"));
  m.def(
      "invert_bbm_operator",
      [](const py::array_t<double>& field, double alpha,
         const SpectralGrid& grid) {
        return as_array(invert_bbm_operator(as_vector(field), alpha, grid));
      },
      py::arg("field"), py::arg("alpha"), py::arg("grid"));
  m.def(
      "spectral_derivative",
      [](const py::array_t<double>& field, const SpectralGrid& grid) {
        return as_array(spectral_derivative(as_vector(field), grid));
      },
      py::arg("field"), py::arg("grid"));
  m.def(
      "translate",
      [](const py::array_t<double>& field, double shift,
         const SpectralGrid& grid) {
        return as_array(translate(as_vector(field), shift, grid));
      },
      py::arg("field"), py::arg("shift"), py::arg("grid"));
  m.def(
      "quadrature",
      [](const py::array_t<double>& field, const SpectralGrid& grid) {
        return quadrature(as_vector(field), grid);
      },
      py::arg("field"), py::arg("grid"));

  // stability
  py::enum_<Verdict>(m, "Verdict")
      .value("SpectrallyStable", Verdict::SpectrallyStable)
      .value("SpectrallyUnstable", Verdict::SpectrallyUnstable)
      .value("NoSolitaryWave", Verdict::NoSolitaryWave)
      .value("HamiltonianUndefined", Verdict::HamiltonianUndefined);

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("params", &StabilityReport::params)
      .def_readonly("k_derivative_sign", &StabilityReport::k_derivative_sign)
      .def_property_readonly("roots",
                             [](const StabilityReport& r) -> py::object {
                               if (!r.has_roots) return py::none();
                               return py::make_tuple(r.roots.c1, r.roots.c2);
                             })
      .def_readonly("n_negative", &StabilityReport::n_negative)
      .def_readonly("kernel_quality", &StabilityReport::kernel_quality)
      .def_readonly("essential_edge", &StabilityReport::essential_edge)
      .def_readonly("n_I", &StabilityReport::n_I)
      .def_property_readonly("verdict", [](const StabilityReport& r) {
        return std::string(to_string(r.verdict));
      });

  m.def("K_of_c", &K_of_c, py::arg("params"));
  m.def("dK_dc", &dK_dc, py::arg("params"));
  m.def(
      "critical_speeds",
      [](double alpha, int p) {
        const CriticalSpeeds roots = critical_speeds(alpha, p);
        return py::make_tuple(roots.c1, roots.c2);
      },
      py::arg("alpha"), py::arg("p"));
  m.def("classify", &classify, py::arg("params"));
  m.def(
      "assemble_Lc",
      [](const SolitaryWave& wave, int dense_cap) {
        return assemble_Lc(wave, dense_cap).matrix;
      },
      py::arg("wave"), py::arg("dense_cap") = 1 << 12);
  m.def(
      "spectrum_counts",
      [](const SolitaryWave& wave, int dense_cap) {
        const SpectrumCounts counts =
            spectrum_counts(assemble_Lc(wave, dense_cap), wave);
        py::dict out;
        out["n_negative"] = counts.n_negative;
        out["n_zero"] = counts.n_zero;
        out["kernel_quality"] = counts.kernel_quality;
        out["essential_edge"] = counts.essential_edge;
        return out;
      },
      py::arg("wave"), py::arg("dense_cap") = 1 << 12);
  m.def("momentum_derivative", &momentum_derivative, py::arg("params"),
        py::arg("grid"), py::arg("dc") = 1e-3,
        py::arg("settings") = PetviashviliSettings{});
  m.def(
      "growing_modes",
      [](const SolitaryWave& wave, int dense_cap) {
        const GrowingModes modes = growing_modes(wave, dense_cap);
        py::array_t<std::complex<double>> values(
            static_cast<py::ssize_t>(modes.eigenvalues.size()));
        std::copy(modes.eigenvalues.begin(), modes.eigenvalues.end(),
                  values.mutable_data());
        return py::make_tuple(values, modes.max_real_part);
      },
      py::arg("wave"), py::arg("dense_cap") = 1 << 12);
  m.def(
      "spectral_stability_report",
      [](const ModelParams& params, const SpectralGrid& grid,
         const PetviashviliSettings& settings, bool with_growing_modes) {
        const SpectrumReport rep = spectral_stability_report(
            params, grid, settings, with_growing_modes);
        py::dict out;
        out["verdict"] = std::string(to_string(rep.report.verdict));
        out["n_negative"] = rep.report.n_negative;
        out["n_I"] = rep.report.n_I;
        out["index"] = rep.index;
        out["kernel_quality"] = rep.report.kernel_quality;
        out["verdict_agreement"] = rep.verdict_agreement;
        if (std::isfinite(rep.max_re_lambda))
          out["max_re_lambda"] = rep.max_re_lambda;
        return out;
      },
      py::arg("params"), py::arg("grid"),
      py::arg("settings") = PetviashviliSettings{},
      py::arg("with_growing_modes") = false);

  // evolution
  py::class_<EvolutionState>(m, "EvolutionState")
      .def(py::init([](const py::array_t<double>& field) {
             EvolutionState state;
             state.field = as_vector(field);
             return state;
           }),
           py::arg("field"))
      .def_property_readonly(
          "field",
          [](const EvolutionState& s) { return as_array(s.field); })
      .def_readonly("time", &EvolutionState::time)
      .def_readonly("step_count", &EvolutionState::step_count);

  py::class_<InvariantRecord>(m, "InvariantRecord")
      .def_readonly("time", &InvariantRecord::time)
      .def_readonly("mass", &InvariantRecord::mass)
      .def_readonly("momentum", &InvariantRecord::momentum)
      .def_readonly("energy", &InvariantRecord::energy);

  m.def("invariants", &invariants, py::arg("state"), py::arg("params"),
        py::arg("grid"));

  py::class_<Evolver>(m, "Evolver")
      .def(py::init([](const ModelParams& params, const SpectralGrid& grid,
                       double dt, bool linear_only) {
             return Evolver(params, grid, dt, {linear_only});
           }),
           py::arg("params"), py::arg("grid"), py::arg("dt"),
           py::arg("linear_only") = false)
      .def_property_readonly("dt", &Evolver::dt)
      .def_property_readonly("max_abs_omega", &Evolver::max_abs_omega)
      .def("rhs",
           [](const Evolver& ev, const py::array_t<double>& u) {
             return as_array(ev.rhs(as_vector(u)));
           })
      .def("step", &Evolver::step, py::arg("state"))
      .def("linear_propagate",
           [](const Evolver& ev, const py::array_t<double>& u, double t) {
             return as_array(ev.linear_propagate(as_vector(u), t));
           });

  m.def(
      "linear_propagator",
      [](const py::array_t<double>& field, const ModelParams& params,
         const SpectralGrid& grid, double t) {
        return as_array(linear_propagator(as_vector(field), params, grid, t));
      },
      py::arg("field"), py::arg("params"), py::arg("grid"), py::arg("t"));

  m.def(
      "orbital_distance",
      [](const py::array_t<double>& u, const py::array_t<double>& reference,
         double alpha, const SpectralGrid& grid) {
        const OrbitalDistance d =
            orbital_distance(as_vector(u), as_vector(reference), alpha, grid);
        return py::make_tuple(d.distance, d.shift);
      },
      py::arg("u"), py::arg("reference"), py::arg("alpha"), py::arg("grid"));

  py::class_<EvolutionTrace>(m, "EvolutionTrace")
      .def_property_readonly(
          "times", [](const EvolutionTrace& t) { return as_array(t.times); })
      .def_property_readonly("peak_amplitude",
                             [](const EvolutionTrace& t) {
                               return as_array(t.peak_amplitude);
                             })
      .def_property_readonly("peak_location",
                             [](const EvolutionTrace& t) {
                               return as_array(t.peak_location);
                             })
      .def_property_readonly("orbital_distance",
                             [](const EvolutionTrace& t) {
                               return as_array(t.orbital_dist);
                             })
      .def_property_readonly(
          "mass",
          [](const EvolutionTrace& t) {
            std::vector<double> v;
            for (const InvariantRecord& r : t.invariant_series)
              v.push_back(r.mass);
            return as_array(v);
          })
      .def_property_readonly(
          "momentum",
          [](const EvolutionTrace& t) {
            std::vector<double> v;
            for (const InvariantRecord& r : t.invariant_series)
              v.push_back(r.momentum);
            return as_array(v);
          })
      .def_property_readonly(
          "energy",
          [](const EvolutionTrace& t) {
            std::vector<double> v;
            for (const InvariantRecord& r : t.invariant_series)
              v.push_back(r.energy);
            return as_array(v);
          })
      .def_readonly("aliasing_warning", &EvolutionTrace::aliasing_warning);

  m.def(
      "run_experiment",
      [](const SolitaryWave& base_wave, double gamma, double dt,
         double t_final, double sample_interval, bool record_snapshots) {
        ExperimentOptions options;
        options.sample_interval = sample_interval;
        options.record_snapshots = record_snapshots;
        return run_experiment({gamma}, base_wave, dt, t_final, options);
      },
      py::arg("base_wave"), py::arg("gamma") = 1.1, py::arg("dt") = 5e-4,
      py::arg("t_final") = 50.0, py::arg("sample_interval") = 0.5,
      py::arg("record_snapshots") = false);

  m.attr("__version__") = "0.1.0";
}
