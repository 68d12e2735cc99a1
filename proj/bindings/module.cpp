// Python bindings for the magflow core.  The surface group is a process-wide
// singleton so Python callers never juggle its lifetime; everything that
// needs a group uses it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magflow/config.hpp"
#include "magflow/crit.hpp"
#include "magflow/field.hpp"
#include "magflow/flow.hpp"
#include "magflow/halfplane.hpp"
#include "magflow/radon.hpp"
#include "magflow/surface.hpp"
#include "magflow/verify.hpp"

namespace py = pybind11;
using namespace magflow;

namespace {

const SurfaceGroup& group() {
  static SurfaceGroup g = build_genus2_group();
  return g;
}

}  // namespace

PYBIND11_MODULE(_magflow, m) {
  m.doc() =
      "Magnetic flows on a genus-2 hyperbolic surface: helicity, Mane critical "
      "values, trajectories, and disk Radon transforms.";
  m.attr("__version__") = "0.1.0";

  // ---- half-plane primitives ----
  py::class_<Point>(m, "Point")
      .def(py::init<double, double>(), py::arg("x") = 0.0, py::arg("y") = 1.0)
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y)
      .def("__repr__", [](const Point& p) {
        return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
      });

  m.def("hyp_distance", &hyp_distance, py::arg("p"), py::arg("q"));
  m.def("disk_area", &disk_area, py::arg("r"));
  m.def("circle_length", &circle_length, py::arg("r"));
  m.def("polar_point", &polar_point, py::arg("center"), py::arg("phi"), py::arg("rho"));

  py::class_<GeodesicCircle>(m, "GeodesicCircle")
      .def(py::init([](const Point& center, double radius) {
             return GeodesicCircle{center, radius};
           }),
           py::arg("center"), py::arg("radius"))
      .def_readwrite("center", &GeodesicCircle::center)
      .def_readwrite("radius", &GeodesicCircle::radius);

  // ---- surface group ----
  py::class_<SurfaceGroup>(m, "SurfaceGroup")
      .def_readonly("base", &SurfaceGroup::base)
      .def_readonly("circumradius", &SurfaceGroup::circumradius)
      .def_readonly("inradius", &SurfaceGroup::inradius)
      .def_readonly("relator_residual", &SurfaceGroup::relator_residual)
      .def("diameter", &SurfaceGroup::diameter);
  m.def("genus2_group", &group, py::return_value_policy::reference,
        "The octagon surface group (process-wide singleton).");
  m.def("injectivity_radius", &injectivity_radius);

  py::class_<RadialBump>(m, "RadialBump")
      .def(py::init([](const Point& center, double amplitude, double support) {
             return RadialBump{center, amplitude, support};
           }),
           py::arg("center"), py::arg("amplitude"), py::arg("support"))
      .def_readwrite("center", &RadialBump::center)
      .def_readwrite("amplitude", &RadialBump::amplitude)
      .def_readwrite("support", &RadialBump::support);

  py::class_<InvariantScalar>(m, "InvariantScalar")
      .def(py::init([](double constant, std::vector<RadialBump> bumps) {
             return InvariantScalar(group(), constant, std::move(bumps));
           }),
           py::arg("constant") = 0.0, py::arg("bumps") = std::vector<RadialBump>{})
      .def("value", &InvariantScalar::value, py::arg("p"))
      .def("integral", &InvariantScalar::integral)
      .def_property_readonly("constant", &InvariantScalar::constant_part)
      .def_property_readonly("bumps", &InvariantScalar::bumps);

  py::class_<InvariantOneForm>(m, "InvariantOneForm")
      .def(py::init([](std::vector<RadialBump> bumps) {
             return InvariantOneForm(group(), std::move(bumps));
           }),
           py::arg("bumps") = std::vector<RadialBump>{})
      .def("density", &InvariantOneForm::density, py::arg("p"))
      .def_property_readonly("trivial", &InvariantOneForm::empty);

  // ---- metric, magnetic field, helicity ----
  py::class_<ConformalMetric>(m, "ConformalMetric")
      .def(py::init([](const InvariantScalar& u, int quad_order) {
             return ConformalMetric(group(), u, quad_order);
           }),
           py::arg("u"), py::arg("quad_order") = 40)
      .def("area", &ConformalMetric::area)
      .def("conformal_factor", &ConformalMetric::conformal_factor, py::arg("p"))
      .def("gauss_curvature", &ConformalMetric::gauss_curvature, py::arg("p"));

  py::class_<MagneticField>(m, "MagneticField")
      .def(py::init<double, InvariantOneForm>(), py::arg("a"), py::arg("beta0"))
      .def_property_readonly("a", &MagneticField::a);

  m.def("total_flux", &total_flux, py::arg("sigma"));
  m.def("helicity_formula", &helicity_formula, py::arg("g"), py::arg("sigma"));
  m.def("helicity_integral", &helicity_integral, py::arg("g"), py::arg("sigma"),
        py::arg("order") = 44, py::arg("fiber_order") = 16);
  m.def("s_h_value", &s_h_value, py::arg("g"), py::arg("sigma"),
        "sqrt(4 pi A) / |total flux|, or None on an exact field.");

  // ---- magnetic flow ----
  py::class_<PhaseState>(m, "PhaseState")
      .def(py::init([](double x, double y, double theta) {
             return PhaseState{x, y, theta};
           }),
           py::arg("x") = 0.0, py::arg("y") = 1.0, py::arg("theta") = 0.0)
      .def_readwrite("x", &PhaseState::x)
      .def_readwrite("y", &PhaseState::y)
      .def_readwrite("theta", &PhaseState::theta)
      .def("point", &PhaseState::point);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("time", &Trajectory::time)
      .def_readonly("state", &Trajectory::state)
      .def_readonly("dt", &Trajectory::dt)
      .def_readonly("max_step_error", &Trajectory::max_step_error);

  py::class_<CircleOrbit>(m, "CircleOrbit")
      .def_readonly("radius", &CircleOrbit::radius)
      .def_readonly("period", &CircleOrbit::period);

  m.def("integrate", &integrate, py::arg("g"), py::arg("sigma"), py::arg("s"), py::arg("start"),
        py::arg("T"), py::arg("dt"), py::arg("err_tol") = 1e-6);
  m.def("circle_orbit_oracle", &circle_orbit_oracle, py::arg("kappa"));
  m.def("detect_period", &detect_period, py::arg("traj"), py::arg("tol"));

  // ---- critical value ----
  py::class_<PrimitiveFamily>(m, "PrimitiveFamily")
      .def(py::init<>())
      .def_readwrite("amplitude", &PrimitiveFamily::amplitude)
      .def_readwrite("shape", &PrimitiveFamily::shape)
      .def_readwrite("samples", &PrimitiveFamily::samples)
      .def_readwrite("translate_count", &PrimitiveFamily::translate_count);

  py::class_<CritBudget>(m, "CritBudget")
      .def(py::init<>())
      .def_readwrite("r_grid", &CritBudget::r_grid)
      .def_readwrite("center_grid", &CritBudget::center_grid)
      .def_readwrite("family", &CritBudget::family)
      .def_readwrite("sandwich_tol", &CritBudget::sandwich_tol);

  py::class_<CriticalEstimate>(m, "CriticalEstimate")
      .def_readonly("lower", &CriticalEstimate::lower)
      .def_readonly("upper", &CriticalEstimate::upper)
      .def_readonly("best_circle", &CriticalEstimate::best_circle)
      .def_readonly("best_amplitude", &CriticalEstimate::best_amplitude)
      .def_readonly("best_shape", &CriticalEstimate::best_shape)
      .def_readonly("sample_count", &CriticalEstimate::sample_count);

  py::class_<ScInterval>(m, "ScInterval")
      .def_readonly("lo", &ScInterval::lo)
      .def_readonly("hi", &ScInterval::hi)
      .def_readonly("bounded", &ScInterval::bounded);

  py::class_<TheoremGapReport>(m, "TheoremGapReport")
      .def_readonly("estimate", &TheoremGapReport::estimate)
      .def_readonly("s_c", &TheoremGapReport::s_c)
      .def_readonly("s_h", &TheoremGapReport::s_h)
      .def_readonly("rho_g", &TheoremGapReport::rho_g)
      .def_readonly("gk_rhs", &TheoremGapReport::gk_rhs)
      .def_readonly("gk_residual", &TheoremGapReport::gk_residual)
      .def_readonly("gap", &TheoremGapReport::gap)
      .def_readonly("u_constant", &TheoremGapReport::u_constant)
      .def_readonly("beta_trivial", &TheoremGapReport::beta_trivial);

  py::class_<PropositionReport>(m, "PropositionReport")
      .def_readonly("c_upper", &PropositionReport::c_upper)
      .def_readonly("rho_g", &PropositionReport::rho_g)
      .def_readonly("twice_c", &PropositionReport::twice_c)
      .def_readonly("twice_rho2_c", &PropositionReport::twice_rho2_c)
      .def_readonly("rhs", &PropositionReport::rhs);

  m.def("estimate_critical_value", &estimate_critical_value, py::arg("g"), py::arg("sigma"),
        py::arg("budget") = CritBudget{});
  m.def("s_c_value", &s_c_value, py::arg("estimate"));
  m.def("theorem_gap_report", &theorem_gap_report, py::arg("g"), py::arg("sigma"),
        py::arg("budget") = CritBudget{}, py::arg("tol") = 1e-3);
  m.def("proposition_check", &proposition_check, py::arg("g"), py::arg("sigma"),
        py::arg("family") = PrimitiveFamily{}, py::arg("slack") = 1e-6);

  // ---- disk Radon transform ----
  py::class_<MeanValueCheck>(m, "MeanValueCheck")
      .def_readonly("lhs_re", &MeanValueCheck::lhs_re)
      .def_readonly("rhs_re", &MeanValueCheck::rhs_re)
      .def_readonly("lhs_im", &MeanValueCheck::lhs_im)
      .def_readonly("rhs_im", &MeanValueCheck::rhs_im)
      .def_readonly("residual", &MeanValueCheck::residual);

  py::class_<GrowthRow>(m, "GrowthRow")
      .def_readonly("n", &GrowthRow::n)
      .def_readonly("r", &GrowthRow::r)
      .def_readonly("value", &GrowthRow::value)
      .def_readonly("bound", &GrowthRow::bound);

  py::class_<RadonProbeReport>(m, "RadonProbeReport")
      .def_readonly("center", &RadonProbeReport::center)
      .def_readonly("radius", &RadonProbeReport::radius)
      .def_readonly("value", &RadonProbeReport::value)
      .def_readonly("running_max", &RadonProbeReport::running_max)
      .def_readonly("max_abs", &RadonProbeReport::max_abs);

  m.def("q_kernel_real", &q_kernel_real, py::arg("r"), py::arg("s"));
  m.def("q_kernel_imag", &q_kernel_imag, py::arg("r"), py::arg("alpha"));
  m.def("eigenfunction_mean_value_check", &eigenfunction_mean_value_check, py::arg("s"),
        py::arg("center"), py::arg("r"));
  m.def("disk_radon", &disk_radon, py::arg("h"), py::arg("x"), py::arg("r"),
        py::arg("order") = 64);
  m.def("disk_radon_sites", &disk_radon_sites, py::arg("h"), py::arg("x"), py::arg("r"));
  m.def("growth_check", &growth_check, py::arg("s"), py::arg("n_max"));
  m.def("boundedness_probe", &boundedness_probe, py::arg("h"), py::arg("r_grid"),
        py::arg("x_grid"));

  // ---- acceptance battery ----
  py::class_<CriterionResult>(m, "CriterionResult")
      .def_readonly("id", &CriterionResult::id)
      .def_readonly("label", &CriterionResult::label)
      .def_readonly("passed", &CriterionResult::pass)
      .def_readonly("detail", &CriterionResult::detail);
  m.def("run_acceptance", &run_acceptance);
}
