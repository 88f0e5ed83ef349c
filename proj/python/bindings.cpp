#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "gwp/fields.hpp"
#include "gwp/integrators.hpp"
#include "gwp/io.hpp"
#include "gwp/observables.hpp"
#include "gwp/scenarios.hpp"
#include "gwp/state.hpp"

namespace py = pybind11;
using namespace gwp;

namespace {

const TrigField2D& as_trig(const FieldModel& f) {
  const auto* t = dynamic_cast<const TrigField2D*>(&f);
  if (t == nullptr) throw ValidationError("field is not the planar model");
  return *t;
}

const PenningField3D& as_penning(const FieldModel& f) {
  const auto* p = dynamic_cast<const PenningField3D*>(&f);
  if (p == nullptr) throw ValidationError("field is not the trap model");
  return *p;
}

std::string field_kind(const FieldModel& f) {
  if (dynamic_cast<const TrigField2D*>(&f) != nullptr) return "trig";
  if (dynamic_cast<const PenningField3D*>(&f) != nullptr) return "penning";
  return "custom";
}

AverageEngine make_engine(const FieldModel& field, const std::string& mode,
                          int quad_order) {
  return AverageEngine(field, averages_mode_from_string(mode), quad_order);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variational Gaussian wave packets in magnetic fields";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "GwpError");
  py::register_exception<ValidationError>(m, "GwpValidationError",
                                          PyExc_ValueError);

  py::class_<FieldModel, std::shared_ptr<FieldModel>>(m, "Field")
      .def_property_readonly("dim", &FieldModel::dim)
      .def_property_readonly("kind",
                             [](const FieldModel& f) { return field_kind(f); })
      .def("A", &FieldModel::A, py::arg("t"), py::arg("x"))
      .def("phi", &FieldModel::phi, py::arg("t"), py::arg("x"))
      .def("B", &FieldModel::B, py::arg("t"), py::arg("x"))
      .def("__repr__", [](const FieldModel& f) {
        return "<Field kind='" + field_kind(f) + "' dim=" +
               std::to_string(f.dim()) + ">";
      });

  m.def(
      "trig_field",
      [](double alpha) -> std::shared_ptr<FieldModel> {
        return std::make_shared<TrigField2D>(alpha);
      },
      py::arg("alpha") = 0.0);
  m.def(
      "penning_field",
      [](double r_omega, double r_b) -> std::shared_ptr<FieldModel> {
        return std::make_shared<PenningField3D>(r_omega, r_b);
      },
      py::arg("r_omega"), py::arg("r_b") = -1.0);

  py::class_<WavePacketState>(m, "WavePacketState")
      .def(py::init<>())
      .def_readwrite("eps", &WavePacketState::eps)
      .def_readwrite("t", &WavePacketState::t)
      .def_readwrite("q", &WavePacketState::q)
      .def_readwrite("v", &WavePacketState::v)
      .def_readwrite("Q", &WavePacketState::Q)
      .def_readwrite("Ups", &WavePacketState::Ups)
      .def_readwrite("zeta_R", &WavePacketState::zeta_R)
      .def_readwrite("zeta_I", &WavePacketState::zeta_I)
      .def_property_readonly("dim", &WavePacketState::dim)
      .def("__repr__", [](const WavePacketState& s) {
        return "<WavePacketState dim=" + std::to_string(s.dim()) +
               " t=" + std::to_string(s.t) + ">";
      });

  py::class_<CanonicalState>(m, "CanonicalState")
      .def(py::init<>())
      .def_readwrite("eps", &CanonicalState::eps)
      .def_readwrite("t", &CanonicalState::t)
      .def_readwrite("q", &CanonicalState::q)
      .def_readwrite("p", &CanonicalState::p)
      .def_readwrite("Q", &CanonicalState::Q)
      .def_readwrite("P", &CanonicalState::P)
      .def_readwrite("zeta_R", &CanonicalState::zeta_R)
      .def_readwrite("zeta_I", &CanonicalState::zeta_I)
      .def_property_readonly("dim", &CanonicalState::dim);

  m.def(
      "sublinear_initial",
      [](double eps, const FieldModel& f) {
        return sublinear_initial(eps, as_trig(f));
      },
      py::arg("eps"), py::arg("field"));
  m.def(
      "penning_initial",
      [](double eps, const FieldModel& f) {
        return penning_initial(eps, as_penning(f));
      },
      py::arg("eps"), py::arg("field"));
  m.def(
      "penning_coherent_initial",
      [](double eps, const FieldModel& f) {
        return penning_coherent_initial(eps, as_penning(f));
      },
      py::arg("eps"), py::arg("field"));

  m.def("l2_norm_squared",
        py::overload_cast<const WavePacketState&>(&l2_norm_squared),
        py::arg("state"));
  m.def(
      "to_canonical",
      [](const WavePacketState& s, const FieldModel& field,
         const std::string& mode, int quad_order) {
        const AverageEngine engine = make_engine(field, mode, quad_order);
        const FieldAverages fa = engine.field_averages(s);
        return to_canonical(s, fa.A, fa.JA);
      },
      py::arg("state"), py::arg("field"), py::arg("mode") = "auto",
      py::arg("quad_order") = 10);

  py::class_<RunOutput>(m, "RunOutput")
      .def_property_readonly(
          "integrator",
          [](const RunOutput& r) { return integrator_name(r.integrator); })
      .def_readonly("eps", &RunOutput::eps)
      .def_readonly("tau", &RunOutput::tau)
      .def_readonly("failed", &RunOutput::failed)
      .def_readonly("error", &RunOutput::error)
      .def_readonly("records", &RunOutput::records)
      .def_readonly("runtime_s", &RunOutput::runtime_s);

  m.def(
      "run_trajectory",
      [](const FieldModel& field, const WavePacketState& s0,
         const std::string& integrator, double tau, long nsteps,
         const std::string& mode, int quad_order) {
        return run_trajectory(field, s0, integrator_from_string(integrator),
                              tau, nsteps, averages_mode_from_string(mode),
                              quad_order);
      },
      py::arg("field"), py::arg("state"), py::arg("integrator"),
      py::arg("tau"), py::arg("nsteps"), py::arg("mode") = "auto",
      py::arg("quad_order") = 10,
      py::call_guard<py::gil_scoped_release>());

  py::class_<Diagnostics>(m, "Diagnostics")
      .def_readonly("norm", &Diagnostics::norm)
      .def_readonly("energy", &Diagnostics::energy)
      .def_readonly("sympl_r1", &Diagnostics::sympl_r1)
      .def_readonly("sympl_r2", &Diagnostics::sympl_r2)
      .def_readonly("det_Q_abs", &Diagnostics::det_Q_abs);

  m.def(
      "diagnostics",
      [](const WavePacketState& s, const FieldModel& field,
         const std::string& mode, int quad_order) {
        return diagnostics(s, make_engine(field, mode, quad_order));
      },
      py::arg("state"), py::arg("field"), py::arg("mode") = "auto",
      py::arg("quad_order") = 10);
  m.def(
      "energy",
      [](const WavePacketState& s, const FieldModel& field,
         const std::string& mode, int quad_order) {
        return energy(s, make_engine(field, mode, quad_order));
      },
      py::arg("state"), py::arg("field"), py::arg("mode") = "auto",
      py::arg("quad_order") = 10);

  py::class_<L2Result>(m, "L2Result")
      .def_readonly("distance", &L2Result::distance)
      .def_readonly("saturated", &L2Result::saturated);
  m.def(
      "l2_distance",
      [](const WavePacketState& a, const WavePacketState& b,
         const FieldModel& field, int order, const std::string& mode,
         int quad_order) {
        return l2_distance(a, b, make_engine(field, mode, quad_order), order);
      },
      py::arg("a"), py::arg("b"), py::arg("field"), py::arg("order") = 24,
      py::arg("mode") = "auto", py::arg("quad_order") = 10);

  py::class_<ParameterErrors>(m, "ParameterErrors")
      .def_readonly("q", &ParameterErrors::q)
      .def_readonly("p", &ParameterErrors::p)
      .def_readonly("Q", &ParameterErrors::Q)
      .def_readonly("P", &ParameterErrors::P)
      .def_readonly("zeta_R", &ParameterErrors::zeta_R)
      .def_readonly("zeta_I", &ParameterErrors::zeta_I)
      .def("max", &ParameterErrors::max);
  m.def("parameter_errors", &parameter_errors, py::arg("a"), py::arg("b"));

  py::class_<TrapParameters>(m, "TrapParameters")
      .def(py::init<>())
      .def_readwrite("mass_kg", &TrapParameters::mass_kg)
      .def_readwrite("B0_tesla", &TrapParameters::B0_tesla)
      .def_readwrite("phi0_volts", &TrapParameters::phi0_volts)
      .def_readwrite("delta_m", &TrapParameters::delta_m);
  py::class_<PenningScalingResult>(m, "PenningScalingResult")
      .def_readonly("omega_c", &PenningScalingResult::omega_c)
      .def_readonly("omega_3", &PenningScalingResult::omega_3)
      .def_readonly("Omega", &PenningScalingResult::Omega)
      .def_readonly("omega_plus", &PenningScalingResult::omega_plus)
      .def_readonly("omega_minus", &PenningScalingResult::omega_minus)
      .def_readonly("nu_plus", &PenningScalingResult::nu_plus)
      .def_readonly("nu_3", &PenningScalingResult::nu_3)
      .def_readonly("nu_minus", &PenningScalingResult::nu_minus)
      .def_readonly("ratio_omega", &PenningScalingResult::ratio_omega)
      .def_readonly("ratio_B", &PenningScalingResult::ratio_B)
      .def_readonly("eps", &PenningScalingResult::eps);
  m.def("proton_trap", &proton_trap);
  m.def("electron_trap", &electron_trap);
  m.def("penning_scaling", &penning_scaling, py::arg("trap"));

  m.def("preset_names", &preset_names);
  m.def(
      "preset_json",
      [](const std::string& name) { return spec_to_json(preset_spec(name)); },
      py::arg("name"));
  m.def(
      "run_experiment_json",
      [](const std::string& spec_json, int jobs) {
        return summary_to_json(run_experiment(spec_from_json(spec_json), jobs));
      },
      py::arg("spec_json"), py::arg("jobs") = 1,
      py::call_guard<py::gil_scoped_release>());
}
