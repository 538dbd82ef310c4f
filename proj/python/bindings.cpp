#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trilayer/config_io.hpp"
#include "trilayer/report.hpp"
#include "trilayer/trilayer.hpp"

namespace py = pybind11;
using namespace trilayer;

namespace {

py::object opt(const std::optional<double>& v) { return v ? py::object(py::float_(*v)) : py::object(py::none()); }

class PyModel {
 public:
  explicit PyModel(const ModelConfig& cfg) : cfg_(validate_config(cfg)), model_(make_model(cfg_)) {}

  const ValidatedConfig& config() const { return cfg_; }
  const Model& model() const { return model_; }

 private:
  ValidatedConfig cfg_;
  Model model_;
};

py::dict profile_dict(const RadialProfile& p) {
  py::dict out;
  out["R"] = p.R;
  out["sigma_bar"] = p.sigma_bar;
  out["rho"] = opt(p.rho);
  out["eta"] = opt(p.eta);
  std::vector<double> r, sigma, dsigma;
  for (const auto& pt : p.points()) {
    r.push_back(pt.r);
    sigma.push_back(pt.sigma);
    dsigma.push_back(pt.dsigma);
  }
  out["r"] = r;
  out["sigma"] = sigma;
  out["dsigma"] = dsigma;
  return out;
}

py::dict trajectory_dict(const Trajectory& traj) {
  std::vector<double> t, R;
  py::list rho, eta, state;
  for (const auto& s : traj.samples) {
    t.push_back(s.t);
    R.push_back(s.R);
    rho.append(opt(s.rho));
    eta.append(opt(s.eta));
    state.append(to_string(s.state));
  }
  py::list events;
  for (const auto& e : traj.events) {
    py::dict ev;
    ev["t"] = e.t;
    ev["from"] = to_string(e.from);
    ev["to"] = to_string(e.to);
    events.append(ev);
  }
  py::dict out;
  out["t"] = t;
  out["R"] = R;
  out["rho"] = rho;
  out["eta"] = eta;
  out["state"] = state;
  out["events"] = events;
  out["terminal"] = to_string(traj.terminal.kind);
  out["R_s"] = opt(traj.terminal.R_s);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radially symmetric three-layer tumor growth solver";

  // Module-lifetime type objects, intentionally never released.
  static const py::handle error = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
  static const py::handle validation = py::exception<ValidationError>(m, "ValidationError", error).release();
  // Instances carry the structured error name; validation errors also list
  // the violated clauses.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::list names;
      for (const auto& v : e.violations()) names.append(v.name);
      py::object exc = py::reinterpret_borrow<py::object>(validation)(e.what());
      exc.attr("name") = std::string(e.name());
      exc.attr("violations") = names;
      PyErr_SetObject(validation.ptr(), exc.ptr());
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
      exc.attr("name") = std::string(e.name());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<PyModel>(m, "Model")
      .def_static(
          "canonical", [](double sigma_bar, double R0) { return PyModel(canonical_config(sigma_bar, R0)); },
          py::arg("sigma_bar") = 2.0, py::arg("R0") = 1.0)
      .def_static("from_json", [](const std::string& text) { return PyModel(parse_config_json(text)); })
      .def_static("from_file", [](const std::string& path) { return PyModel(load_config(path)); })
      .def("to_json", [](const PyModel& self) { return config_to_json(self.config().to_config()); })
      .def_property_readonly("sigma_bar", [](const PyModel& self) { return self.config().sigma_bar(); })
      .def_property_readonly("R0", [](const PyModel& self) { return self.config().R0(); })
      .def("eta_star", [](const PyModel& self) { return self.model().maps->eta_star(); })
      .def("R_star", [](const PyModel& self, double sb) { return self.model().maps->R_star(sb); })
      .def("R_sub_star", [](const PyModel& self, double sb) { return self.model().maps->R_sub_star(sb); })
      .def("R_q_star", [](const PyModel& self, double sb) { return self.model().maps->R_q_star(sb); })
      .def("eta_of_rho", [](const PyModel& self, double rho) { return self.model().maps->eta_of_rho(rho); })
      .def("eta_of_R",
           [](const PyModel& self, double R, double sb) { return self.model().maps->eta_of_R(R, sb); })
      .def("rho_of_R",
           [](const PyModel& self, double R, double sb) { return self.model().maps->rho_of_R(R, sb); })
      .def("growth_functional",
           [](const PyModel& self, double R, double sb) { return self.model().growth->growth_functional(R, sb); })
      .def("critical_values",
           [](const PyModel& self) {
             const auto cv = self.model().growth->critical_values();
             py::dict out;
             out["sigma_star"] = cv.sigma_star;
             out["sigma_sub_star"] = cv.sigma_sub_star;
             return out;
           })
      .def("stationary",
           [](const PyModel& self, double sb) {
             const auto st = self.model().growth->stationary_solution(sb);
             py::dict out;
             out["kind"] = to_string(st.kind);
             out["R_s"] = opt(st.R_s);
             out["eta_s"] = opt(st.eta_s);
             out["rho_s"] = opt(st.rho_s);
             out["residual"] = st.residual;
             return out;
           })
      .def("profile",
           [](const PyModel& self, double R, double sb) {
             return profile_dict(self.model().maps->assemble_profile(R, sb));
           })
      .def("classify",
           [](const PyModel& self, double R, double sb) {
             return std::string(to_string(self.model().evolution->classify_structure(R, sb)));
           })
      .def(
          "evolve",
          [](const PyModel& self, double R0, double sb, double t_end, double sample_dt) {
            Trajectory traj;
            {
              py::gil_scoped_release release;
              traj = self.model().evolution->evolve(R0, sb, t_end, sample_dt);
            }
            return trajectory_dict(traj);
          },
          py::arg("R0"), py::arg("sigma_bar"), py::arg("t_end"), py::arg("sample_dt"));

  m.def("format_number", &report::format_number);
}
