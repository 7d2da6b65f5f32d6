#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopfkit/atlas.hpp"
#include "hopfkit/classify.hpp"
#include "hopfkit/errors.hpp"
#include "hopfkit/report.hpp"
#include "hopfkit/system_io.hpp"
#include "hopfkit/verify.hpp"

namespace py = pybind11;
using namespace hopfkit;

namespace {


py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hopf bifurcation analysis of planar polynomial systems";

  static py::exception<Error> base(m, "HopfkitError");
  static py::exception<InputError> input(m, "InputError", base.ptr());
  static py::exception<NumericError> numeric(m, "NumericError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      PyErr_SetString(input.ptr(), e.what());
    } catch (const NumericError& e) {
      PyErr_SetString(numeric.ptr(), e.what());
    }
  });

  py::class_<ParamField>(m, "System")
      .def_property_readonly("degree", &ParamField::degree)
      .def_property_readonly("a_star", &ParamField::a_star)
      .def("to_json", [](const ParamField& f) { return field_to_json(f).dump(); });

  m.def("atlas_system", &atlas_system, py::arg("name"), py::arg("beta") = 1.0);
  m.def("atlas_names", [] {
    std::vector<std::string> out;
    for (const auto& e : atlas()) out.push_back(e.name);
    return out;
  });
  m.def("parse_system", [](const std::string& text) { return parse_system(text); }, py::arg("text"));

  m.def(
      "jacobian_summary",
      [](const ParamField& vf, double a) { return json_to_py(to_json(jacobian_summary(vf, a))); },
      py::arg("system"), py::arg("a"));
  m.def("a_of_tau", &a_of_tau, py::arg("system"), py::arg("tau"));

  m.def(
      "find_cycles",
      [](const ParamField& vf, double a, double r_min, double r_max, double tol, double disk,
         bool reverse) {
        VerifyOptions opt;
        opt.tol = tol;
        opt.disk_radius = disk;
        opt.reverse_time = reverse;
        py::list out;
        for (const auto& c : find_cycles(vf, a, r_min, r_max, opt)) out.append(json_to_py(to_json(c)));
        return out;
      },
      py::arg("system"), py::arg("a"), py::arg("r_min") = 1e-4, py::arg("r_max") = 1.5,
      py::arg("tol") = 1e-10, py::arg("disk_radius") = 10.0, py::arg("reverse_time") = false);

  m.def(
      "classify",
      [](const ParamField& vf, std::vector<double> taus) {
        if (taus.empty()) taus = tau_window();
        return json_to_py(to_json(classify(vf, taus)));
      },
      py::arg("system"), py::arg("taus") = std::vector<double>{});

  m.def(
      "analyze", [](const ParamField& vf, double a) { return json_to_py(analyze_report(vf, a)); },
      py::arg("system"), py::arg("a"));

  m.def(
      "predict_cycles",
      [](double c3, double c5, double tau) {
        py::list out;
        for (const auto& p : predict_cycles(c3, c5, tau)) out.append(json_to_py(to_json(p)));
        return out;
      },
      py::arg("c3"), py::arg("c5"), py::arg("tau"));

  m.def(
      "sweep",
      [](const ParamField& vf, const std::vector<double>& taus) {
        return json_to_py(to_json(scaling_sweep(vf, taus)));
      },
      py::arg("system"), py::arg("taus"));

}
