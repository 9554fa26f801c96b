#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "mvlab/elliptic.hpp"
#include "mvlab/errors.hpp"
#include "mvlab/fields.hpp"
#include "mvlab/geometry.hpp"
#include "mvlab/kernels.hpp"
#include "mvlab/mcf.hpp"
#include "mvlab/parabolic.hpp"
#include "mvlab/reduced.hpp"
#include "mvlab/suites.hpp"

namespace py = pybind11;
using namespace mvlab;

namespace {

py::tuple estimate(const Estimate& e) { return py::make_tuple(e.value, e.error); }

/// Runs a computation without the GIL and converts the result with it held.
template <class F>
py::tuple released(F&& f) {
    Estimate e;
    {
        py::gil_scoped_release release;
        e = f();
    }
    return estimate(e);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mean value and monotonicity checks on model geometries";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
    py::register_exception<NoRegionError>(m, "NoRegionError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<UsageError>(m, "UsageError", base.ptr());

    py::class_<FlowGeometry>(m, "FlowGeometry")
        .def_static("euclidean", &FlowGeometry::euclidean, py::arg("n"))
        .def_static("gaussian_soliton", &FlowGeometry::gaussian_soliton, py::arg("n"))
        .def_static("hyperbolic", &FlowGeometry::hyperbolic, py::arg("n"), py::arg("k") = 1.0)
        .def_static("shrinking_sphere", &FlowGeometry::shrinking_sphere, py::arg("n"))
        .def_property_readonly("dimension", &FlowGeometry::dimension)
        .def_property_readonly("name", &FlowGeometry::name)
        .def("warp", &FlowGeometry::warp, py::arg("rho"), py::arg("t") = 0.0)
        .def("sphere_area", &FlowGeometry::sphere_area, py::arg("rho"), py::arg("t") = 0.0)
        .def("__repr__", [](const FlowGeometry& g) { return "FlowGeometry('" + g.name() + "')"; });

    m.def("parse_geometry", &parse_geometry, py::arg("name"), py::arg("dimension") = std::nullopt);

    py::class_<TestField>(m, "TestField")
        .def_property_readonly("name", &TestField::name)
        .def("mean", &TestField::mean, py::arg("rho"), py::arg("t") = 0.0)
        .def("mean_laplacian", &TestField::mean_laplacian, py::arg("rho"), py::arg("t") = 0.0)
        .def("center_value", &TestField::center_value, py::arg("t") = 0.0);
    m.def("make_field", &make_field, py::arg("name"), py::arg("geometry"));
    m.def("field_names", &field_names);

    py::class_<ReducedDistanceField, std::shared_ptr<ReducedDistanceField>>(m, "ReducedDistanceField")
        .def(py::init<const FlowGeometry&>(), py::arg("flow"))
        .def("ell", &ReducedDistanceField::ell, py::arg("rho"), py::arg("tau"),
             py::call_guard<py::gil_scoped_release>());
    m.def("reduced_volume",
          [](const ReducedDistanceField& f, double tau) { return released([&] { return reduced_volume(f, tau); }); },
          py::arg("field"), py::arg("tau"));
    m.def("sphere_reduced_distance", &sphere_reduced_distance, py::arg("n"), py::arg("rho"), py::arg("tau"));

    py::class_<Kernel>(m, "Kernel")
        .def_static("green", &Kernel::green, py::arg("geometry"))
        .def_static("sub_green", &Kernel::sub_green, py::arg("geometry"), py::arg("k"))
        .def_static("sup_green", &Kernel::sup_green, py::arg("geometry"))
        .def_static("heat", &Kernel::heat, py::arg("geometry"))
        .def_static("sub_heat", &Kernel::sub_heat, py::arg("field"))
        .def("value", &Kernel::value, py::arg("rho"), py::arg("tau") = 0.0)
        .def_property_readonly("parabolic", &Kernel::parabolic);

    m.def("elliptic_J", [](const Kernel& k, const TestField& v, double r) { return estimate(elliptic_J(k, v, r)); });
    m.def("elliptic_I", [](const Kernel& k, const TestField& v, double r) { return estimate(elliptic_I(k, v, r)); });
    m.def("mv_identity_residual", [](const Kernel& k, const TestField& v, double r, bool ball) {
        return mv_identity(k, v, r, ball ? MeanValueForm::ball : MeanValueForm::sphere).residual;
    }, py::arg("kernel"), py::arg("field"), py::arg("r"), py::arg("ball") = false);
    m.def("heat_ball_residual", [](const Kernel& k, const TestField& v, double r) {
        return mv_heat_ball(k, v, r).residual;
    });
    m.def("jhat", [](const Kernel& k, double r) { return released([&] { return jhat(k, r); }); });
    m.def("ihat", [](const Kernel& k, double a, double r) { return released([&] { return ihat(k, a, r); }); });
    m.def("gaussian_density", [](int n, double tau) { return estimate(gaussian_density(n, tau)); },
          py::arg("n"), py::arg("tau") = 1.0);
    m.def("jbar", [](int n, double r) { return estimate(jbar(n, r)); });
    m.def("ibar", [](int n, double a, double r) { return estimate(ibar(n, a, r)); });

    m.def("suite_names", &suite_names);
    m.def(
        "run_suite_json",
        [](const std::string& suite, const std::map<std::string, std::string>& settings) {
            Config c;
            for (const auto& [k, v] : settings) apply_setting(c, k, v);
            py::gil_scoped_release release;
            return to_json(run_suite(suite, c));
        },
        py::arg("suite"), py::arg("settings") = std::map<std::string, std::string>{});
    m.def(
        "run_sweep_csv",
        [](const std::map<std::string, std::string>& settings) {
            Config c;
            for (const auto& [k, v] : settings) apply_setting(c, k, v);
            py::gil_scoped_release release;
            return sweep_csv(run_sweep(c));
        },
        py::arg("settings"));
}
