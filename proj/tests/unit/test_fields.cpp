#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mvlab/errors.hpp"
#include "mvlab/fields.hpp"
#include "mvlab/numerics.hpp"

using namespace mvlab;

namespace {

/// Sphere mean on R^3 by nested quadrature over hyperspherical angles.
double sphere_mean_r3(const TestField& f, double rho, double t) {
    const auto outer = [&](double a) {
        const auto inner = [&](double b) { return f.value({rho, t, {a, b}}); };
        return integrate(inner, 0.0, 2.0 * std::numbers::pi).value * std::sin(a);
    };
    return integrate(outer, 0.0, std::numbers::pi).value / (4.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("catalog means match quadrature on R^3") {
    const auto e3 = FlowGeometry::euclidean(3);
    for (const auto& name : field_names()) {
        const TestField f = make_field(name, e3);
        for (double rho : {0.3, 1.1}) {
            CAPTURE(name);
            CAPTURE(rho);
            CHECK(sphere_mean_r3(f, rho, 0.2) == doctest::Approx(f.mean(rho, 0.2)).epsilon(1e-8));
        }
    }
}

TEST_CASE("radial laplacian on H^3 against finite differences") {
    const auto h3 = FlowGeometry::hyperbolic(3);
    const TestField f = make_field("exp-radial", h3);
    const double rho = 0.8, h = 1e-3;
    const auto v = [&](double r) { return f.mean(r); };
    const Derivatives d = central_derivatives(v, rho, h);
    const double lap = d.d2 + 2.0 / std::tanh(rho) * d.d1;
    CHECK(f.mean_laplacian(rho) == doctest::Approx(lap).epsilon(1e-8));
}

TEST_CASE("classification tags hold on samples") {
    const auto e3 = FlowGeometry::euclidean(3);
    const auto h3 = FlowGeometry::hyperbolic(3);
    std::vector<SpaceTimePoint> pts;
    for (double r : {0.1, 0.5, 1.5})
        for (double a : {0.3, 1.2, 2.5}) pts.push_back({r, 0.1, {a, 0.7}});
    for (const auto& name : field_names()) CHECK(classification_check(make_field(name, e3), pts) < 1e-12);
    for (const char* name : {"constant-1", "subharmonic", "superharmonic", "exp-radial"})
        CHECK(classification_check(make_field(name, h3), pts) < 1e-12);
    CHECK(make_field("superharmonic", e3).tag() == FieldClass::superharmonic);
    CHECK(make_field("caloric-quadratic", e3).tag() == FieldClass::caloric);
}

TEST_CASE("sphere minimum and center value") {
    const auto e3 = FlowGeometry::euclidean(3);
    CHECK(make_field("superharmonic", e3).center_value() == doctest::Approx(10.0));
    CHECK(make_field("harmonic-quadratic", e3).sphere_min(2.0) == doctest::Approx(-4.0));
    CHECK(make_field("caloric-quadratic", e3).center_value(0.5) == doctest::Approx(3.0));
}

TEST_CASE("unsupported combinations") {
    CHECK_THROWS_AS(make_field("linear", FlowGeometry::hyperbolic(3)), UnsupportedError);
    CHECK_THROWS_AS(make_field("exp-radial", FlowGeometry::shrinking_sphere(3)), UnsupportedError);
    CHECK_THROWS_AS(make_field("nope", FlowGeometry::euclidean(3)), UnsupportedError);
    CHECK_NOTHROW(make_field("constant-1", FlowGeometry::shrinking_sphere(3)));
}
