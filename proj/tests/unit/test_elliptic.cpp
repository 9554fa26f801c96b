#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mvlab/elliptic.hpp"
#include "mvlab/errors.hpp"
#include "mvlab/fields.hpp"

using namespace mvlab;

TEST_CASE("mean value identity on R^3") {
    const auto e3 = FlowGeometry::euclidean(3);
    const Kernel g = Kernel::green(e3);
    for (const char* name : {"constant-1", "superharmonic", "subharmonic", "gaussian-translate"}) {
        const TestField v = make_field(name, e3);
        for (auto form : {MeanValueForm::sphere, MeanValueForm::ball}) {
            CAPTURE(name);
            CHECK(std::abs(mv_identity(g, v, 1.3, form).residual) < 1e-9);
        }
    }
}

TEST_CASE("J and I of v = 10 - |y|^2") {
    const auto e3 = FlowGeometry::euclidean(3);
    const Kernel g = Kernel::green(e3);
    const TestField v = make_field("superharmonic", e3);
    // Sphere radius r^3 / (4 pi): J = 10 - rho*^2.
    const double rs = 1.0 / (4.0 * std::numbers::pi);
    CHECK(elliptic_J(g, v, 1.0).value == doctest::Approx(10.0 - rs * rs));
    CHECK(elliptic_J_slope(g, v, 1.0).value == doctest::Approx(-3.0 / (8.0 * std::numbers::pi * std::numbers::pi)));
    const DerivativeCheck d = elliptic_derivative_check(g, v, 1.0, false, 1e-6);
    CHECK(d.ok);
    CHECK(d.fd == doctest::Approx(-0.037995443865876664).epsilon(1e-6));
    CHECK(elliptic_relation_residual(g, v, 0.8) < 1e-9);
}

TEST_CASE("co-area identity") {
    const Kernel g = Kernel::green(FlowGeometry::euclidean(3));
    CHECK(std::abs(coarea_check(g, [](double rho) { return std::cos(rho); }, 1.0).value) < 1e-9);
}

TEST_CASE("comparison inequalities on H^3") {
    const auto h3 = FlowGeometry::hyperbolic(3);
    const TestField one = make_field("constant-1", h3);
    const Estimate eq = mv_inequality_deficit(Kernel::sub_green(h3, 1.0), one, 1.0, MeanValueForm::ball);
    CHECK(std::abs(eq.value) < 1e-9);
    const Estimate sup = mv_inequality_deficit(Kernel::sup_green(h3), one, 1.0, MeanValueForm::sphere);
    CHECK(sup.value > 1e-3);
    const TestField neg = make_field("harmonic-quadratic", FlowGeometry::euclidean(3));
    CHECK_THROWS_AS(mv_inequality_deficit(Kernel::sub_green(FlowGeometry::euclidean(3), 0.0), neg, 1.0,
                                          MeanValueForm::sphere),
                    PreconditionError);
}

TEST_CASE("directions and sweeps") {
    const auto e3 = FlowGeometry::euclidean(3);
    const Kernel g = Kernel::green(e3);
    CHECK(elliptic_direction(g, make_field("superharmonic", e3)) == Direction::non_increasing);
    CHECK(elliptic_direction(g, make_field("subharmonic", e3)) == Direction::non_decreasing);
    CHECK(elliptic_direction(g, make_field("linear", e3)) == Direction::constant);
    const EllipticSweep s = elliptic_sweep(g, make_field("subharmonic", e3), {0.5, 1.0, 1.5, 2.0}, 1e-6, 2);
    CHECK(s.J.monotone);
    CHECK(s.I.monotone);
    CHECK(s.J.values.size() == 4);
    CHECK(s.relation_residual < 1e-8);
    CHECK_THROWS_AS(mv_identity(Kernel::sup_green(e3), make_field("constant-1", e3), 1.0, MeanValueForm::sphere),
                    UnsupportedError);
}
