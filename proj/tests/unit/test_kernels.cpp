#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "mvlab/errors.hpp"
#include "mvlab/kernels.hpp"
#include "mvlab/numerics.hpp"

using namespace mvlab;

TEST_CASE("Green functions of space forms") {
    const double pi = std::numbers::pi;
    const Kernel g3 = Kernel::green(FlowGeometry::euclidean(3));
    CHECK(g3.value(0.5) == doctest::Approx(1.0 / (2.0 * pi)));
    CHECK(g3.eval(0.5).drho == doctest::Approx(-1.0 / (pi)));
    const Kernel h3 = Kernel::green(FlowGeometry::hyperbolic(3));
    CHECK(h3.value(1.0) == doctest::Approx(0.0249105565247006414).epsilon(1e-12));
    // Unit flux through every geodesic sphere.
    for (const auto& g : {FlowGeometry::euclidean(4), FlowGeometry::hyperbolic(3), FlowGeometry::hyperbolic(5)})
        for (double r : {0.3, 1.7}) {
            const Kernel k = Kernel::green(g);
            CHECK(-k.eval(r).drho * g.sphere_area(r, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
        }
}

TEST_CASE("comparison kernels") {
    const auto h3 = FlowGeometry::hyperbolic(3);
    const Kernel sub = Kernel::sub_green(h3, 1.0);
    const Kernel sup = Kernel::sup_green(h3);
    CHECK(sub.value(0.9) == doctest::Approx(Kernel::green(h3).value(0.9)));
    CHECK(sup.value(0.9) == doctest::Approx(1.0 / (4.0 * std::numbers::pi * 0.9)));
    CHECK(space_form_green(3, 0.0, 2.0).value == doctest::Approx(1.0 / (8.0 * std::numbers::pi)));
}

TEST_CASE("heat kernels") {
    const Kernel h = Kernel::heat(FlowGeometry::hyperbolic(3));
    CHECK(h.value(1.0, 0.5) == doctest::Approx(0.019875748452065723).epsilon(1e-12));
    const Kernel e = Kernel::heat(FlowGeometry::euclidean(2));
    CHECK(e.value(0.0, 1.0 / (4.0 * std::numbers::pi)) == doctest::Approx(1.0));
    // Mass one.
    const auto mass = integrate([&](double r) { return e.value(r, 0.3) * 2.0 * std::numbers::pi * r; }, 0.0, 20.0);
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-10));
    // Backward heat equation in tau on H^3: K_tau = Lap K.
    const double rho = 0.7, tau = 0.4, d = 1e-3;
    const auto f = [&](double r) { return h.value(r, tau); };
    const Derivatives dr = central_derivatives(f, rho, d);
    const double lap = dr.d2 + 2.0 / std::tanh(rho) * dr.d1;
    CHECK(h.eval(rho, tau).dtau == doctest::Approx(lap).epsilon(1e-7));
}

TEST_CASE("sub-heat kernel on the Gaussian soliton is the Euclidean heat kernel") {
    const auto g = FlowGeometry::gaussian_soliton(3);
    const Kernel k = Kernel::sub_heat(std::make_shared<ReducedDistanceField>(g));
    const Kernel h = Kernel::heat(FlowGeometry::euclidean(3));
    for (double rho : {0.0, 0.4, 1.3})
        CHECK(k.value(rho, 0.5) == doctest::Approx(h.value(rho, 0.5)).epsilon(1e-8));
    CHECK(liyau_Q(k, 0.6, 0.5) == doctest::Approx(3.0 / (2.0 * 0.5)).epsilon(1e-6));
}

TEST_CASE("MCF sup-heat kernel") {
    const std::vector<double> x{0.0, 0.0}, y{1.0, 0.0};
    CHECK(mcf_sup_heat_kernel(x, y, 0.25, 1) == doctest::Approx(std::exp(-1.0) / std::sqrt(std::numbers::pi)));
}

TEST_CASE("kernel domain errors") {
    CHECK_THROWS_AS(Kernel::heat(FlowGeometry::shrinking_sphere(3)), UnsupportedError);
    CHECK_THROWS_AS(Kernel::green(FlowGeometry::euclidean(2)), UnsupportedError);
}
