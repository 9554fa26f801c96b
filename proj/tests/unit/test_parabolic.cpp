#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include "mvlab/errors.hpp"
#include "mvlab/fields.hpp"
#include "mvlab/mcf.hpp"
#include "mvlab/parabolic.hpp"

using namespace mvlab;

TEST_CASE("Watson mean value on the plane") {
    const auto e2 = FlowGeometry::euclidean(2);
    const Kernel h = Kernel::heat(e2);
    const TestField u = make_field("caloric-quadratic", e2);
    for (double r : {0.5, 1.0}) {
        CHECK(std::abs(mv_heat_ball(h, u, r).residual) < 1e-8);
        CHECK(std::abs(mv_heat_sphere(h, u, r).residual) < 1e-8);
    }
    CHECK(heat_chain_residual(h, u, 1.0) < 1e-8);
    CHECK_THROWS_AS(mv_heat_ball(Kernel::green(FlowGeometry::euclidean(3)), make_field("constant-1", e2), 1.0),
                    UnsupportedError);
}

TEST_CASE("heat kernel on H^3") {
    const auto h3 = FlowGeometry::hyperbolic(3);
    const Kernel h = Kernel::heat(h3);
    const MeanValueResult m = mv_heat_sphere(h, make_field("exp-radial", h3), 0.8);
    CHECK(std::abs(m.residual) < 1e-8);
}

TEST_CASE("equality case on the Gaussian soliton") {
    const auto field = std::make_shared<ReducedDistanceField>(FlowGeometry::gaussian_soliton(2));
    const Kernel k = Kernel::sub_heat(field);
    CHECK(jhat(k, 0.6).value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(ihat(k, 0.2, 0.6).value == doctest::Approx(1.0).epsilon(1e-6));
    const std::vector<std::pair<double, double>> pts{{0.0, 0.3}, {0.8, 0.5}};
    const SolitonCheck s = soliton_residuals(*field, pts);
    CHECK(s.ell_evolution < 1e-6);
    CHECK(s.ell_first_order < 1e-6);
    CHECK(s.entropy < 1e-6);
    CHECK(s.soliton < 1e-6);
}

TEST_CASE("ell derivatives on the flat soliton") {
    const ReducedDistanceField f(FlowGeometry::gaussian_soliton(3));
    const EllDerivatives d = ell_derivatives(f, 0.8, 0.5);
    CHECK(d.ell == doctest::Approx(0.32));
    CHECK(d.d_rho == doctest::Approx(0.8));
    CHECK(d.d_rho2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d.d_tau == doctest::Approx(-0.64).epsilon(1e-6));
}

TEST_CASE("shrinking sphere MCF") {
    const ShrinkingSphereMcf m(1);
    CHECK(m.radius(0.5) == doctest::Approx(1.0));
    const std::vector<double> dir{0.6, 0.8};
    const auto h = m.mean_curvature(dir, 0.5);
    CHECK(h[0] == doctest::Approx(-0.6));
    CHECK(m.track_velocity(dir, 0.5)[1] == doctest::Approx(0.8));
    CHECK(gaussian_density(1).value == doctest::Approx(1.5203469010662808).epsilon(1e-10));
    CHECK(gaussian_density(2).value == doctest::Approx(4.0 / std::numbers::e).epsilon(1e-10));
    // Off-center densities are smaller.
    CHECK(gaussian_density(1, 1.0, 0.5).value < gaussian_density(1).value);
    CHECK(jbar(2, 0.7).value == doctest::Approx(4.0 / std::numbers::e).epsilon(1e-8));
}
