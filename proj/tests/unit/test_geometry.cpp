#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mvlab/errors.hpp"
#include "mvlab/geometry.hpp"

using namespace mvlab;

TEST_CASE("unit sphere areas") {
    CHECK(unit_sphere_area(0) == doctest::Approx(2.0));
    CHECK(unit_sphere_area(1) == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(unit_sphere_area(2) == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(unit_sphere_area(3) == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("warp functions") {
    const auto e = FlowGeometry::euclidean(3);
    CHECK(e.warp(0.7, 0.0) == doctest::Approx(0.7));
    CHECK(e.sphere_area(1.0, 0.0) == doctest::Approx(4.0 * std::numbers::pi));

    const auto h = FlowGeometry::hyperbolic(3);
    CHECK(h.warp(1.0, 0.0) == doctest::Approx(std::sinh(1.0)));
    CHECK(h.sectional_curvature(0.0) == doctest::Approx(-1.0));

    const auto s = FlowGeometry::shrinking_sphere(3);
    // c(t) = 1 - 4t; at t = -0.25 the radius is sqrt 2.
    CHECK(s.radial_scale(-0.25) == doctest::Approx(std::sqrt(2.0)));
    CHECK(s.warp(0.5, -0.25) == doctest::Approx(std::sqrt(2.0) * std::sin(0.5 / std::sqrt(2.0))));
    CHECK(s.sectional_curvature(-0.25) == doctest::Approx(0.5));
    CHECK(s.evolution_trace(0.0) == doctest::Approx(6.0));
    CHECK(s.time_interval().hi < 0.25);
}

TEST_CASE("domain checks") {
    const auto s = FlowGeometry::shrinking_sphere(2);
    CHECK_THROWS_AS(s.check_domain({0.1, 0.6, {}}), RangeError);
    CHECK_THROWS_AS(s.check_domain({4.0, 0.0, {}}), RangeError);
    CHECK_NOTHROW(s.check_domain({1.0, 0.0, {}}));
    CHECK_THROWS_AS(FlowGeometry::euclidean(0), RangeError);
}

TEST_CASE("Ricci flow equation holds on the shrinking sphere") {
    for (int n : {2, 3, 4}) {
        const auto s = FlowGeometry::shrinking_sphere(n);
        std::vector<SpaceTimePoint> pts{{0.2, -0.5, {}}, {1.0, 0.0, {}}, {0.5, 0.05, {}}};
        CHECK(flow_residual(s, pts) < 1e-6);
    }
}

TEST_CASE("space-time connection and divergence agree with finite differences") {
    const SpacetimeField X = [](std::span<const double> x) {
        std::vector<double> v(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) v[i] = std::cos(x[0] - 0.5 * x[1] * (i + 1));
        return v;
    };
    for (const auto& g : {FlowGeometry::euclidean(2), FlowGeometry::hyperbolic(3),
                          FlowGeometry::shrinking_sphere(3), FlowGeometry::gaussian_soliton(2)}) {
        const int n = g.dimension();
        const SpaceTimePoint p{0.6, g.is_static() ? 0.3 : -0.1, std::vector<double>(n - 1, 1.0)};
        CHECK(spacetime_christoffels(g, p).max_difference(spacetime_christoffels_fd(g, p)) < 1e-6);
        CHECK(std::abs(spacetime_divergence(g, X, p) - spacetime_divergence_fd(g, X, p)) < 1e-6);
    }
}

TEST_CASE("time component of the connection is the evolution tensor") {
    const auto s = FlowGeometry::shrinking_sphere(3);
    const SpaceTimePoint p{0.4, -0.2, {1.0, 1.0}};
    const Evolution ev = s.evolution(p);
    CHECK(spacetime_time_component_frame(s, p, 1, 1) == doctest::Approx(ev.radial));
    CHECK(spacetime_time_component_frame(s, p, 2, 2) == doctest::Approx(ev.tangential));
    CHECK(spacetime_time_component_frame(s, p, 1, 2) == doctest::Approx(0.0));
}
