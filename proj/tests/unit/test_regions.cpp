#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "mvlab/errors.hpp"
#include "mvlab/regions.hpp"

using namespace mvlab;

TEST_CASE("elliptic level radius") {
    const Kernel g = Kernel::green(FlowGeometry::euclidean(3));
    CHECK(level_radius(g, 1.0) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
    CHECK(level_radius(g, 2.0) == doctest::Approx(2.0 / std::numbers::pi));
    const LevelRegion reg = LevelRegion::elliptic(g, 1.5);
    CHECK(reg.compact());
    const double rs = reg.radius();
    const Estimate vol = ball_integrate(reg, [](double, double) { return 1.0; });
    CHECK(vol.value == doctest::Approx(4.0 / 3.0 * std::numbers::pi * rs * rs * rs));
}

TEST_CASE("heat ball of the planar heat kernel") {
    const double pi = std::numbers::pi;
    const Kernel h = Kernel::heat(FlowGeometry::euclidean(2));
    const LevelRegion reg = heatball_profile(h, 1.0);
    CHECK(reg.tau_max() == doctest::Approx(1.0 / (4.0 * pi)));
    CHECK(reg.profile(1.0 / (8.0 * pi)) == doctest::Approx(std::sqrt(std::log(2.0) / (2.0 * pi))));
    CHECK(reg.profile(1.0) == 0.0);
    const Estimate direct = integrate([&](double t) { const double p = reg.profile(t); return pi * p * p; },
                                      0.0, reg.tau_max());
    CHECK(ball_integrate(reg, [](double, double) { return 1.0; }).value == doctest::Approx(direct.value).epsilon(1e-6));
}

TEST_CASE("sphere integral on an elliptic region is the area") {
    const auto h3 = FlowGeometry::hyperbolic(3);
    const LevelRegion reg = LevelRegion::elliptic(Kernel::green(h3), 0.8);
    const Estimate a = sphere_integrate(reg, [](double, double, const KernelSample&) { return 1.0; });
    CHECK(a.value == doctest::Approx(h3.sphere_area(reg.radius(), 0.0)));
}

TEST_CASE("annulus equals difference of balls") {
    const Kernel h = Kernel::heat(FlowGeometry::euclidean(2));
    const LevelRegion outer = heatball_profile(h, 1.0), inner = heatball_profile(h, 0.5);
    const auto f = [](double rho, double tau) { return rho * rho / (4.0 * tau * tau); };
    const double diff = ball_integrate(outer, f).value - ball_integrate(inner, f).value;
    CHECK(annulus_integrate(outer, inner, f).value == doctest::Approx(diff).epsilon(1e-7));
}

TEST_CASE("regions that leave the domain") {
    const auto field = std::make_shared<ReducedDistanceField>(FlowGeometry::shrinking_sphere(2));
    CHECK_THROWS_AS(LevelRegion::heat_ball(Kernel::sub_heat(field), 20.0), NoRegionError);
}
