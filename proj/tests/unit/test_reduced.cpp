#include <doctest.h>

#include <cmath>

#include "mvlab/errors.hpp"
#include "mvlab/reduced.hpp"
#include "mvlab/suites.hpp"

using namespace mvlab;

TEST_CASE("flat reduced distance") {
    const ReducedDistanceField f(FlowGeometry::gaussian_soliton(3));
    for (double rho : {0.0, 0.3, 1.9})
        for (double tau : {0.1, 0.7})
            CHECK(f.ell(rho, tau) == doctest::Approx(rho * rho / (4.0 * tau)).epsilon(1e-10).scale(1.0));
    const ReducedPoint p = f.solve(1.0, 0.25);
    CHECK(p.l_length == doctest::Approx(2.0 * std::sqrt(0.25) * 1.0));
    CHECK_FALSE(p.cut_locus);
}

TEST_CASE("shrinking S^3 reduced distance against frozen values") {
    const ReducedDistanceField f(FlowGeometry::shrinking_sphere(3));
    CHECK(f.ell(0.5, 0.1) == doctest::Approx(0.66315736981410158).epsilon(1e-7));
    CHECK(f.ell(1.0, 0.2) == doctest::Approx(1.1273900748956865).epsilon(1e-7));
    CHECK(f.ell(0.0, 0.05) == doctest::Approx(0.089484959148548477).epsilon(1e-7));
    CHECK(sphere_reduced_distance(3, 0.5, 0.1) == doctest::Approx(0.66315736981410158).epsilon(1e-13));
    CHECK(sphere_reduced_distance(2, 0.7, 0.15) == doctest::Approx(0.77179668575296392).epsilon(1e-13));
}

TEST_CASE("reduced volume") {
    const ReducedDistanceField flat(FlowGeometry::gaussian_soliton(2));
    CHECK(reduced_volume(flat, 0.4).value == doctest::Approx(1.0).epsilon(1e-8));
    const ReducedDistanceField s3(FlowGeometry::shrinking_sphere(3));
    CHECK(reduced_volume(s3, 0.1).value == doctest::Approx(0.99719425334590574).epsilon(1e-6));
    CHECK(reduced_volume(s3, 0.3).value == doctest::Approx(0.98516752316130008).epsilon(1e-6));
}

TEST_CASE("first variation identities") {
    const ReducedDistanceField s3(FlowGeometry::shrinking_sphere(3));
    const GaussResiduals r = gauss_identity_residuals(s3, 0.6, 0.12);
    CHECK(r.gradient < 1e-5);
    CHECK(r.time < 1e-5);
    CHECK_THROWS_AS(gauss_identity_residuals(s3, 0.0, 0.1), RangeError);
}

TEST_CASE("L-length of a straight path and geodesic shooting") {
    const auto flat = FlowGeometry::gaussian_soliton(3);
    // u(sigma) = c sigma has |d gamma / d sigma|^2 = c^2.
    const Estimate L = l_length(flat, [](double) { return PathPoint{0.0, 2.0}; }, 1.0);
    CHECK(L.value == doctest::Approx(4.0));
    const LGeodesic g = shoot_l_geodesic(flat, 0.5, 2.0);
    CHECK(g.rho_end == doctest::Approx(1.0));
}

TEST_CASE("memo") {
    const ReducedDistanceField f(FlowGeometry::shrinking_sphere(2));
    f.ell(0.3, 0.1);
    f.ell(0.3, 0.1);
    CHECK(f.memo_size() == 1);
    f.clear_memo();
    CHECK(f.memo_size() == 0);
}
