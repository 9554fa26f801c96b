#pragma once

#include <span>
#include <vector>

#include "mvlab/numerics.hpp"
#include "mvlab/sweep.hpp"

namespace mvlab {

/// Round n-sphere in R^{n+1} shrinking by mean curvature flow onto the origin:
/// radius sqrt(2 n tau) at backward time tau.
class ShrinkingSphereMcf {
public:
    explicit ShrinkingSphereMcf(int n);

    int dimension() const { return n_; }
    double radius(double tau) const;
    double area(double tau) const;

    /// Point of M_tau in direction `dir` (unit vector in R^{n+1}).
    std::vector<double> point(std::span<const double> dir, double tau) const;
    /// Mean curvature vector -y / (2 tau) at that point.
    std::vector<double> mean_curvature(std::span<const double> dir, double tau) const;
    /// Velocity dy/dtau of a point moving with the flow.
    std::vector<double> track_velocity(std::span<const double> dir, double tau) const;

private:
    int n_;
};

/// Theta = int over M_tau of the ambient Gaussian centered at x0 (polar angle quadrature;
/// x0 must lie on the axis through the pole, x0 = distance along it).
Estimate gaussian_density(int n, double tau = 1.0, double x0 = 0.0);

/// J(r) over the heat sphere of the sup-heat kernel and I(a, r) over the annulus, both in
/// the Li-Yau forms, centered at the singular point.
Estimate jbar(int n, double r);
Estimate ibar(int n, double a, double r);

struct McfSweep {
    SweepReport jbar;  // asserted non-decreasing
    SweepReport ibar;  // I(a, r) at fixed a, asserted non-decreasing
};
McfSweep mcf_sweep(int n, const std::vector<double>& grid, double a = 0.0, double tol = 1e-6,
                   int jobs = 1);

/// |Q(K) - n/(2 tau) - <H, grad^perp log K> + |grad^perp log K|^2| at the given
/// directions and backward times, for the Gaussian centered at x0.
double li_yau_mcf_residual(int n, std::span<const double> x0,
                       std::span<const std::vector<double>> directions,
                       std::span<const double> taus);

}  // namespace mvlab
