#pragma once

#include <functional>
#include <vector>

#include "mvlab/kernels.hpp"
#include "mvlab/numerics.hpp"

namespace mvlab {

/// Super-level set {kernel >= r^{-n}} around the center. Elliptic regions are
/// geodesic balls of radius rho*; parabolic regions are swept by the profile
/// rho(tau) for 0 < tau < tau_max.
class LevelRegion {
public:
    const Kernel& kernel() const { return kernel_; }
    double level() const { return r_; }
    double threshold() const { return threshold_; }
    bool parabolic() const { return kernel_.parabolic(); }
    bool compact() const { return compact_; }

    /// Elliptic: rho*. Parabolic: largest sampled profile radius.
    double radius() const { return radius_; }

    double tau_max() const { return tau_max_; }
    /// Profile radius at tau (0 for tau >= tau_max).
    double profile(double tau) const;
    /// Boundary slope -K_tau / K_rho in the orthonormal frame (K_tau at a fixed point).
    double profile_slope(double tau) const;
    /// (tau, rho) samples on a grid clustered at both ends of (0, tau_max).
    const std::vector<std::pair<double, double>>& profile_samples() const { return samples_; }

    static LevelRegion elliptic(const Kernel& kernel, double r);
    static LevelRegion heat_ball(const Kernel& kernel, double r);

private:
    LevelRegion(const Kernel& kernel, double r);

    Kernel kernel_;
    double r_;
    double threshold_;
    double log_threshold_;
    double radius_ = 0.0;
    double tau_max_ = 0.0;
    bool compact_ = false;
    std::vector<std::pair<double, double>> samples_;
};

/// rho* with kernel(rho*) = r^{-n}.
double level_radius(const Kernel& kernel, double r);
LevelRegion heatball_profile(const Kernel& kernel, double r);

/// Integrand over a region in (rho, tau); tau is 0 for elliptic regions.
/// Values are per unit area of the geodesic sphere (spherical means).
using RegionIntegrand = std::function<double(double rho, double tau)>;
/// Integrand on a heat sphere, handed the kernel sample at the boundary point.
using SurfaceIntegrand = std::function<double(double rho, double tau, const KernelSample& k)>;

struct RegionQuadrature {
    QuadratureOptions outer{1e-13, 1e-9, 400};
    QuadratureOptions inner{1e-14, 1e-10, 400};
};

/// Elliptic: int_0^{rho*} f A drho. Parabolic: int int_{E_r} f dmu dtau.
Estimate ball_integrate(const LevelRegion& region, const RegionIntegrand& f,
                        const RegionQuadrature& q = {});

/// Integral over outer \ inner of two nested regions of the same kernel.
Estimate annulus_integrate(const LevelRegion& outer, const LevelRegion& inner,
                           const RegionIntegrand& f, const RegionQuadrature& q = {});

/// Elliptic: f(rho*) A(rho*). Parabolic: int_0^{tau_max} f sqrt(1 + w^2) A dtau with w the
/// boundary slope.
Estimate sphere_integrate(const LevelRegion& region, const SurfaceIntegrand& f,
                          const QuadratureOptions& q = {1e-13, 1e-10, 400});

}  // namespace mvlab
