#include "mvlab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mvlab/errors.hpp"

namespace mvlab {

namespace {

constexpr double kCompactFraction = 0.9;
constexpr int kProfileSamples = 33;

// tau = lo + (hi - lo)(3s^2 - 2s^3) clusters nodes at both ends of [lo, hi].
struct Smoothstep {
    double lo, hi;
    double tau(double s) const { return lo + (hi - lo) * s * s * (3.0 - 2.0 * s); }
    double jacobian(double s) const { return (hi - lo) * 6.0 * s * (1.0 - s); }
};

double log_kernel(const Kernel& k, double rho, double tau) { return std::log(k.value(rho, tau)); }

}  // namespace

LevelRegion::LevelRegion(const Kernel& kernel, double r)
    : kernel_(kernel), r_(r), threshold_(0.0), log_threshold_(0.0) {
    if (!(r > 0.0)) throw RangeError("level parameter must be positive");
    threshold_ = std::pow(r, -kernel.dimension());
    log_threshold_ = -kernel.dimension() * std::log(r);
}

double level_radius(const Kernel& kernel, double r) {
    return LevelRegion::elliptic(kernel, r).radius();
}

LevelRegion LevelRegion::elliptic(const Kernel& kernel, double r) {
    if (kernel.parabolic()) throw UnsupportedError("elliptic region needs an elliptic kernel");
    LevelRegion reg(kernel, r);
    const double rho_max = kernel.geometry().rho_max(0.0);
    auto f = [&](double rho) { return std::log(kernel.value(rho)) - reg.log_threshold_; };
    double hi = 1.0;
    while (f(hi) > 0.0) {
        hi *= 2.0;
        if (hi >= rho_max || hi > 1e8) throw NoRegionError("level not attained inside the domain");
    }
    double lo = 0.5 * hi;
    while (f(lo) <= 0.0) {
        lo *= 0.5;
        if (lo < 1e-280) throw NoRegionError("level not attained near the pole");
    }
    reg.radius_ = find_root(f, lo, hi, 1e-15);
    reg.compact_ = true;
    return reg;
}

LevelRegion heatball_profile(const Kernel& kernel, double r) { return LevelRegion::heat_ball(kernel, r); }

LevelRegion LevelRegion::heat_ball(const Kernel& kernel, double r) {
    if (!kernel.parabolic()) throw UnsupportedError("heat ball needs a parabolic kernel");
    LevelRegion reg(kernel, r);
    const FlowGeometry& g = kernel.geometry();
    const int n = kernel.dimension();

    auto f = [&](double tau) { return log_kernel(kernel, 0.0, tau) - reg.log_threshold_; };
    // Euclidean guess r^2 / (4 pi), then bracket outward.
    double hi = 2.0 * r * r / (4.0 * std::numbers::pi);
    const TimeInterval ti = g.time_interval();
    int guard = 0;
    while (f(hi) > 0.0) {
        hi *= 2.0;
        if (!ti.contains(-hi) || ++guard > 200) throw NoRegionError("heat ball does not close in time");
    }
    double lo = 0.5 * hi;
    while (f(lo) <= 0.0) {
        lo *= 0.5;
        if (lo < 1e-300) throw NoRegionError("on-center level not attained");
    }
    reg.tau_max_ = find_root(f, lo, hi, 1e-15);
    if (!ti.contains(-reg.tau_max_)) throw NoRegionError("heat ball exceeds the time extent");

    const Smoothstep map{0.0, reg.tau_max_};
    for (int i = 1; i < kProfileSamples; ++i) {
        const double tau = map.tau(static_cast<double>(i) / kProfileSamples);
        const double rho = reg.profile(tau);
        reg.samples_.emplace_back(tau, rho);
        reg.radius_ = std::max(reg.radius_, rho);
        if (rho > kCompactFraction * g.rho_max(-tau))
            throw NoRegionError("heat ball is not compact inside the domain");
    }
    reg.compact_ = true;
    (void)n;
    return reg;
}

double LevelRegion::profile(double tau) const {
    if (!parabolic()) return radius_;
    if (!(tau > 0.0)) throw RangeError("tau must be positive");
    if (tau >= tau_max_) return 0.0;
    const FlowGeometry& g = kernel_.geometry();
    const double cap = g.rho_max(-tau) * (1.0 - 1e-12);
    auto f = [&](double rho) { return log_kernel(kernel_, rho, tau) - log_threshold_; };
    const double f0 = f(0.0);
    if (f0 <= 0.0) return 0.0;
    const int n = kernel_.dimension();
    const double span = std::log(std::max(r_ * r_ / (4.0 * std::numbers::pi * tau), 1.0 + 1e-12));
    double hi = std::min(cap, std::max(1.5 * std::sqrt(2.0 * n * tau * span), 1e-300));
    double fhi = f(hi);
    while (fhi > 0.0) {
        if (hi >= cap) throw NoRegionError("heat sphere reaches the edge of the slice");
        hi = std::min(cap, 2.0 * hi);
        fhi = f(hi);
    }
    return find_root(f, 0.0, hi, f0, fhi, 1e-15);
}

double LevelRegion::profile_slope(double tau) const {
    const double rho = profile(tau);
    const KernelSample k = kernel_.eval(rho, tau);
    return -k.dtau / k.drho;
}

namespace {

struct InnerErrors {
    double sum = 0.0;
    int count = 0;
    double mean() const { return count ? sum / count : 0.0; }
};

Estimate slab_integrate(const Kernel& kernel, const Smoothstep& map,
                        const std::function<double(double)>& lower,
                        const std::function<double(double)>& upper, const RegionIntegrand& f,
                        const RegionQuadrature& q) {
    const FlowGeometry& g = kernel.geometry();
    InnerErrors inner;
    auto outer = [&](double s) {
        const double jac = map.jacobian(s);
        if (jac == 0.0) return 0.0;
        const double tau = map.tau(s);
        const double a = lower(tau), b = upper(tau);
        if (!(b > a)) return 0.0;
        const double t = -tau;
        const Estimate e = integrate([&](double rho) { return f(rho, tau) * g.sphere_area(rho, t); },
                                     a, b, q.inner);
        inner.sum += e.error * jac;
        ++inner.count;
        return e.value * jac;
    };
    Estimate out = integrate(outer, 0.0, 1.0, q.outer);
    out.error += inner.mean();
    return out;
}

}  // namespace

Estimate ball_integrate(const LevelRegion& region, const RegionIntegrand& f, const RegionQuadrature& q) {
    const FlowGeometry& g = region.kernel().geometry();
    if (!region.parabolic())
        return integrate([&](double rho) { return f(rho, 0.0) * g.sphere_area(rho, 0.0); }, 0.0,
                         region.radius(), q.inner);
    return slab_integrate(
        region.kernel(), Smoothstep{0.0, region.tau_max()}, [](double) { return 0.0; },
        [&](double tau) { return region.profile(tau); }, f, q);
}

Estimate annulus_integrate(const LevelRegion& outer, const LevelRegion& inner,
                           const RegionIntegrand& f, const RegionQuadrature& q) {
    if (outer.parabolic() != inner.parabolic()) throw RangeError("regions must be of one kind");
    if (inner.level() > outer.level()) throw RangeError("inner region must have the smaller level");
    const FlowGeometry& g = outer.kernel().geometry();
    if (!outer.parabolic())
        return integrate([&](double rho) { return f(rho, 0.0) * g.sphere_area(rho, 0.0); },
                         inner.radius(), outer.radius(), q.inner);
    auto up = [&](double tau) { return outer.profile(tau); };
    // The inner profile closes at its own tau_max; split there so both pieces are smooth.
    Estimate first = slab_integrate(
        outer.kernel(), Smoothstep{0.0, inner.tau_max()}, [&](double tau) { return inner.profile(tau); },
        up, f, q);
    first += slab_integrate(outer.kernel(), Smoothstep{inner.tau_max(), outer.tau_max()},
                            [](double) { return 0.0; }, up, f, q);
    return first;
}

Estimate sphere_integrate(const LevelRegion& region, const SurfaceIntegrand& f,
                          const QuadratureOptions& q) {
    const Kernel& kernel = region.kernel();
    const FlowGeometry& g = kernel.geometry();
    if (!region.parabolic()) {
        const double rho = region.radius();
        return {f(rho, 0.0, kernel.eval(rho)) * g.sphere_area(rho, 0.0), 0.0};
    }
    const Smoothstep map{0.0, region.tau_max()};
    auto integrand = [&](double s) {
        const double jac = map.jacobian(s);
        if (jac == 0.0) return 0.0;
        const double tau = map.tau(s);
        const double rho = region.profile(tau);
        if (!(rho > 0.0)) return 0.0;
        const KernelSample k = kernel.eval(rho, tau);
        const double w = k.dtau / k.drho;
        return f(rho, tau, k) * std::sqrt(1.0 + w * w) * g.sphere_area(rho, -tau) * jac;
    };
    return integrate(integrand, 0.0, 1.0, q);
}

}  // namespace mvlab
