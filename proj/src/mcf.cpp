#include "mvlab/mcf.hpp"

#include <cmath>
#include <numbers>

#include "mvlab/errors.hpp"
#include "mvlab/geometry.hpp"

namespace mvlab {

namespace {

constexpr QuadratureOptions kAngles{1e-15, 1e-12, 500};
constexpr QuadratureOptions kTimes{1e-13, 1e-10, 500};

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double log_gaussian(int n, double dist2, double tau) {
    return -0.5 * n * std::log(4.0 * std::numbers::pi * tau) - dist2 / (4.0 * tau);
}

/// Integral over the round n-sphere of radius R of f(polar angle).
Estimate polar_integral(int n, double R, const std::function<double(double)>& f) {
    const double c = unit_sphere_area(n - 1) * std::pow(R, n);
    const Estimate e = integrate(
        [&](double th) { return f(th) * std::pow(std::sin(th), n - 1); }, 0.0, std::numbers::pi, kAngles);
    return {c * e.value, c * e.error};
}

/// Kernel data at the point of M_tau with polar angle th from the axis, x0 on the axis.
struct TrackSample {
    double value;
    double grad2;      // |grad^T log K|^2
    double dlog_tau;   // d/dtau log K following the point
};

TrackSample track_sample(const ShrinkingSphereMcf& m, double x0, double th, double tau) {
    const int n = m.dimension();
    const double R = m.radius(tau);
    // y = R (cos th, sin th, 0...), x0 = (x0, 0, ...); ambient gradient of log K is -(y - x0)/(2 tau).
    const double wx = R * std::cos(th) - x0, wy = R * std::sin(th);
    const double w2 = wx * wx + wy * wy;
    const double gn = -(wx * std::cos(th) + wy * std::sin(th)) / (2.0 * tau);  // normal component
    const double g2 = w2 / (4.0 * tau * tau);
    const double vel = R / (2.0 * tau);  // dy/dtau along the outward normal
    return {std::exp(log_gaussian(n, w2, tau)), g2 - gn * gn,
            -0.5 * n / tau + g2 + gn * vel};
}

/// Backward time at which the centered kernel on M_tau equals r^{-n}.
double level_time(const ShrinkingSphereMcf& m, double r) {
    const int n = m.dimension();
    const double target = -n * std::log(r);
    auto f = [&](double tau) { return log_gaussian(n, m.radius(tau) * m.radius(tau), tau) - target; };
    double hi = r * r;
    while (f(hi) > 0.0) hi *= 2.0;
    double lo = 0.5 * hi;
    while (f(lo) <= 0.0) lo *= 0.5;
    return find_root(f, lo, hi, 1e-15);
}

}  // namespace

ShrinkingSphereMcf::ShrinkingSphereMcf(int n) : n_(n) {
    if (n < 1) throw RangeError("dimension must be >= 1");
}

double ShrinkingSphereMcf::radius(double tau) const {
    if (!(tau > 0.0)) throw RangeError("tau must be positive");
    return std::sqrt(2.0 * n_ * tau);
}

double ShrinkingSphereMcf::area(double tau) const {
    return unit_sphere_area(n_) * std::pow(radius(tau), n_);
}

std::vector<double> ShrinkingSphereMcf::point(std::span<const double> dir, double tau) const {
    if (dir.size() != static_cast<std::size_t>(n_ + 1)) throw RangeError("direction must lie in R^{n+1}");
    std::vector<double> y(dir.begin(), dir.end());
    const double R = radius(tau) / std::sqrt(dot(dir, dir));
    for (double& c : y) c *= R;
    return y;
}

std::vector<double> ShrinkingSphereMcf::mean_curvature(std::span<const double> dir, double tau) const {
    std::vector<double> h = point(dir, tau);
    for (double& c : h) c /= -2.0 * tau;
    return h;
}

std::vector<double> ShrinkingSphereMcf::track_velocity(std::span<const double> dir, double tau) const {
    std::vector<double> v = mean_curvature(dir, tau);
    for (double& c : v) c = -c;
    return v;
}

Estimate gaussian_density(int n, double tau, double x0) {
    const ShrinkingSphereMcf m(n);
    return polar_integral(n, m.radius(tau),
                          [&](double th) { return track_sample(m, x0, th, tau).value; });
}

Estimate jbar(int n, double r) {
    const ShrinkingSphereMcf m(n);
    const double tmax = level_time(m, r);
    // The heat sphere is the slice tau = tmax, where the kernel gradient is normal to the track.
    return polar_integral(n, m.radius(tmax), [&](double th) {
        const TrackSample s = track_sample(m, 0.0, th, tmax);
        const double grad2 = s.grad2 * s.value * s.value;
        const double kt = s.dlog_tau * s.value;
        return (grad2 - s.value * kt) / std::sqrt(grad2 + kt * kt);
    });
}

Estimate ibar(int n, double a, double r) {
    if (!(a >= 0.0 && a < r)) throw RangeError("need 0 <= a < r");
    const ShrinkingSphereMcf m(n);
    const double lo = a > 0.0 ? level_time(m, a) : 0.0;
    const double hi = level_time(m, r);
    double inner_err = 0.0;
    const Estimate e = integrate(
        [&](double tau) {
            const Estimate s = polar_integral(n, m.radius(tau), [&](double th) {
                const TrackSample k = track_sample(m, 0.0, th, tau);
                return k.grad2 - k.dlog_tau;
            });
            inner_err = std::max(inner_err, s.error);
            return s.value;
        },
        lo, hi, kTimes);
    const double c = 1.0 / (std::pow(r, n) - std::pow(a, n));
    return {c * e.value, c * (e.error + inner_err * (hi - lo))};
}

McfSweep mcf_sweep(int n, const std::vector<double>& grid, double a, double tol, int jobs) {
    if (grid.empty()) throw RangeError("empty grid");
    if (!(a >= 0.0 && a < grid.front())) throw RangeError("need 0 <= a < every grid radius");
    const std::size_t m = grid.size();
    std::vector<Estimate> J(m), I(m);
    parallel_for(m, jobs, [&](std::size_t i) {
        J[i] = jbar(n, grid[i]);
        I[i] = ibar(n, a, grid[i]);
    });
    std::vector<double> jv, je, iv, ie;
    for (std::size_t i = 0; i < m; ++i) {
        jv.push_back(J[i].value);
        je.push_back(J[i].error);
        iv.push_back(I[i].value);
        ie.push_back(I[i].error);
    }
    return {make_sweep_report("jbar", grid, jv, je, Direction::non_decreasing, tol),
            make_sweep_report("ibar", grid, iv, ie, Direction::non_decreasing, tol)};
}

double li_yau_mcf_residual(int n, std::span<const double> x0, std::span<const std::vector<double>> directions,
                       std::span<const double> taus) {
    const ShrinkingSphereMcf m(n);
    if (x0.size() != static_cast<std::size_t>(n + 1)) throw RangeError("x0 must lie in R^{n+1}");
    double worst = 0.0;
    for (const auto& dir : directions) {
        for (double tau : taus) {
            const std::vector<double> y = m.point(dir, tau);
            const std::vector<double> H = m.mean_curvature(dir, tau);
            const std::vector<double> vel = m.track_velocity(dir, tau);
            const double R = m.radius(tau);
            std::vector<double> g(y.size()), nu(y.size());
            double w2 = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double w = y[i] - x0[i];
                w2 += w * w;
                g[i] = -w / (2.0 * tau);
                nu[i] = y[i] / R;
            }
            const double gn = dot(g, nu);
            const double grad_t2 = dot(g, g) - gn * gn;
            const double dlog_tau = -0.5 * n / tau + w2 / (4.0 * tau * tau) + dot(g, vel);
            const double Q = grad_t2 - dlog_tau;
            const double rhs = 0.5 * n / tau + gn * dot(H, nu) - gn * gn;
            worst = std::max(worst, std::abs(Q - rhs));
        }
    }
    return worst;
}

}  // namespace mvlab
