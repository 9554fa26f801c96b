#include "mvlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mvlab/errors.hpp"

namespace mvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Distance kept from the shrinking sphere's singular time.
constexpr double kSingularGuard = 1e-3;

}  // namespace

double unit_sphere_area(int dim) {
    const double m = 0.5 * (dim + 1);
    return 2.0 * std::pow(std::numbers::pi, m) / std::tgamma(m);
}

FlowGeometry::FlowGeometry(GeometryKind kind, int n, double k) : kind_(kind), n_(n), k_(k) {}

FlowGeometry FlowGeometry::euclidean(int n) {
    if (n < 1) throw RangeError("dimension must be >= 1");
    return FlowGeometry(GeometryKind::euclidean, n, 0.0);
}

FlowGeometry FlowGeometry::gaussian_soliton(int n) {
    if (n < 1) throw RangeError("dimension must be >= 1");
    return FlowGeometry(GeometryKind::gaussian_soliton, n, 0.0);
}

FlowGeometry FlowGeometry::hyperbolic(int n, double k) {
    if (n < 2) throw RangeError("hyperbolic space needs dimension >= 2");
    if (!(k > 0.0)) throw RangeError("hyperbolic curvature parameter must be positive");
    return FlowGeometry(GeometryKind::hyperbolic, n, k);
}

FlowGeometry FlowGeometry::shrinking_sphere(int n) {
    if (n < 2) throw RangeError("shrinking sphere needs dimension >= 2");
    return FlowGeometry(GeometryKind::shrinking_sphere, n, 0.0);
}

std::string FlowGeometry::name() const {
    const std::string d = std::to_string(n_);
    switch (kind_) {
    case GeometryKind::euclidean: return "euclidean" + d;
    case GeometryKind::gaussian_soliton: return "gaussian" + d;
    case GeometryKind::hyperbolic: return "hyperbolic" + d;
    case GeometryKind::shrinking_sphere: return "shrinking-s" + d;
    }
    return "unknown";
}

TimeInterval FlowGeometry::time_interval() const {
    if (kind_ == GeometryKind::shrinking_sphere)
        return {-kInf, 1.0 / (2.0 * (n_ - 1)) - kSingularGuard};
    return {-kInf, kInf};
}

// c(t) = 1 - 2(n-1)t for the shrinking sphere, the squared radius.
static double sphere_scale_sq(int n, double t) { return 1.0 - 2.0 * (n - 1) * t; }

double FlowGeometry::rho_max(double t) const {
    if (kind_ == GeometryKind::shrinking_sphere)
        return std::numbers::pi * std::sqrt(sphere_scale_sq(n_, t));
    return kInf;
}

double FlowGeometry::warp(double rho, double t) const {
    switch (kind_) {
    case GeometryKind::euclidean:
    case GeometryKind::gaussian_soliton: return rho;
    case GeometryKind::hyperbolic: return std::sinh(k_ * rho) / k_;
    case GeometryKind::shrinking_sphere: {
        const double a = std::sqrt(sphere_scale_sq(n_, t));
        return a * std::sin(rho / a);
    }
    }
    return rho;
}

double FlowGeometry::warp_drho(double rho, double t) const {
    switch (kind_) {
    case GeometryKind::euclidean:
    case GeometryKind::gaussian_soliton: return 1.0;
    case GeometryKind::hyperbolic: return std::cosh(k_ * rho);
    case GeometryKind::shrinking_sphere:
        return std::cos(rho / std::sqrt(sphere_scale_sq(n_, t)));
    }
    return 1.0;
}

double FlowGeometry::warp_drho2(double rho, double t) const {
    return -sectional_curvature(t) * warp(rho, t);
}

double FlowGeometry::radial_scale(double t) const {
    if (kind_ == GeometryKind::shrinking_sphere) return std::sqrt(sphere_scale_sq(n_, t));
    return 1.0;
}

double FlowGeometry::radial_scale_dt(double t) const {
    if (kind_ == GeometryKind::shrinking_sphere)
        return -(n_ - 1) / std::sqrt(sphere_scale_sq(n_, t));
    return 0.0;
}

double FlowGeometry::sectional_curvature(double t) const {
    switch (kind_) {
    case GeometryKind::euclidean:
    case GeometryKind::gaussian_soliton: return 0.0;
    case GeometryKind::hyperbolic: return -k_ * k_;
    case GeometryKind::shrinking_sphere: return 1.0 / sphere_scale_sq(n_, t);
    }
    return 0.0;
}

Curvature FlowGeometry::curvature(const SpaceTimePoint& p) const {
    check_domain(p);
    const double ric = (n_ - 1) * sectional_curvature(p.t);
    return {evolution_trace(p.t), ric, ric};
}

Evolution FlowGeometry::evolution(const SpaceTimePoint& p) const {
    check_domain(p);
    if (is_static()) return {0.0, 0.0};
    const double ric = (n_ - 1) * sectional_curvature(p.t);
    return {ric, ric};
}

double FlowGeometry::evolution_trace(double t) const {
    if (is_static()) return 0.0;
    return n_ * (n_ - 1) / sphere_scale_sq(n_, t);
}

double FlowGeometry::evolution_trace_dt(double t) const {
    if (is_static()) return 0.0;
    const double c = sphere_scale_sq(n_, t);
    return 2.0 * n_ * (n_ - 1) * (n_ - 1) / (c * c);
}

double FlowGeometry::sphere_area(double rho, double t) const {
    if (!(rho >= 0.0) || !(rho < rho_max(t)))
        throw RangeError("sphere radius outside the slice");
    if (n_ == 1) return 2.0;
    return unit_sphere_area(n_ - 1) * std::pow(warp(rho, t), n_ - 1);
}

void FlowGeometry::check_domain(const SpaceTimePoint& p) const {
    const TimeInterval ti = time_interval();
    if (!ti.contains(p.t)) throw RangeError("time outside the flow interval");
    if (!(p.rho >= 0.0) || !(p.rho < rho_max(p.t))) throw RangeError("radius outside the slice");
}

double flow_residual(const FlowGeometry& geom, std::span<const SpaceTimePoint> samples, double h) {
    if (!(h > 0.0)) throw RangeError("step must be positive");
    const TimeInterval ti = geom.time_interval();
    double worst = 0.0;
    for (const SpaceTimePoint& p : samples) {
        geom.check_domain(p);
        if (!ti.contains(p.t - h) || !ti.contains(p.t + h))
            throw RangeError("sample too close to the time boundary");
        const Evolution ups = geom.evolution(p);
        const double u = p.rho / geom.radial_scale(p.t);

        auto g_uu = [&](double t) {
            const double a = geom.radial_scale(t);
            return a * a;
        };
        const double d_uu = (g_uu(p.t + h) - g_uu(p.t - h)) / (2.0 * h);
        worst = std::max(worst, std::abs(d_uu / g_uu(p.t) + 2.0 * ups.radial));

        if (p.rho > 0.0) {
            auto g_tan = [&](double t) {
                const double w = geom.warp(geom.radial_scale(t) * u, t);
                return w * w;
            };
            const double d_tan = (g_tan(p.t + h) - g_tan(p.t - h)) / (2.0 * h);
            worst = std::max(worst, std::abs(d_tan / g_tan(p.t) + 2.0 * ups.tangential));
        }
    }
    return worst;
}

std::vector<double> spacetime_coordinates(const FlowGeometry& geom, const SpaceTimePoint& p) {
    geom.check_domain(p);
    const int n = geom.dimension();
    std::vector<double> x(static_cast<size_t>(n + 1), std::numbers::pi / 2);
    x[0] = p.t;
    x[1] = p.rho / geom.radial_scale(p.t);
    for (size_t q = 0; q < p.angles.size() && q + 2 < x.size(); ++q) x[q + 2] = p.angles[q];
    return x;
}

std::vector<double> spacetime_metric_diagonal(const FlowGeometry& geom,
                                              std::span<const double> x) {
    const size_t dim = x.size();
    std::vector<double> g(dim, 1.0);
    const double t = x[0];
    const double a = geom.radial_scale(t);
    g[1] = a * a;
    const double w = geom.warp(a * x[1], t);
    double h = 1.0;
    for (size_t q = 2; q < dim; ++q) {
        g[q] = w * w * h;
        const double s = std::sin(x[q]);
        h *= s * s;
    }
    return g;
}

double SpacetimeConnection::max_difference(const SpacetimeConnection& other) const {
    double worst = 0.0;
    for (size_t i = 0; i < gamma_.size(); ++i)
        worst = std::max(worst, std::abs(gamma_[i] - other.gamma_[i]));
    return worst;
}

namespace {

// Spatial Christoffels of the diagonal metric at fixed time, from analytic
// partial derivatives of the metric components. Indices are space-time
// indices 1..n; the time index is not touched.
void fill_spatial_christoffels(const FlowGeometry& geom, std::span<const double> x,
                               SpacetimeConnection& gam) {
    const int dim = static_cast<int>(x.size());
    const double t = x[0];
    const double a = geom.radial_scale(t);
    const double rho = a * x[1];
    const double w = geom.warp(rho, t);
    const double dw = geom.warp_drho(rho, t);
    const std::vector<double> g = spacetime_metric_diagonal(geom, x);

    // dg[b][c] = d g_cc / d x^b for spatial b, c.
    std::vector<std::vector<double>> dg(static_cast<size_t>(dim),
                                        std::vector<double>(static_cast<size_t>(dim), 0.0));
    for (int c = 2; c < dim; ++c) {
        dg[1][c] = 2.0 * dw * a * g[c] / w;
        for (int b = 2; b < c; ++b) dg[b][c] = 2.0 * g[c] / std::tan(x[b]);
    }
    for (int i = 1; i < dim; ++i) {
        for (int j = 1; j < dim; ++j) {
            if (i == j) {
                gam(i, i, i) = dg[i][i] / (2.0 * g[i]);
            } else {
                gam(i, i, j) = dg[j][i] / (2.0 * g[i]);
                gam(i, j, i) = gam(i, i, j);
                gam(j, i, i) = -dg[j][i] / (2.0 * g[j]);
            }
        }
    }
}

}  // namespace

SpacetimeConnection spacetime_christoffels(const FlowGeometry& geom, const SpaceTimePoint& p) {
    const std::vector<double> x = spacetime_coordinates(geom, p);
    const int dim = static_cast<int>(x.size());
    SpacetimeConnection gam(dim - 1);
    fill_spatial_christoffels(geom, x, gam);

    const Evolution ups = geom.evolution(p);
    const std::vector<double> g = spacetime_metric_diagonal(geom, x);
    for (int i = 1; i < dim; ++i) {
        const double eig = i == 1 ? ups.radial : ups.tangential;
        gam(0, i, i) = eig * g[i];  // Gamma~^0_ij = Upsilon_ij
        gam(i, 0, i) = -eig;        // Gamma~^i_0k = -Upsilon^i_k
        gam(i, i, 0) = -eig;
    }
    return gam;
}

SpacetimeConnection spacetime_christoffels_fd(const FlowGeometry& geom, const SpaceTimePoint& p,
                                              double h) {
    const std::vector<double> x = spacetime_coordinates(geom, p);
    const int dim = static_cast<int>(x.size());
    const std::vector<double> g = spacetime_metric_diagonal(geom, x);

    std::vector<std::vector<double>> dg(static_cast<size_t>(dim));
    for (int b = 0; b < dim; ++b) {
        std::vector<double> xp = x, xm = x;
        xp[static_cast<size_t>(b)] += h;
        xm[static_cast<size_t>(b)] -= h;
        const std::vector<double> gp = spacetime_metric_diagonal(geom, xp);
        const std::vector<double> gm = spacetime_metric_diagonal(geom, xm);
        dg[static_cast<size_t>(b)].resize(static_cast<size_t>(dim));
        for (int c = 0; c < dim; ++c)
            dg[static_cast<size_t>(b)][static_cast<size_t>(c)] =
                (gp[static_cast<size_t>(c)] - gm[static_cast<size_t>(c)]) / (2.0 * h);
    }
    // d_a g_{bc} for a diagonal metric.
    auto dmetric = [&](int a, int b, int c) {
        return b == c ? dg[static_cast<size_t>(a)][static_cast<size_t>(b)] : 0.0;
    };
    SpacetimeConnection gam(dim - 1);
    for (int c = 0; c < dim; ++c)
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                gam(c, a, b) = 0.5 / g[static_cast<size_t>(c)] *
                               (dmetric(a, b, c) + dmetric(b, a, c) - dmetric(c, a, b));
    return gam;
}

double spacetime_time_component_frame(const FlowGeometry& geom, const SpaceTimePoint& p, int i,
                                      int j) {
    const SpacetimeConnection gam = spacetime_christoffels(geom, p);
    const std::vector<double> x = spacetime_coordinates(geom, p);
    const std::vector<double> g = spacetime_metric_diagonal(geom, x);
    return gam(0, i, j) /
           std::sqrt(g[static_cast<size_t>(i)] * g[static_cast<size_t>(j)]);
}

namespace {

std::vector<double> eval_field(const SpacetimeField& field, std::span<const double> x) {
    std::vector<double> v = field(x);
    if (v.size() != x.size()) throw RangeError("field has the wrong number of components");
    return v;
}

// d X^a / d x^a by central differences.
double partial(const SpacetimeField& field, std::vector<double> x, int a, double h) {
    const size_t ia = static_cast<size_t>(a);
    const double x0 = x[ia];
    x[ia] = x0 + h;
    const double fp = eval_field(field, x)[ia];
    x[ia] = x0 - h;
    const double fm = eval_field(field, x)[ia];
    return (fp - fm) / (2.0 * h);
}

}  // namespace

double spacetime_divergence(const FlowGeometry& geom, const SpacetimeField& field,
                            const SpaceTimePoint& p, double h) {
    const std::vector<double> x = spacetime_coordinates(geom, p);
    const int dim = static_cast<int>(x.size());
    SpacetimeConnection gam(dim - 1);
    fill_spatial_christoffels(geom, x, gam);
    const std::vector<double> X = eval_field(field, x);

    double div = 0.0;
    for (int i = 1; i < dim; ++i) {
        div += partial(field, x, i, h);
        for (int j = 1; j < dim; ++j) div += gam(i, i, j) * X[static_cast<size_t>(j)];
    }
    const double R = geom.evolution_trace(p.t);
    return div - X[0] * R + partial(field, x, 0, h);
}

double spacetime_divergence_fd(const FlowGeometry& geom, const SpacetimeField& field,
                               const SpaceTimePoint& p, double h) {
    const std::vector<double> x = spacetime_coordinates(geom, p);
    const int dim = static_cast<int>(x.size());
    auto volume = [&](std::span<const double> y) {
        const std::vector<double> g = spacetime_metric_diagonal(geom, y);
        double det = 1.0;
        for (double gi : g) det *= gi;
        return std::sqrt(det);
    };
    double total = 0.0;
    for (int a = 0; a < dim; ++a) {
        std::vector<double> xp = x, xm = x;
        xp[static_cast<size_t>(a)] += h;
        xm[static_cast<size_t>(a)] -= h;
        const double fp = volume(xp) * eval_field(field, xp)[static_cast<size_t>(a)];
        const double fm = volume(xm) * eval_field(field, xm)[static_cast<size_t>(a)];
        total += (fp - fm) / (2.0 * h);
    }
    return total / volume(x);
}

}  // namespace mvlab
