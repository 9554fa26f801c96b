#include "mvlab/kernels.hpp"

#include <cmath>
#include <numbers>

#include "mvlab/errors.hpp"
#include "mvlab/numerics.hpp"

namespace mvlab {

namespace {

constexpr double kPi = std::numbers::pi;

double heat_norm(int n, double tau) { return std::pow(4.0 * kPi * tau, -0.5 * n); }

// Tail integral of csch^m over [x0, infinity).
double csch_power_tail(int m, double x0) {
    auto f = [m](double x) { return std::pow(std::sinh(x), -m); };
    // csch^m decays like 2^m e^{-m x}; 40/m e-folds past x0 are negligible.
    const double span = 40.0 / m + 1.0;
    double total = 0.0;
    // Split geometrically near x0 where the integrand is steep.
    double lo = x0;
    while (lo < x0 + span) {
        const double hi = std::min(x0 + span, std::max(2.0 * lo, lo + 0.5));
        total += integrate(f, lo, hi, {0.0, 1e-14, 400}).value;
        lo = hi;
    }
    return total;
}

}  // namespace

RadialValue space_form_green(int n, double k, double d) {
    if (!(d > 0.0)) throw RangeError("distance must be positive");
    if (k < 0.0) throw RangeError("curvature parameter must be non-negative");
    if (n < 2) throw UnsupportedError("Green's function needs dimension >= 2");
    const double area = unit_sphere_area(n - 1);
    if (k == 0.0) {
        if (n < 3) throw UnsupportedError("Euclidean Green's function needs n >= 3");
        return {std::pow(d, 2 - n) / ((n - 2) * area), -std::pow(d, 1 - n) / area};
    }
    const double x = k * d;
    const double s = std::sinh(x);
    const double deriv = -std::pow(k / s, n - 1) / area;
    if (n == 3) return {k * std::exp(-x) / (4.0 * kPi * s), deriv};
    if (n == 2) return {-std::log(std::tanh(0.5 * x)) / (2.0 * kPi), deriv};
    return {std::pow(k, n - 2) / area * csch_power_tail(n - 1, x), deriv};
}

Kernel::Kernel(KernelKind kind, const FlowGeometry& geom, double k,
               std::shared_ptr<const ReducedDistanceField> field)
    : kind_(kind), geom_(geom), k_(k), field_(std::move(field)) {}

Kernel Kernel::green(const FlowGeometry& geom) {
    switch (geom.kind()) {
    case GeometryKind::euclidean:
    case GeometryKind::gaussian_soliton:
        if (geom.dimension() < 3) throw UnsupportedError("Euclidean Green's function needs n >= 3");
        return Kernel(KernelKind::green, geom, 0.0, nullptr);
    case GeometryKind::hyperbolic:
        return Kernel(KernelKind::green, geom, geom.curvature_parameter(), nullptr);
    case GeometryKind::shrinking_sphere: break;
    }
    throw UnsupportedError("no minimal positive Green's function on " + geom.name());
}

Kernel Kernel::sub_green(const FlowGeometry& geom, double k) {
    if (!geom.is_static()) throw UnsupportedError("sub-Green kernels need a static model");
    if (k < 0.0) throw RangeError("curvature parameter must be non-negative");
    if (k == 0.0 && geom.dimension() < 3) throw UnsupportedError("k = 0 needs n >= 3");
    if (geom.dimension() < 2) throw UnsupportedError("sub-Green kernels need n >= 2");
    return Kernel(KernelKind::sub_green, geom, k, nullptr);
}

Kernel Kernel::sup_green(const FlowGeometry& geom) {
    if (!geom.is_static()) throw UnsupportedError("sup-Green kernels need a static model");
    if (geom.dimension() < 3) throw UnsupportedError("sup-Green kernels need n >= 3");
    return Kernel(KernelKind::sup_green, geom, 0.0, nullptr);
}

Kernel Kernel::heat(const FlowGeometry& geom) {
    const bool ok = geom.is_flat() ||
                    (geom.kind() == GeometryKind::hyperbolic && geom.dimension() == 3);
    if (!ok) throw UnsupportedError("no closed form heat kernel on " + geom.name());
    return Kernel(KernelKind::heat, geom, geom.curvature_parameter(), nullptr);
}

Kernel Kernel::sub_heat(std::shared_ptr<const ReducedDistanceField> field) {
    if (!field) throw RangeError("sub-heat kernel needs a reduced distance field");
    const FlowGeometry geom = field->flow();
    return Kernel(KernelKind::sub_heat, geom, 0.0, std::move(field));
}

KernelSample Kernel::eval(double rho, double tau) const {
    if (parabolic()) {
        if (!(tau > 0.0)) throw RangeError("tau must be positive");
        if (!(rho >= 0.0) || !(rho < geom_.rho_max(-tau))) throw RangeError("radius outside the slice");
        return kind_ == KernelKind::heat ? eval_heat(rho, tau) : eval_sub_heat(rho, tau);
    }
    return eval_elliptic(rho);
}

double Kernel::value(double rho, double tau) const {
    if (kind_ == KernelKind::sub_heat) {
        if (!(tau > 0.0)) throw RangeError("tau must be positive");
        return heat_norm(dimension(), tau) * std::exp(-field_->ell(rho, tau));
    }
    return eval(rho, tau).value;
}

KernelSample Kernel::eval_elliptic(double rho) const {
    if (!(rho > 0.0)) throw RangeError("distance must be positive");
    const int n = dimension();
    RadialValue g{};
    switch (kind_) {
    case KernelKind::green:
    case KernelKind::sub_green: g = space_form_green(n, k_, rho); break;
    case KernelKind::sup_green: g = space_form_green(n, 0.0, rho); break;
    default: throw UnsupportedError("not an elliptic kernel");
    }
    return {g.value, g.derivative, 0.0};
}

KernelSample Kernel::eval_heat(double rho, double tau) const {
    const int n = dimension();
    if (geom_.is_flat()) {
        const double v = heat_norm(n, tau) * std::exp(-rho * rho / (4.0 * tau));
        return {v, -rho / (2.0 * tau) * v, v * (-0.5 * n / tau + rho * rho / (4.0 * tau * tau))};
    }
    // Hyperbolic 3-space of curvature -k^2.
    const double k = k_;
    const double x = k * rho;
    const double shape = x < 1e-8 ? 1.0 - x * x / 6.0 : x / std::sinh(x);
    // d/drho log(x / sinh x) = 1/rho - k coth(k rho)
    const double dshape = x < 1e-4 ? -k * x / 3.0 : 1.0 / rho - k / std::tanh(x);
    const double v = heat_norm(3, tau) * shape * std::exp(-rho * rho / (4.0 * tau) - k * k * tau);
    const double dlog_rho = dshape - rho / (2.0 * tau);
    const double dlog_tau = -1.5 / tau + rho * rho / (4.0 * tau * tau) - k * k;
    return {v, v * dlog_rho, v * dlog_tau};
}

KernelSample Kernel::eval_sub_heat(double rho, double tau) const {
    const int n = dimension();
    const ReducedDistanceField& f = *field_;
    const double ell = f.ell(rho, tau);
    const double v = heat_norm(n, tau) * std::exp(-ell);

    // ell is even in rho through the center.
    const double h = 1e-4 * std::max(1.0, rho);
    const double ell_rho = (f.ell(rho + h, tau) - f.ell(std::abs(rho - h), tau)) / (2.0 * h);

    const double ht = 1e-4 * tau;
    const double u = rho / geom_.radial_scale(-tau);
    auto ell_fixed = [&](double s) { return f.ell(u * geom_.radial_scale(-s), s); };
    const double ell_tau = (ell_fixed(tau + ht) - ell_fixed(tau - ht)) / (2.0 * ht);

    return {v, -v * ell_rho, v * (-0.5 * n / tau - ell_tau)};
}

GreenValue green_value(const Kernel& kernel, double d) {
    if (kernel.parabolic()) throw UnsupportedError("green_value needs an elliptic kernel");
    const KernelSample s = kernel.eval(d);
    return {s.value, std::abs(s.drho)};
}

HeatValue heat_kernel(const Kernel& kernel, double d, double tau) {
    if (kernel.kind() != KernelKind::heat) throw UnsupportedError("heat_kernel needs a heat kernel");
    const KernelSample s = kernel.eval(d, tau);
    return {s.value, std::abs(s.drho), s.dtau};
}

HeatValue sub_heat_kernel(const Kernel& kernel, const SpaceTimePoint& p) {
    if (kernel.kind() != KernelKind::sub_heat)
        throw UnsupportedError("sub_heat_kernel needs a sub-heat kernel");
    const KernelSample s = kernel.eval(p.rho, -p.t);
    return {s.value, std::abs(s.drho), s.dtau};
}

double mcf_sup_heat_kernel(std::span<const double> x0, std::span<const double> y, double tau,
                           int n) {
    if (!(tau > 0.0)) throw RangeError("tau must be positive");
    if (x0.size() != y.size()) throw RangeError("points must share the ambient dimension");
    double d2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) d2 += (x0[i] - y[i]) * (x0[i] - y[i]);
    return heat_norm(n, tau) * std::exp(-d2 / (4.0 * tau));
}

double liyau_Q(const Kernel& kernel, double rho, double tau) {
    if (!kernel.parabolic()) throw UnsupportedError("Li-Yau expression needs a parabolic kernel");
    if (!(tau > 0.0)) throw RangeError("tau must be positive");
    const KernelSample s = kernel.eval(rho, tau);
    const double g = s.drho / s.value;
    return g * g - s.dtau / s.value;
}

}  // namespace mvlab
