#include "mvlab/elliptic.hpp"

#include <algorithm>
#include <cmath>

#include "mvlab/errors.hpp"
#include "mvlab/regions.hpp"

namespace mvlab {

namespace {

constexpr QuadratureOptions kRadial{1e-14, 1e-11, 2000};
constexpr QuadratureOptions kLevels{1e-13, 1e-10, 2000};

void require_elliptic(const Kernel& k) {
    if (k.parabolic()) throw UnsupportedError("elliptic formulas need a Green-type kernel");
}

double area(const Kernel& k, double rho) { return k.geometry().sphere_area(rho, 0.0); }

Estimate radial_integral(const Kernel& k, double rho_star, const std::function<double(double)>& f) {
    return integrate([&](double rho) { return f(rho) * area(k, rho); }, 0.0, rho_star, kRadial);
}

void require_nonnegative(const TestField& v, double rho_star) {
    double worst = v.center_value();
    for (int i = 1; i <= 64; ++i) worst = std::min(worst, v.sphere_min(rho_star * i / 64.0));
    if (worst < -1e-14) throw PreconditionError("field is negative on the region");
}

}  // namespace

Estimate elliptic_J(const Kernel& kernel, const TestField& v, double r) {
    require_elliptic(kernel);
    const LevelRegion reg = LevelRegion::elliptic(kernel, r);
    return sphere_integrate(reg, [&](double rho, double, const KernelSample& k) {
        return std::abs(k.drho) * v.mean(rho);
    });
}

Estimate elliptic_I(const Kernel& kernel, const TestField& v, double r) {
    require_elliptic(kernel);
    const double rho_star = level_radius(kernel, r);
    const double scale = std::pow(r, -kernel.dimension());
    Estimate e = radial_integral(kernel, rho_star, [&](double rho) {
        const KernelSample k = kernel.eval(rho);
        const double g = k.drho / k.value;
        return g * g * v.mean(rho);
    });
    return {scale * e.value, scale * e.error};
}

Estimate elliptic_J_slope(const Kernel& kernel, const TestField& v, double r) {
    require_elliptic(kernel);
    const int n = kernel.dimension();
    const double c = n / std::pow(r, n + 1);
    const Estimate e = radial_integral(kernel, level_radius(kernel, r),
                                       [&](double rho) { return v.mean_laplacian(rho); });
    return {c * e.value, c * e.error};
}

Estimate elliptic_I_slope(const Kernel& kernel, const TestField& v, double r) {
    require_elliptic(kernel);
    const int n = kernel.dimension();
    const double c = n / std::pow(r, n + 1);
    const double log_rn = n * std::log(r);
    const Estimate e = radial_integral(kernel, level_radius(kernel, r), [&](double rho) {
        return v.mean_laplacian(rho) * (std::log(kernel.value(rho)) + log_rn);
    });
    return {c * e.value, c * e.error};
}

Estimate elliptic_mean_value_rhs(const Kernel& kernel, const TestField& v, double r,
                                 MeanValueForm form) {
    require_elliptic(kernel);
    const int n = kernel.dimension();
    const double rho_star = level_radius(kernel, r);
    const double level = std::pow(r, -n);
    const double log_rn = n * std::log(r);
    if (form == MeanValueForm::sphere) {
        Estimate out = elliptic_J(kernel, v, r);
        const Estimate corr = radial_integral(kernel, rho_star, [&](double rho) {
            return (kernel.value(rho) - level) * v.mean_laplacian(rho);
        });
        out.value -= corr.value;
        out.error += corr.error;
        return out;
    }
    // The iterated eta integral collapses to the weight phi_r - r^{-n} psi_r.
    Estimate out = elliptic_I(kernel, v, r);
    const Estimate corr = radial_integral(kernel, rho_star, [&](double rho) {
        const double g = kernel.value(rho);
        return (g - level - level * (std::log(g) + log_rn)) * v.mean_laplacian(rho);
    });
    out.value -= corr.value;
    out.error += corr.error;
    return out;
}

MeanValueResult mv_identity(const Kernel& green, const TestField& v, double r, MeanValueForm form) {
    if (green.kind() != KernelKind::green) throw UnsupportedError("identity needs the exact Green's function");
    const Estimate rhs = elliptic_mean_value_rhs(green, v, r, form);
    const double lhs = v.center_value();
    return {lhs, rhs.value, std::abs(lhs - rhs.value), rhs.error};
}

Estimate mv_inequality_deficit(const Kernel& kernel, const TestField& v, double r,
                               MeanValueForm form) {
    if (kernel.kind() != KernelKind::sub_green && kernel.kind() != KernelKind::sup_green)
        throw UnsupportedError("inequality needs a sub- or sup-Green kernel");
    require_nonnegative(v, level_radius(kernel, r));
    const Estimate rhs = elliptic_mean_value_rhs(kernel, v, r, form);
    const double lhs = v.center_value();
    const double d = kernel.kind() == KernelKind::sub_green ? lhs - rhs.value : rhs.value - lhs;
    return {d, rhs.error};
}

DerivativeCheck elliptic_derivative_check(const Kernel& kernel, const TestField& v, double r,
                                          bool ball, double tol) {
    const double h = 1e-2 * r;
    double noise = 0.0;
    auto q = [&](double s) {
        const Estimate e = ball ? elliptic_I(kernel, v, s) : elliptic_J(kernel, v, s);
        noise = std::max(noise, e.error);
        return e.value;
    };
    const double fd = central_derivatives(q, r, h).d1;
    const Estimate pred = ball ? elliptic_I_slope(kernel, v, r) : elliptic_J_slope(kernel, v, r);
    DerivativeCheck c{r, fd, pred.value, tol + pred.error + 3.0 * noise / h, false};
    switch (kernel.kind()) {
    case KernelKind::green: c.ok = std::abs(fd - pred.value) <= c.slack; break;
    case KernelKind::sub_green: c.ok = fd <= pred.value + c.slack; break;
    case KernelKind::sup_green: c.ok = fd >= pred.value - c.slack; break;
    default: throw UnsupportedError("not an elliptic kernel");
    }
    return c;
}

double elliptic_relation_residual(const Kernel& kernel, const TestField& v, double r) {
    const int n = kernel.dimension();
    const double lhs = std::pow(r, n) * elliptic_I(kernel, v, r).value;
    const Estimate rhs = integrate(
        [&](double eta) { return n * std::pow(eta, n - 1) * elliptic_J(kernel, v, eta).value; }, 0.0, r,
        kLevels);
    return std::abs(lhs - rhs.value) / std::max(1.0, std::abs(lhs));
}

Direction elliptic_direction(const Kernel& kernel, const TestField& v) {
    const FieldClass c = v.tag();
    switch (kernel.kind()) {
    case KernelKind::green:
        if (c == FieldClass::harmonic) return Direction::constant;
        if (c == FieldClass::superharmonic) return Direction::non_increasing;
        if (c == FieldClass::subharmonic) return Direction::non_decreasing;
        return Direction::none;
    case KernelKind::sub_green:
        return c == FieldClass::harmonic || c == FieldClass::superharmonic ? Direction::non_increasing
                                                                           : Direction::none;
    case KernelKind::sup_green:
        return c == FieldClass::harmonic || c == FieldClass::subharmonic ? Direction::non_increasing
                                                                         : Direction::none;
    default: throw UnsupportedError("not an elliptic kernel");
    }
}

EllipticSweep elliptic_sweep(const Kernel& kernel, const TestField& v, const std::vector<double>& grid,
                             double tol, int jobs) {
    require_elliptic(kernel);
    const std::size_t m = grid.size();
    std::vector<Estimate> I(m), J(m);
    std::vector<double> rel(m);
    parallel_for(m, jobs, [&](std::size_t i) {
        I[i] = elliptic_I(kernel, v, grid[i]);
        J[i] = elliptic_J(kernel, v, grid[i]);
        rel[i] = elliptic_relation_residual(kernel, v, grid[i]);
    });

    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < m; ++i)
        if (m < 3 || (i > 0 && i + 1 < m)) interior.push_back(i);
    std::vector<DerivativeCheck> dI(interior.size()), dJ(interior.size());
    parallel_for(interior.size(), jobs, [&](std::size_t j) {
        dI[j] = elliptic_derivative_check(kernel, v, grid[interior[j]], true, tol);
        dJ[j] = elliptic_derivative_check(kernel, v, grid[interior[j]], false, tol);
    });

    auto column = [&](const std::vector<Estimate>& e, bool value) {
        std::vector<double> out;
        for (const auto& x : e) out.push_back(value ? x.value : x.error);
        return out;
    };
    const Direction dir = elliptic_direction(kernel, v);
    EllipticSweep s{make_sweep_report("I", grid, column(I, true), column(I, false), dir, tol),
                    make_sweep_report("J", grid, column(J, true), column(J, false), dir, tol),
                    std::move(dI), std::move(dJ), 0.0};
    for (double x : rel) s.relation_residual = std::max(s.relation_residual, x);
    return s;
}

Estimate coarea_check(const Kernel& kernel, const std::function<double(double rho)>& f, double r) {
    require_elliptic(kernel);
    const int n = kernel.dimension();
    double inner_err = 0.0;
    auto shell = [&](double eta, bool use_psi, double weight) {
        const double rho_star = level_radius(kernel, eta);
        const double level = std::pow(eta, -n);
        const double log_rn = n * std::log(eta);
        const Estimate e = radial_integral(kernel, rho_star, [&](double rho) {
            const double g = kernel.value(rho);
            return f(rho) * (use_psi ? std::log(g) + log_rn : g - level);
        });
        inner_err = std::max(inner_err, std::abs(weight * e.error));
        return weight * e.value;
    };
    const double scale = std::pow(r, -n);
    const Estimate lhs = integrate(
        [&](double eta) { return shell(eta, false, scale * n * std::pow(eta, n - 1)); }, 0.0, r, kLevels);
    const Estimate rhs = integrate(
        [&](double eta) { return shell(eta, true, n / std::pow(eta, n + 1)); }, 0.0, r, kLevels);
    return {lhs.value - rhs.value, lhs.error + rhs.error + inner_err * r};
}

}  // namespace mvlab
