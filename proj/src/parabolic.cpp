#include "mvlab/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mvlab/errors.hpp"
#include "mvlab/regions.hpp"

namespace mvlab {

namespace {

void require_parabolic(const Kernel& k) {
    if (!k.parabolic()) throw UnsupportedError("parabolic formulas need a heat-type kernel");
}

double trace_R(const Kernel& k, double tau) { return k.geometry().evolution_trace(-tau); }

double level_of(const Kernel& k, double r) { return std::pow(r, -k.dimension()); }

Estimate scaled(Estimate e, double c) { return {c * e.value, std::abs(c) * e.error}; }

/// r^{-n} int R v over E_r; zero on static models.
Estimate curvature_term(const LevelRegion& reg, const TestField& v) {
    const Kernel& k = reg.kernel();
    if (k.geometry().is_static()) return {};
    const Estimate e = ball_integrate(reg, [&](double rho, double tau) {
        return trace_R(k, tau) * v.mean(rho, -tau);
    });
    return scaled(e, level_of(k, reg.level()));
}

Estimate surface_term(const LevelRegion& reg, const TestField& v) {
    return sphere_integrate(reg, [&](double rho, double tau, const KernelSample& s) {
        return v.mean(rho, -tau) * s.drho * s.drho / std::hypot(s.drho, s.dtau);
    });
}

/// int over E_r of weight(K) (d/dt - Lap) v, skipping kernel work where the operator vanishes.
Estimate heat_operator_term(const LevelRegion& reg, const TestField& v,
                            const std::function<double(double)>& weight) {
    const Kernel& k = reg.kernel();
    return ball_integrate(reg, [&](double rho, double tau) {
        const double op = v.mean_heat_operator(rho, -tau);
        return op == 0.0 ? 0.0 : weight(k.value(rho, tau)) * op;
    });
}

double log_level(const LevelRegion& reg) { return reg.kernel().dimension() * std::log(reg.level()); }

}  // namespace

Estimate parabolic_J(const Kernel& kernel, const TestField& v, double r) {
    require_parabolic(kernel);
    const LevelRegion reg = LevelRegion::heat_ball(kernel, r);
    Estimate out = surface_term(reg, v);
    out += curvature_term(reg, v);
    return out;
}

Estimate parabolic_I(const Kernel& kernel, const TestField& v, double r) {
    require_parabolic(kernel);
    const LevelRegion reg = LevelRegion::heat_ball(kernel, r);
    const bool flat_time = kernel.geometry().is_static();
    const double lr = log_level(reg);
    const Estimate e = ball_integrate(reg, [&](double rho, double tau) {
        const KernelSample s = kernel.eval(rho, tau);
        const double g = s.drho / s.value;
        double w = g * g;
        if (!flat_time) w += trace_R(kernel, tau) * (std::log(s.value) + lr);
        return w * v.mean(rho, -tau);
    });
    return scaled(e, level_of(kernel, r));
}

Estimate heat_sphere_rhs(const Kernel& kernel, const TestField& v, double r) {
    require_parabolic(kernel);
    const LevelRegion reg = LevelRegion::heat_ball(kernel, r);
    const double level = level_of(kernel, r);
    Estimate out = surface_term(reg, v);
    out += curvature_term(reg, v);
    out += heat_operator_term(reg, v, [&](double K) { return K - level; });
    return out;
}

Estimate heat_ball_rhs(const Kernel& kernel, const TestField& v, double r) {
    require_parabolic(kernel);
    const LevelRegion reg = LevelRegion::heat_ball(kernel, r);
    const double level = level_of(kernel, r);
    const double lr = log_level(reg);
    Estimate out = parabolic_I(kernel, v, r);
    // The iterated eta integral collapses to the weight phi_r - r^{-n} psi_r.
    out += heat_operator_term(reg, v, [&](double K) { return K - level - level * (std::log(K) + lr); });
    return out;
}

MeanValueResult mv_heat_sphere(const Kernel& heat, const TestField& v, double r) {
    if (heat.kind() != KernelKind::heat) throw UnsupportedError("identity needs the exact heat kernel");
    const Estimate rhs = heat_sphere_rhs(heat, v, r);
    const double lhs = v.center_value();
    return {lhs, rhs.value, std::abs(lhs - rhs.value), rhs.error};
}

MeanValueResult mv_heat_ball(const Kernel& heat, const TestField& v, double r) {
    if (heat.kind() != KernelKind::heat) throw UnsupportedError("identity needs the exact heat kernel");
    const Estimate rhs = heat_ball_rhs(heat, v, r);
    const double lhs = v.center_value();
    return {lhs, rhs.value, std::abs(lhs - rhs.value), rhs.error};
}

double heat_chain_residual(const Kernel& kernel, const TestField& v, double r) {
    const int n = kernel.dimension();
    const double ball = heat_ball_rhs(kernel, v, r).value;
    const Estimate chain = integrate(
        [&](double eta) { return n * std::pow(eta, n - 1) * heat_sphere_rhs(kernel, v, eta).value; }, 0.0,
        r, {1e-12, 1e-9, 200});
    return std::abs(ball - std::pow(r, -n) * chain.value);
}

Estimate cap_integral(const Kernel& kernel, const TestField& v, double r, double s) {
    require_parabolic(kernel);
    const LevelRegion reg = LevelRegion::heat_ball(kernel, r);
    if (!(s > 0.0 && s < reg.tau_max())) throw RangeError("cap time must lie inside the heat ball");
    const double level = level_of(kernel, r);
    const FlowGeometry& g = kernel.geometry();
    return integrate(
        [&](double rho) {
            return v.mean(rho, -s) * (kernel.value(rho, s) - level) * g.sphere_area(rho, -s);
        },
        0.0, reg.profile(s), {1e-14, 1e-11, 2000});
}

Estimate jhat(const Kernel& kernel, double r) {
    require_parabolic(kernel);
    const LevelRegion reg = LevelRegion::heat_ball(kernel, r);
    return sphere_integrate(reg, [](double, double, const KernelSample& s) {
        return (s.drho * s.drho - s.value * s.dtau) / std::hypot(s.drho, s.dtau);
    });
}

Estimate ihat(const Kernel& kernel, double a, double r) {
    require_parabolic(kernel);
    if (!(a >= 0.0 && a < r)) throw RangeError("need 0 <= a < r");
    const int n = kernel.dimension();
    const LevelRegion outer = LevelRegion::heat_ball(kernel, r);
    auto Q = [&](double rho, double tau) {
        const KernelSample s = kernel.eval(rho, tau);
        const double g = s.drho / s.value;
        return g * g - s.dtau / s.value;
    };
    if (a == 0.0) return scaled(ball_integrate(outer, Q), std::pow(r, -n));
    const LevelRegion inner = LevelRegion::heat_ball(kernel, a);
    return scaled(annulus_integrate(outer, inner, Q), 1.0 / (std::pow(r, n) - std::pow(a, n)));
}

SurfaceFormResiduals surface_form_residual(const Kernel& kernel, double r) {
    const TestField one = make_field("constant-1", kernel.geometry());
    const Estimate j_new = jhat(kernel, r), j_old = parabolic_J(kernel, one, r);
    const Estimate i_new = ihat(kernel, 0.0, r), i_old = parabolic_I(kernel, one, r);
    return {std::abs(j_new.value - j_old.value), std::abs(i_new.value - i_old.value),
            j_new.error + j_old.error, i_new.error + i_old.error};
}

RicciSweep jhat_sweep(const Kernel& kernel, const std::vector<double>& grid, double a, double tol,
                      int jobs) {
    require_parabolic(kernel);
    if (grid.empty()) throw RangeError("empty grid");
    if (!(a >= 0.0 && a < grid.front())) throw RangeError("need 0 <= a < every grid radius");
    const std::size_t m = grid.size();
    std::vector<Estimate> J(m), I(m);
    parallel_for(2 * m, jobs, [&](std::size_t k) {
        const std::size_t i = k / 2;
        if (k % 2 == 0)
            J[i] = jhat(kernel, grid[i]);
        else
            I[i] = ihat(kernel, a, grid[i]);
    });
    std::vector<double> jv, je, iv, ie;
    for (std::size_t i = 0; i < m; ++i) {
        jv.push_back(J[i].value);
        je.push_back(J[i].error);
        iv.push_back(I[i].value);
        ie.push_back(I[i].error);
    }
    RicciSweep s{make_sweep_report("jhat", grid, jv, je, Direction::non_increasing, tol),
                 make_sweep_report("ihat", grid, iv, ie, Direction::non_increasing, tol),
                 {},
                 true};
    for (std::size_t i = 0; i < m; ++i) {
        const bool ok = jv[i] <= iv[i] + je[i] + ie[i] + tol;
        s.chain_ok.push_back(ok);
        s.chain = s.chain && ok;
    }
    return s;
}

double jhat_relation_residual(const Kernel& kernel, double r) {
    const int n = kernel.dimension();
    const double lhs = std::pow(r, n) * ihat(kernel, 0.0, r).value;
    const Estimate rhs = integrate(
        [&](double eta) { return n * std::pow(eta, n - 1) * jhat(kernel, eta).value; }, 0.0, r,
        {1e-10, 1e-7, 50});
    return std::abs(lhs - rhs.value) / std::max(1e-300, std::abs(lhs));
}

EllDerivatives ell_derivatives(const ReducedDistanceField& field, double rho, double tau, double h) {
    const FlowGeometry& g = field.flow();
    // ell is even through the center along a geodesic line.
    const Derivatives dr = central_derivatives(
        [&](double x) { return field.ell(std::abs(x), tau); }, rho, h * std::max(1.0, rho));
    const double u = rho / g.radial_scale(-tau);
    const Derivatives dt = central_derivatives(
        [&](double s) { return field.ell(u * g.radial_scale(-s), s); }, tau, h * tau);
    return {field.ell(rho, tau), dr.d1, dr.d2, dt.d1};
}

namespace {

SolitonPoint soliton_point(const ReducedDistanceField& field, double rho, double tau) {
    const FlowGeometry& g = field.flow();
    const int n = g.dimension();
    const double t = -tau;
    const EllDerivatives d = ell_derivatives(field, rho, tau);
    // Hessian eigenvalues: radial, and tangential (phi'/phi) ell_rho.
    const double hess_tan = rho > 0.0 ? g.warp_drho(rho, t) / g.warp(rho, t) * d.d_rho : d.d_rho2;
    const double lap = d.d_rho2 + (n - 1) * hess_tan;
    const double R = g.evolution_trace(t);
    const double grad2 = d.d_rho * d.d_rho;
    const double K = std::pow(4.0 * std::numbers::pi * tau, -0.5 * n) * std::exp(-d.ell);
    const Curvature c = g.curvature({rho, t, {}});
    const double ric_rad = g.is_static() ? 0.0 : c.ric_radial;
    const double ric_tan = g.is_static() ? 0.0 : c.ric_tangential;
    const double sol = std::max(std::abs(ric_rad + d.d_rho2 - 0.5 / tau),
                                std::abs(ric_tan + hess_tan - 0.5 / tau));
    return {rho,
            tau,
            d.d_tau - lap + grad2 - R + 0.5 * n / tau,
            -2.0 * d.d_tau - grad2 + R - d.ell / tau,
            (tau * (2.0 * lap - grad2 + R) + d.ell - n) * K,
            n > 1 ? sol : std::abs(ric_rad + d.d_rho2 - 0.5 / tau)};
}

}  // namespace

SolitonCheck soliton_residuals(const ReducedDistanceField& field,
                               std::span<const std::pair<double, double>> samples, int jobs) {
    if (samples.empty()) throw RangeError("no samples");
    SolitonCheck out;
    out.points.resize(samples.size());
    parallel_for(samples.size(), jobs, [&](std::size_t i) {
        out.points[i] = soliton_point(field, samples[i].first, samples[i].second);
    });
    out.ell_evolution_min = out.points.front().ell_evolution;
    for (const auto& p : out.points) {
        out.ell_evolution = std::max(out.ell_evolution, std::abs(p.ell_evolution));
        out.ell_evolution_min = std::min(out.ell_evolution_min, p.ell_evolution);
        out.ell_first_order = std::max(out.ell_first_order, std::abs(p.ell_first_order));
        out.entropy = std::max(out.entropy, std::abs(p.entropy));
        out.soliton = std::max(out.soliton, p.soliton);
    }
    return out;
}

double li_yau_ricci_residual(const ReducedDistanceField& field,
                       std::span<const std::pair<double, double>> samples, int jobs) {
    std::vector<double> res(samples.size());
    parallel_for(samples.size(), jobs, [&](std::size_t i) {
        const auto [rho, tau] = samples[i];
        const EllDerivatives d = ell_derivatives(field, rho, tau);
        const double calK = field.solve(rho, tau).k_integral;
        // Q - n/(2 tau) = |grad ell|^2 + ell_tau
        res[i] = std::abs(d.d_rho * d.d_rho + d.d_tau + calK / (2.0 * std::pow(tau, 1.5)));
    });
    return res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
}

}  // namespace mvlab
