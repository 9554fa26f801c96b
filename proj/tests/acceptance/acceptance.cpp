// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mvlab/elliptic.hpp"
#include "mvlab/fields.hpp"
#include "mvlab/geometry.hpp"
#include "mvlab/mcf.hpp"
#include "mvlab/parabolic.hpp"
#include "mvlab/reduced.hpp"
#include "mvlab/regions.hpp"

using namespace mvlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Accumulates sub-conditions of one criterion and a short detail string.
class Criterion {
public:
    void require(bool ok, const std::string& what, double value) {
        if (!ok) {
            pass_ = false;
            std::ostringstream os;
            os << what << "=" << value << ' ';
            detail_ += os.str();
        }
    }
    void worst(const std::string& what, double value) {
        if (std::abs(value) > std::abs(worst_)) {
            worst_ = value;
            worst_name_ = what;
        }
    }
    bool pass() const { return pass_; }
    std::string detail() const {
        if (!pass_) return detail_;
        std::ostringstream os;
        if (!worst_name_.empty()) os << "worst " << worst_name_ << "=" << worst_;
        return os.str();
    }

private:
    bool pass_ = true;
    std::string detail_;
    double worst_ = 0.0;
    std::string worst_name_;
};

using Body = std::function<void(Criterion&)>;

void c1_watson(Criterion& c) {
    const auto e2 = FlowGeometry::euclidean(2);
    const Kernel h = Kernel::heat(e2);
    const TestField u = make_field("caloric-quadratic", e2);
    for (double r : {0.5, 1.0}) {
        const auto t0 = Clock::now();
        const MeanValueResult m = mv_heat_ball(h, u, r);
        const double s = seconds_since(t0);
        c.require(std::abs(m.lhs) <= 1e-15, "u(0,0)", m.lhs);
        c.require(std::abs(m.residual) <= 1e-5, "residual", m.residual);
        c.require(s <= 5.0, "seconds", s);
        c.worst("residual", m.residual);
    }
}

void c2_green_flux(Criterion& c) {
    const auto e3 = FlowGeometry::euclidean(3);
    const Kernel g = Kernel::green(e3);
    const TestField one = make_field("constant-1", e3);
    const TestField hq = make_field("harmonic-quadratic", e3);
    for (double r : {0.5, 1.0, 2.0}) {
        const double flux = elliptic_J(g, one, r).value;
        c.require(std::abs(flux - 1.0) <= 1e-8, "flux", flux);
        c.worst("flux-1", flux - 1.0);
        const double j = elliptic_J(g, hq, r).value;
        c.require(std::abs(j) <= 1e-7, "J_harmonic", j);
    }
}

void c3_derivative(Criterion& c) {
    const auto e3 = FlowGeometry::euclidean(3);
    const Kernel g = Kernel::green(e3);
    const TestField v = make_field("superharmonic", e3);
    const double oracle = -3.0 / (8.0 * std::numbers::pi * std::numbers::pi);
    const DerivativeCheck d = elliptic_derivative_check(g, v, 1.0, false, 1e-6);
    c.require(std::abs(d.fd - oracle) <= 1e-4, "fd-oracle", d.fd - oracle);
    c.require(std::abs(d.predicted - oracle) <= 1e-4, "formula-oracle", d.predicted - oracle);
    c.worst("fd-oracle", d.fd - oracle);
}

void c4_relation(Criterion& c) {
    const auto e3 = FlowGeometry::euclidean(3);
    const Kernel g = Kernel::green(e3);
    for (const char* name : {"superharmonic", "subharmonic", "gaussian-translate"})
        for (double r : {0.7, 1.5}) {
            const double res = elliptic_relation_residual(g, make_field(name, e3), r);
            c.require(res <= 1e-6, std::string("elliptic-") + name, res);
            c.worst("elliptic", res);
        }
    const auto s3 = std::make_shared<ReducedDistanceField>(FlowGeometry::shrinking_sphere(3));
    const double res = jhat_relation_residual(Kernel::sub_heat(s3), 1.0);
    c.require(res <= 1e-4, "parabolic", res);
    c.worst("parabolic", res);
}

void c5_comparison(Criterion& c) {
    const auto h3 = FlowGeometry::hyperbolic(3);
    const Kernel sub = Kernel::sub_green(h3, 1.0);
    const Kernel sup = Kernel::sup_green(h3);
    const Kernel exact = Kernel::green(h3);
    const TestField one = make_field("constant-1", h3);
    const TestField er = make_field("exp-radial", h3);
    for (auto form : {MeanValueForm::sphere, MeanValueForm::ball})
        for (double r : {0.5, 1.0, 1.5}) {
            const double eq = mv_identity(exact, er, r, form).residual;
            c.require(std::abs(eq) <= 1e-6, "exact-green", eq);
            const double eq2 = mv_inequality_deficit(sub, one, r, form).value;
            c.require(std::abs(eq2) <= 1e-6, "sub-green-equality", eq2);
            const double d1 = mv_inequality_deficit(sub, er, r, form).value;
            c.require(d1 >= -1e-7, "sub-green-exp-radial", d1);
            const double d2 = mv_inequality_deficit(sup, one, r, form).value;
            c.require(d2 >= -1e-7, "sup-green-one", d2);
            c.worst("exact-green", eq);
        }
}

void c6_heat_sphere_h3(Criterion& c) {
    const auto h3 = FlowGeometry::hyperbolic(3);
    const Kernel h = Kernel::heat(h3);
    for (const char* name : {"constant-1", "exp-radial"})
        for (double r : {0.5, 1.0}) {
            const double res = mv_heat_sphere(h, make_field(name, h3), r).residual;
            c.require(std::abs(res) <= 1e-4, name, res);
            c.worst(name, res);
        }
}

void c7_flat_reduced(Criterion& c) {
    const ReducedDistanceField f(FlowGeometry::gaussian_soliton(3));
    double worst = 0.0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double rho = 0.2 * i, tau = 0.05 + 0.1 * j;
            worst = std::max(worst, std::abs(f.ell(rho, tau) - rho * rho / (4.0 * tau)));
        }
    c.require(worst <= 1e-8, "ell", worst);
    c.worst("ell", worst);
    for (double tau : {0.1, 0.5, 1.0}) {
        const double th = reduced_volume(f, tau).value;
        c.require(std::abs(th - 1.0) <= 1e-6, "theta-1", th - 1.0);
    }
    for (double rho : {0.3, 1.0, 1.7})
        for (double tau : {0.2, 0.8}) {
            const GaussResiduals g = gauss_identity_residuals(f, rho, tau);
            c.require(g.gradient <= 1e-6, "first-variation-gradient", g.gradient);
            c.require(g.time <= 1e-6, "first-variation-time", g.time);
        }
}

void c8_gaussian_equality(Criterion& c) {
    const auto f = std::make_shared<ReducedDistanceField>(FlowGeometry::gaussian_soliton(3));
    const Kernel k = Kernel::sub_heat(f);
    const auto t0 = Clock::now();
    for (double r : {0.3, 0.5, 0.8}) {
        const double j = jhat(k, r).value, i = ihat(k, 0.0, r).value;
        c.require(std::abs(j - 1.0) <= 1e-4, "jhat-1", j - 1.0);
        c.require(std::abs(i - 1.0) <= 1e-4, "ihat-1", i - 1.0);
        c.worst("jhat-1", j - 1.0);
        c.worst("ihat-1", i - 1.0);
    }
    const double s = seconds_since(t0);
    c.require(s <= 60.0, "seconds", s);
}

void c9_sphere_monotonicity(Criterion& c) {
    const auto f = std::make_shared<ReducedDistanceField>(FlowGeometry::shrinking_sphere(3));
    const Kernel k = Kernel::sub_heat(f);
    std::vector<double> grid;
    for (int i = 0; i < 6; ++i) grid.push_back(0.5 + 0.2 * i);
    const RicciSweep s = jhat_sweep(k, grid, 0.25, 1e-6, 4);
    c.require(s.jhat.monotone, "jhat-violation", s.jhat.worst_violation);
    c.require(s.chain, "jhat-above-ihat", 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double slack = s.jhat.errors[i] + s.ihat.errors[i] + 1e-6;
        c.require(s.jhat.values[i] <= s.ihat.values[i] + slack, "jhat-ihat", s.jhat.values[i] - s.ihat.values[i]);
    }
    std::vector<double> taus, th, er;
    for (int i = 0; i < 6; ++i) taus.push_back(0.05 + 0.05 * i);
    for (double t : taus) {
        const Estimate e = reduced_volume(*f, t);
        th.push_back(e.value);
        er.push_back(e.error);
    }
    const SweepReport rv = make_sweep_report("theta", taus, th, er, Direction::non_increasing, 1e-5);
    c.require(rv.monotone, "theta-violation", rv.worst_violation);
    c.worst("jhat-step", s.jhat.worst_violation);
}

void c10_soliton(Criterion& c) {
    std::vector<std::pair<double, double>> flat, sphere;
    for (double t : {0.25, 0.5, 1.0})
        for (double r : {0.0, 0.5, 1.0, 1.5}) flat.emplace_back(r, t);
    for (double t : {0.05, 0.1, 0.2})
        for (double r : {0.0, 0.4, 0.8, 1.2}) sphere.emplace_back(r, t);
    const SolitonCheck g = soliton_residuals(ReducedDistanceField(FlowGeometry::gaussian_soliton(3)), flat, 4);
    c.require(g.ell_evolution <= 1e-6, "ell-evolution", g.ell_evolution);
    c.require(g.ell_first_order <= 1e-6, "ell-first-order", g.ell_first_order);
    c.require(g.entropy <= 1e-6, "entropy", g.entropy);
    const SolitonCheck s = soliton_residuals(ReducedDistanceField(FlowGeometry::shrinking_sphere(3)), sphere, 4);
    c.require(s.ell_first_order <= 1e-4, "s3-ell-first-order", s.ell_first_order);
    c.worst("s3-ell-first-order", s.ell_first_order);
}

void c11_li_yau(Criterion& c) {
    std::vector<std::pair<double, double>> sphere;
    for (double t : {0.05, 0.1, 0.2})
        for (double r : {0.0, 0.4, 0.8, 1.2}) sphere.emplace_back(r, t);
    const double rcf = li_yau_ricci_residual(ReducedDistanceField(FlowGeometry::shrinking_sphere(3)), sphere, 4);
    c.require(rcf <= 1e-3, "li-yau-ricci", rcf);
    std::vector<std::vector<double>> dirs;
    for (int k = 0; k < 12; ++k) dirs.push_back({std::cos(0.5 * k), std::sin(0.5 * k)});
    const std::vector<double> taus{0.05, 0.3, 1.0, 3.0};
    double mcf = 0.0;
    for (const auto& x0 : {std::vector<double>{0.0, 0.0}, std::vector<double>{0.4, -0.1}})
        mcf = std::max(mcf, li_yau_mcf_residual(1, x0, dirs, taus));
    c.require(mcf <= 1e-8, "li-yau-mcf", mcf);
    c.worst("li-yau-ricci", rcf);
}

void c12_gaussian_density(Criterion& c) {
    const double theta1 = gaussian_density(1).value;
    const double oracle = std::sqrt(2.0 * std::numbers::pi / std::numbers::e);
    c.require(std::abs(theta1 - oracle) <= 1e-5, "theta-oracle", theta1 - oracle);
    for (double r : {0.5, 1.0, 2.0}) {
        const double j = jbar(1, r).value, i = ibar(1, 0.0, r).value;
        c.require(std::abs(j - theta1) <= 1e-4, "jbar-theta", j - theta1);
        c.require(std::abs(i - theta1) <= 1e-4, "ibar-theta", i - theta1);
        c.worst("ibar-theta", i - theta1);
    }
}

void c13_spacetime(Criterion& c) {
    const SpacetimeField X = [](std::span<const double> x) {
        std::vector<double> v(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) v[i] = std::exp(-0.3 * x[0]) * std::sin((i + 1) * x[1] + 0.2 * x.back());
        return v;
    };
    const std::vector<FlowGeometry> geoms{
        FlowGeometry::euclidean(1),        FlowGeometry::euclidean(2),       FlowGeometry::euclidean(3),
        FlowGeometry::gaussian_soliton(2), FlowGeometry::gaussian_soliton(3), FlowGeometry::hyperbolic(2),
        FlowGeometry::hyperbolic(3),       FlowGeometry::shrinking_sphere(2), FlowGeometry::shrinking_sphere(3)};
    for (const auto& g : geoms) {
        const int n = g.dimension();
        for (double rho : {0.25, 0.9})
            for (double t : {-0.3, 0.1}) {
                const SpaceTimePoint p{rho, t, std::vector<double>(n > 1 ? n - 1 : 0, 0.9)};
                const double conn = spacetime_christoffels(g, p).max_difference(spacetime_christoffels_fd(g, p, 1e-4));
                const double div =
                    std::abs(spacetime_divergence(g, X, p, 1e-4) - spacetime_divergence_fd(g, X, p, 1e-4));
                c.require(conn <= 1e-6, "conn[" + g.name() + "]", conn);
                c.require(div <= 1e-6, "div[" + g.name() + "]", div);
                c.worst("div", div);
            }
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, Body>> criteria{
        {"watson-heat-ball", c1_watson},
        {"green-flux-spherical-mean", c2_green_flux},
        {"derivative-formula", c3_derivative},
        {"sphere-ball-relation", c4_relation},
        {"comparison-inequalities-h3", c5_comparison},
        {"heat-sphere-h3", c6_heat_sphere_h3},
        {"flat-reduced-geometry", c7_flat_reduced},
        {"gaussian-soliton-equality", c8_gaussian_equality},
        {"shrinking-sphere-monotonicity", c9_sphere_monotonicity},
        {"soliton-identities", c10_soliton},
        {"li-yau-decompositions", c11_li_yau},
        {"mcf-gaussian-density", c12_gaussian_density},
        {"spacetime-identities", c13_spacetime},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Criterion c;
        std::string error;
        const auto t0 = Clock::now();
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const bool ok = error.empty() && c.pass();
        failed += ok ? 0 : 1;
        char head[96];
        std::snprintf(head, sizeof head, "%s %2zu %-32s %7.2fs  ", ok ? "PASS" : "FAIL", i + 1,
                      criteria[i].first.c_str(), seconds_since(t0));
        std::cout << head << (error.empty() ? c.detail() : "error: " + error) << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
