#include "mvlab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "mvlab/elliptic.hpp"
#include "mvlab/errors.hpp"
#include "mvlab/fields.hpp"
#include "mvlab/mcf.hpp"
#include "mvlab/parabolic.hpp"
#include "mvlab/reduced.hpp"
#include "mvlab/regions.hpp"

namespace mvlab {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_number(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Collects checks; tolerances are multiplied by the configured scale.
class Battery {
public:
    Battery(std::string prefix, double scale) : prefix_(std::move(prefix)), scale_(scale) {}

    void near(const std::string& name, double value, double expected, double tol, double err = 0.0) {
        const double t = tol * scale_;
        add({name, value, expected, t, std::abs(value - expected) <= t, err});
    }
    void at_most(const std::string& name, double value, double bound, double tol, double err = 0.0) {
        const double t = tol * scale_;
        add({name, value, "<= " + fmt(bound), t, value <= bound + t, err});
    }
    void at_least(const std::string& name, double value, double bound, double tol, double err = 0.0) {
        const double t = tol * scale_;
        add({name, value, ">= " + fmt(bound), t, value >= bound - t, err});
    }
    /// Wall-clock budgets are not scaled.
    void runtime(const std::string& name, double ms, double budget_ms) {
        add({name, ms, "<= " + fmt(budget_ms) + " ms", 0.0, ms <= budget_ms, 0.0});
    }
    void verdict(const std::string& name, const SweepReport& rep) {
        add({name, rep.worst_violation, to_string(rep.direction), rep.tol, rep.monotone, max_error(rep)});
    }
    void flag(const std::string& name, bool ok, double value, const std::string& expected, double tol) {
        add({name, value, expected, tol, ok, 0.0});
    }

    /// Runs a group; any library failure becomes one failed check.
    void run(const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            std::cerr << "mvlab: " << prefix_ << name << ": " << e.what() << '\n';
            add({name, kNaN, "no error", 0.0, false, kNaN});
        }
    }

    double scale() const { return scale_; }
    std::vector<Check> take() { return std::move(checks_); }

private:
    static double max_error(const SweepReport& rep) {
        double e = 0.0;
        for (double x : rep.errors) e = std::max(e, x);
        return e;
    }
    void add(Check c) {
        if (!std::isfinite(c.value)) c.pass = false;
        c.name = prefix_ + c.name;
        checks_.push_back(std::move(c));
    }

    std::string prefix_;
    double scale_;
    std::vector<Check> checks_;
};

std::vector<double> config_grid(const Config& c, double lo, double hi, int steps) {
    return linear_grid(c.rmin.value_or(lo), c.rmax.value_or(hi), c.steps.value_or(steps));
}

std::vector<double> tau_grid(const Config& c, double lo, double hi, int steps) {
    return linear_grid(c.taumin.value_or(lo), c.taumax.value_or(hi), c.steps.value_or(steps));
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// ---------------------------------------------------------------- elliptic

void elliptic_battery(Battery& b, const Config& cfg) {
    const FlowGeometry e3 = FlowGeometry::euclidean(3);
    const Kernel G = Kernel::green(e3);
    const TestField one = make_field("constant-1", e3);
    const TestField hq = make_field("harmonic-quadratic", e3);
    const TestField sup = make_field("superharmonic", e3);
    const TestField sub = make_field("subharmonic", e3);

    b.run("level-radius", [&] {
        b.near("level-radius[r=1]", level_radius(G, 1.0), 1.0 / (4.0 * std::numbers::pi), 1e-12);
        b.near("level-radius[r=2]", level_radius(G, 2.0), 2.0 / std::numbers::pi, 1e-12);
    });
    b.run("green-flux", [&] {
        for (double r : {0.5, 1.0, 2.0}) {
            const Estimate j = elliptic_J(G, one, r);
            b.near("green-flux[r=" + fmt(r) + "]", j.value, 1.0, 1e-8, j.error);
        }
    });
    b.run("harmonic-mean", [&] {
        std::vector<double> vals;
        for (double r : {0.5, 1.0, 1.5, 2.0}) vals.push_back(elliptic_J(G, hq, r).value);
        b.near("harmonic-quadratic-J", max_abs(vals), 0.0, 1e-7);
        for (double r : {0.5, 1.0}) {
            b.near("harmonic-quadratic-sphere-rhs[r=" + fmt(r) + "]",
                   mv_identity(G, hq, r, MeanValueForm::sphere).rhs, 0.0, 1e-7);
            b.near("harmonic-quadratic-ball-rhs[r=" + fmt(r) + "]",
                   mv_identity(G, hq, r, MeanValueForm::ball).rhs, 0.0, 1e-7);
        }
    });
    b.run("mean-value-identity", [&] {
        for (auto form : {MeanValueForm::sphere, MeanValueForm::ball}) {
            const MeanValueResult m = mv_identity(G, sup, 1.0, form);
            b.near(std::string("superharmonic-") + (form == MeanValueForm::sphere ? "sphere" : "ball") +
                       "-residual",
                   m.residual, 0.0, 1e-6, m.error);
        }
        for (const std::string& name : field_names()) {
            if (name == "power") continue;  // singular at the center
            const TestField v = make_field(name, e3);
            const Estimate s = elliptic_mean_value_rhs(G, v, 1.0, MeanValueForm::sphere);
            const Estimate l = elliptic_mean_value_rhs(G, v, 1.0, MeanValueForm::ball);
            b.near("sphere-ball-consistency[" + name + "]", s.value - l.value, 0.0,
                   1e-6 + s.error + l.error, s.error + l.error);
        }
    });
    b.run("derivative-formulas", [&] {
        const DerivativeCheck dj = elliptic_derivative_check(G, sup, 1.0, false, 1e-6);
        b.near("J-slope-fd[r=1]", dj.fd, -3.0 / (8.0 * std::numbers::pi * std::numbers::pi), 1e-4);
        b.near("J-slope-formula[r=1]", dj.fd - dj.predicted, 0.0, 1e-6);
        const DerivativeCheck di = elliptic_derivative_check(G, sup, 1.0, true, 1e-6);
        b.near("I-slope-formula[r=1]", di.fd - di.predicted, 0.0, 1e-6);
    });
    b.run("relation", [&] {
        for (const char* name : {"superharmonic", "gaussian-translate", "constant-1"})
            b.at_most(std::string("ball-sphere-relation[") + name + "]",
                      elliptic_relation_residual(G, make_field(name, e3), 1.0), 0.0, 1e-6);
    });
    b.run("coarea", [&] {
        const std::vector<std::pair<std::string, double>> fs{{"1", 1.0}, {"2n", 6.0}, {"0", 0.0}};
        for (const auto& [label, c] : fs) {
            const Estimate e = coarea_check(G, [c](double) { return c; }, 1.0);
            b.near("coarea[f=" + label + "]", e.value, 0.0, 1e-6, e.error);
        }
    });
    b.run("exact-green-sweeps", [&] {
        const std::vector<double> grid = config_grid(cfg, 0.5, 2.0, 6);
        const std::vector<std::pair<const TestField*, std::string>> cases{
            {&sup, "superharmonic"}, {&sub, "subharmonic"}, {&hq, "harmonic-quadratic"}};
        for (const auto& [v, label] : cases) {
            const EllipticSweep s = elliptic_sweep(G, *v, grid, 1e-6 * b.scale(), cfg.jobs);
            b.verdict("I-" + label, s.I);
            b.verdict("J-" + label, s.J);
        }
    });

    const FlowGeometry h3 = FlowGeometry::hyperbolic(3);
    const Kernel subG = Kernel::sub_green(h3, 1.0);
    const Kernel supG = Kernel::sup_green(h3);
    const TestField one_h = make_field("constant-1", h3);
    const TestField exp_h = make_field("exp-radial", h3);

    b.run("h3-deficits", [&] {
        for (auto form : {MeanValueForm::sphere, MeanValueForm::ball}) {
            const std::string f = form == MeanValueForm::sphere ? "sphere" : "ball";
            const Estimate eq = mv_inequality_deficit(subG, one_h, 1.0, form);
            b.near("sub-green-equality[" + f + "]", eq.value, 0.0, 1e-6, eq.error);
            for (double r : {0.5, 1.0}) {
                const Estimate d = mv_inequality_deficit(subG, exp_h, r, form);
                b.at_least("sub-green-exp-radial[" + f + ",r=" + fmt(r) + "]", d.value, 0.0, 1e-7, d.error);
            }
            const Estimate s1 = mv_inequality_deficit(supG, one_h, 1.0, form);
            b.at_least("sup-green-constant[" + f + "]", s1.value, 0.0, 1e-7, s1.error);
            const Estimate s2 = mv_inequality_deficit(supG, exp_h, 1.0, form);
            b.at_least("sup-green-exp-radial[" + f + "]", s2.value, 0.0, 1e-7, s2.error);
        }
        // Global comparison on R^3 with k = 0.
        const Kernel flat_sub = Kernel::sub_green(e3, 0.0);
        const Estimate sy = mv_inequality_deficit(flat_sub, make_field("exp-radial", e3), 1.0,
                                                  MeanValueForm::sphere);
        b.at_least("flat-sub-green", sy.value, 0.0, 1e-7, sy.error);
    });
    b.run("h3-sweeps", [&] {
        const std::vector<double> grid = config_grid(cfg, 0.5, 2.0, 6);
        const double tol = 1e-6 * b.scale();
        for (const auto* v : {&one_h, &exp_h}) {
            const EllipticSweep s = elliptic_sweep(subG, *v, grid, tol, cfg.jobs);
            b.verdict("sub-green-I-" + v->name(), s.I);
            b.verdict("sub-green-J-" + v->name(), s.J);
            double worst = -std::numeric_limits<double>::infinity();
            bool ok = true;
            for (const auto& c : s.dI) {
                worst = std::max(worst, c.fd - c.predicted);
                ok = ok && c.ok;
            }
            b.flag("sub-green-dI-" + v->name(), ok && worst <= tol, worst, "<= 0", tol);
        }
        // Derivative inequality for the sup-Green kernel: dJ/dr >= (n/r^{n+1}) int Lap v.
        const EllipticSweep s = elliptic_sweep(supG, one_h, grid, tol, cfg.jobs);
        double worst = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (const auto& c : s.dJ) {
            worst = std::min(worst, c.fd - c.predicted);
            ok = ok && c.ok;
        }
        for (const auto& c : s.dI) ok = ok && c.ok;
        b.flag("sup-green-derivative-sign", ok, worst, ">= 0", tol);
        b.verdict("sup-green-J-rising",
                  make_sweep_report("J", s.J.grid, s.J.values, s.J.errors, Direction::non_decreasing, tol));
    });
}

// ---------------------------------------------------------------- parabolic

void spacetime_battery(Battery& b) {
    std::vector<FlowGeometry> geoms{FlowGeometry::euclidean(1),      FlowGeometry::euclidean(2),
                                    FlowGeometry::euclidean(3),      FlowGeometry::gaussian_soliton(3),
                                    FlowGeometry::hyperbolic(2),     FlowGeometry::hyperbolic(3),
                                    FlowGeometry::shrinking_sphere(2), FlowGeometry::shrinking_sphere(3)};
    for (const FlowGeometry& g : geoms) {
        b.run("spacetime[" + g.name() + "]", [&] {
            const int n = g.dimension();
            std::vector<SpaceTimePoint> pts;
            for (double t : g.is_static() ? std::vector<double>{0.0} : std::vector<double>{-0.2, 0.05})
                for (double rho : {0.3, 0.7}) pts.push_back({rho, t, std::vector<double>(n > 1 ? n - 1 : 0, 1.1)});
            // A smooth test field in coordinates (t, u, theta...).
            const SpacetimeField X = [](std::span<const double> x) {
                std::vector<double> v(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    v[i] = std::sin(0.7 * x[0] + (i + 1) * x[1]) + 0.3 * std::cos(x[x.size() - 1] + i);
                return v;
            };
            double conn = 0.0, div = 0.0;
            for (const auto& p : pts) {
                conn = std::max(conn, spacetime_christoffels(g, p).max_difference(spacetime_christoffels_fd(g, p)));
                div = std::max(div, std::abs(spacetime_divergence(g, X, p) - spacetime_divergence_fd(g, X, p)));
            }
            b.at_most("christoffel[" + g.name() + "]", conn, 0.0, 1e-6);
            b.at_most("divergence[" + g.name() + "]", div, 0.0, 1e-6);
            if (!g.is_static()) b.at_most("flow-equation[" + g.name() + "]", flow_residual(g, pts), 0.0, 1e-6);
        });
    }
}

void parabolic_battery(Battery& b, const Config& cfg) {
    const FlowGeometry e2 = FlowGeometry::euclidean(2);
    const FlowGeometry e3 = FlowGeometry::euclidean(3);
    const Kernel H2 = Kernel::heat(e2);
    const Kernel H3e = Kernel::heat(e3);
    const TestField cal = make_field("caloric-quadratic", e2);
    const TestField one2 = make_field("constant-1", e2);

    b.run("heat-ball-region", [&] {
        const LevelRegion reg = heatball_profile(H2, 1.0);
        b.near("heat-ball-top[n=2,r=1]", reg.tau_max(), 1.0 / (4.0 * std::numbers::pi), 1e-12);
        b.near("heat-ball-profile[n=2,r=1]", reg.profile(1.0 / (8.0 * std::numbers::pi)),
               std::sqrt(std::log(2.0) / (2.0 * std::numbers::pi)), 1e-10);
        const Estimate w = ball_integrate(reg, [](double rho, double tau) { return rho * rho / (4.0 * tau * tau); });
        b.near("watson-weight[n=2,r=1]", w.value, 1.0, 1e-6, w.error);
    });
    b.run("watson", [&] {
        for (double r : {0.5, 1.0}) {
            const auto t0 = Clock::now();
            const MeanValueResult m = mv_heat_ball(H2, cal, r);
            const double ms = elapsed_ms(t0);
            b.near("watson[r=" + fmt(r) + "]", m.residual, 0.0, 1e-5, m.error);
            if (cfg.timing) b.runtime("watson-runtime[r=" + fmt(r) + "]", ms, 5000.0);
        }
    });
    b.run("heat-sphere", [&] {
        const MeanValueResult s1 = mv_heat_sphere(H2, one2, 1.0);
        b.near("heat-sphere-constant[n=2]", s1.residual, 0.0, 1e-5, s1.error);
        const MeanValueResult s2 = mv_heat_sphere(H2, cal, 1.0);
        b.near("heat-sphere-caloric[n=2]", s2.rhs, 0.0, 1e-5, s2.error);
        const MeanValueResult s3 = mv_heat_ball(H3e, make_field("constant-1", e3), 1.0);
        b.near("heat-ball-constant[n=3]", s3.residual, 0.0, 1e-5, s3.error);
        b.near("heat-ball-sphere-chain[n=2]", heat_chain_residual(H2, cal, 1.0), 0.0, 1e-5);
        const TestField gt = make_field("gaussian-translate", e2);
        const MeanValueResult s4 = mv_heat_sphere(H2, gt, 0.5);
        b.near("heat-sphere-gaussian-translate[n=2]", s4.residual, 0.0, 1e-5, s4.error);
    });
    b.run("heat-sphere-h3", [&] {
        const FlowGeometry h3 = FlowGeometry::hyperbolic(3);
        const Kernel Hh = Kernel::heat(h3);
        for (const char* name : {"constant-1", "exp-radial"}) {
            const TestField v = make_field(name, h3);
            const MeanValueResult s = mv_heat_sphere(Hh, v, 1.0);
            b.near(std::string("heat-sphere-h3[") + name + "]", s.residual, 0.0, 1e-4, s.error);
            const MeanValueResult l = mv_heat_ball(Hh, v, 1.0);
            b.near(std::string("heat-ball-h3[") + name + "]", l.residual, 0.0, 1e-4, l.error);
        }
    });
    b.run("surface-forms", [&] {
        const SurfaceFormResiduals s = surface_form_residual(H2, 1.0);
        b.at_most("surface-form-J[n=2]", s.j, 0.0, 1e-6, s.j_error);
        b.at_most("surface-form-I[n=2]", s.i, 0.0, 1e-6, s.i_error);
    });
    b.run("cap-limit", [&] {
        std::vector<double> gaps;
        std::vector<double> ss{1e-2, 1e-3, 1e-4};
        for (double s : ss) gaps.push_back(std::abs(cap_integral(H2, one2, 1.0, s).value - 1.0));
        std::reverse(gaps.begin(), gaps.end());
        std::vector<double> grid{1e-4, 1e-3, 1e-2};
        b.verdict("cap-limit",
                  make_sweep_report("cap", grid, gaps, {0.0, 0.0, 0.0}, Direction::non_decreasing, 0.0));
    });
    b.run("forward-monotonicity", [&] {
        const std::vector<double> grid = config_grid(cfg, 0.5, 1.5, 5);
        const TestField one3 = make_field("constant-1", e3);
        std::vector<double> J, Je, I, Ie;
        for (double r : grid) {
            const Estimate j = parabolic_J(H3e, one3, r), i = parabolic_I(H3e, one3, r);
            J.push_back(j.value);
            Je.push_back(j.error);
            I.push_back(i.value);
            Ie.push_back(i.error);
        }
        const double tol = 1e-6 * b.scale();
        b.verdict("forward-J", make_sweep_report("J", grid, J, Je, Direction::non_increasing, tol));
        b.verdict("forward-I", make_sweep_report("I", grid, I, Ie, Direction::non_increasing, tol));
    });
    spacetime_battery(b);
}

// ---------------------------------------------------------------- ricci

std::vector<std::pair<double, double>> sample_grid(std::initializer_list<double> rhos,
                                                   std::initializer_list<double> taus) {
    std::vector<std::pair<double, double>> out;
    for (double t : taus)
        for (double r : rhos) out.emplace_back(r, t);
    return out;
}

void ricci_gaussian(Battery& b, const Config& cfg, int n) {
    const auto field = std::make_shared<ReducedDistanceField>(FlowGeometry::gaussian_soliton(n));
    const Kernel K = Kernel::sub_heat(field);
    b.run("gaussian-equality", [&] {
        const auto t0 = Clock::now();
        for (double r : {0.3, 0.5, 0.8}) {
            const Estimate j = jhat(K, r);
            b.near("gaussian-jhat[r=" + fmt(r) + "]", j.value, 1.0, 1e-4, j.error);
            const Estimate i = ihat(K, 0.0, r);
            b.near("gaussian-ihat[r=" + fmt(r) + "]", i.value, 1.0, 1e-4, i.error);
        }
        if (cfg.timing) b.runtime("gaussian-equality-runtime", elapsed_ms(t0), 60000.0);
        for (double a : {0.1, 0.3, 0.5}) {
            const Estimate i = ihat(K, a, 0.8);
            b.near("gaussian-ihat[a=" + fmt(a) + ",r=0.8]", i.value, 1.0, 1e-4, i.error);
        }
    });
    b.run("gaussian-surface-forms", [&] {
        const SurfaceFormResiduals s = surface_form_residual(K, 0.5);
        b.at_most("gaussian-surface-form-J", s.j, 0.0, 1e-5, s.j_error);
        b.at_most("gaussian-surface-form-I", s.i, 0.0, 1e-5, s.i_error);
    });
    b.run("gaussian-soliton-identities", [&] {
        const auto samples = sample_grid({0.0, 0.5, 1.0, 1.5, 2.0}, {0.25, 0.5, 1.0});
        const SolitonCheck s = soliton_residuals(*field, samples, cfg.jobs);
        b.at_most("gaussian-ell-evolution", s.ell_evolution, 0.0, 1e-6);
        b.at_most("gaussian-ell-first-order", s.ell_first_order, 0.0, 1e-6);
        b.at_most("gaussian-entropy", s.entropy, 0.0, 1e-6);
        b.at_most("gaussian-soliton-equation", s.soliton, 0.0, 1e-6);
        const auto ly = sample_grid({0.0, 0.5, 1.0}, {0.25, 0.5, 1.0});
        b.at_most("gaussian-li-yau-ricci", li_yau_ricci_residual(*field, ly, cfg.jobs), 0.0, 1e-8);
    });
}

void ricci_sphere(Battery& b, const Config& cfg, int n) {
    const auto field = std::make_shared<ReducedDistanceField>(FlowGeometry::shrinking_sphere(n));
    const Kernel K = Kernel::sub_heat(field);
    const double tol = 1e-6 * b.scale();
    const std::string tag = "s" + std::to_string(n);
    b.run(tag + "-monotonicity", [&] {
        const std::vector<double> grid = config_grid(cfg, 0.5, 1.5, 6);
        const double a = cfg.a > 0.0 ? cfg.a : 0.25;
        const RicciSweep s = jhat_sweep(K, grid, a, tol, cfg.jobs);
        b.verdict(tag + "-jhat-non-increasing", s.jhat);
        b.verdict(tag + "-ihat-non-increasing[a=" + fmt(a) + "]", s.ihat);
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, s.jhat.values[i] - s.ihat.values[i]);
        b.flag(tag + "-jhat-below-ihat[a=" + fmt(a) + "]", s.chain, worst, "<= 0", tol);
    });
    b.run(tag + "-jhat-slope", [&] {
        const double r = 1.0, h = 0.05;
        const double fd = (jhat(K, r + h).value - jhat(K, r - h).value) / (2.0 * h);
        b.at_most(tag + "-jhat-slope[r=1]", fd, 0.0, 1e-6);
    });
    b.run(tag + "-relation", [&] {
        b.at_most(tag + "-ihat-jhat-relation[r=1]", jhat_relation_residual(K, 1.0), 0.0, 1e-4);
    });
    b.run(tag + "-surface-forms", [&] {
        const SurfaceFormResiduals s = surface_form_residual(K, 1.0);
        b.at_most(tag + "-surface-form-J", s.j, 0.0, 1e-4, s.j_error);
        b.at_most(tag + "-surface-form-I", s.i, 0.0, 1e-4, s.i_error);
    });
    b.run(tag + "-ell-identities", [&] {
        const auto samples = sample_grid({0.0, 0.4, 0.8, 1.2}, {0.05, 0.1, 0.2});
        const SolitonCheck s = soliton_residuals(*field, samples, cfg.jobs);
        b.at_most(tag + "-ell-first-order", s.ell_first_order, 0.0, 1e-4);
        b.at_least(tag + "-ell-evolution-sign", s.ell_evolution_min, 0.0, 1e-4);
        b.at_most(tag + "-li-yau-ricci", li_yau_ricci_residual(*field, samples, cfg.jobs), 0.0, 1e-3);
    });
}

/// Gaussian soliton, shrinking sphere, or both when no geometry is configured.
std::pair<bool, bool> ricci_models(const Config& cfg) {
    if (cfg.geometry.empty()) return {true, true};
    const FlowGeometry g = parse_geometry(cfg.geometry, cfg.dimension);
    if (g.kind() == GeometryKind::gaussian_soliton) return {true, false};
    if (g.kind() == GeometryKind::shrinking_sphere) return {false, true};
    throw UsageError("the ricci suite runs on gaussian or shrinking-s<n>, not " + cfg.geometry);
}

int ricci_dimension(const Config& cfg) {
    if (cfg.geometry.empty()) return cfg.dimension.value_or(3);
    return parse_geometry(cfg.geometry, cfg.dimension).dimension();
}

void ricci_battery(Battery& b, const Config& cfg) {
    const auto [gauss, sphere] = ricci_models(cfg);
    const int n = ricci_dimension(cfg);
    if (gauss) ricci_gaussian(b, cfg, n);
    if (sphere) ricci_sphere(b, cfg, n);
}

// ---------------------------------------------------------------- reduced

void reduced_battery(Battery& b, const Config& cfg) {
    const int n = cfg.dimension.value_or(3);
    const ReducedDistanceField flat(FlowGeometry::gaussian_soliton(n));
    b.run("flat-ell", [&] {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const double rho = 0.1 + 0.2 * i, tau = 0.1 + 0.1 * j;
                worst = std::max(worst, std::abs(flat.ell(rho, tau) - rho * rho / (4.0 * tau)));
            }
        b.at_most("flat-ell-oracle", worst, 0.0, 1e-8);
    });
    b.run("flat-volume", [&] {
        for (double tau : {0.1, 0.5, 1.0}) {
            const Estimate th = reduced_volume(flat, tau);
            b.near("flat-reduced-volume[tau=" + fmt(tau) + "]", th.value, 1.0, 1e-6, th.error);
        }
    });
    b.run("flat-first-variation", [&] {
        double g = 0.0, t = 0.0;
        for (const auto& [rho, tau] : sample_grid({0.3, 1.0, 1.7}, {0.2, 0.6, 1.0})) {
            const GaussResiduals r = gauss_identity_residuals(flat, rho, tau);
            g = std::max(g, r.gradient);
            t = std::max(t, r.time);
        }
        b.at_most("flat-gauss-gradient", g, 0.0, 1e-6);
        b.at_most("flat-gauss-time", t, 0.0, 1e-6);
    });

    const int ns = std::max(n, 2);
    const ReducedDistanceField sphere(FlowGeometry::shrinking_sphere(ns));
    const std::string tag = "s" + std::to_string(ns);
    b.run(tag + "-ell", [&] {
        double worst = 0.0;
        for (const auto& [rho, tau] : sample_grid({0.1, 0.5, 1.0, 1.5}, {0.05, 0.1, 0.2}))
            worst = std::max(worst, std::abs(sphere.ell(rho, tau) - sphere_reduced_distance(ns, rho, tau)));
        b.at_most(tag + "-ell-closed-form", worst, 0.0, 1e-6);
    });
    b.run(tag + "-first-variation", [&] {
        double g = 0.0, t = 0.0;
        for (const auto& [rho, tau] : sample_grid({0.3, 0.9}, {0.05, 0.15})) {
            const GaussResiduals r = gauss_identity_residuals(sphere, rho, tau);
            g = std::max(g, r.gradient);
            t = std::max(t, r.time);
        }
        b.at_most(tag + "-gauss-gradient", g, 0.0, 1e-5);
        b.at_most(tag + "-gauss-time", t, 0.0, 1e-5);
    });
    b.run(tag + "-volume", [&] {
        const std::vector<double> taus = tau_grid(cfg, 0.05, 0.3, 6);
        std::vector<double> v, e;
        for (double tau : taus) {
            const Estimate th = reduced_volume(sphere, tau);
            v.push_back(th.value);
            e.push_back(th.error);
        }
        b.verdict(tag + "-reduced-volume-non-increasing",
                  make_sweep_report("theta", taus, v, e, Direction::non_increasing, 1e-5 * b.scale()));
    });
}

// ---------------------------------------------------------------- mcf

double theta_closed_form(int n) {
    return unit_sphere_area(n) * std::pow(2.0 * n / (4.0 * std::numbers::pi * std::numbers::e), 0.5 * n);
}

void mcf_battery(Battery& b, const Config& cfg) {
    b.run("gaussian-density", [&] {
        const Estimate t1 = gaussian_density(1);
        b.near("theta[n=1]", t1.value, std::sqrt(2.0 * std::numbers::pi / std::numbers::e), 1e-5, t1.error);
        const Estimate t2 = gaussian_density(2);
        b.near("theta[n=2]", t2.value, theta_closed_form(2), 1e-5, t2.error);
        const Estimate t3 = gaussian_density(1, 0.5);
        b.near("theta-self-similar[n=1,tau=0.5]", t3.value, t1.value, 1e-8, t3.error);
    });
    b.run("shrinker-equality", [&] {
        for (int n : {1, 2}) {
            const double th = theta_closed_form(n);
            for (double r : {0.5, 1.0, 2.0}) {
                const std::string at = "[n=" + std::to_string(n) + ",r=" + fmt(r) + "]";
                const Estimate j = jbar(n, r);
                b.near("jbar" + at, j.value, th, 1e-4, j.error);
                const Estimate i = ibar(n, 0.0, r);
                b.near("ibar" + at, i.value, th, 1e-4, i.error);
            }
        }
    });
    b.run("mcf-monotonicity", [&] {
        const McfSweep s = mcf_sweep(1, config_grid(cfg, 0.5, 2.0, 6), 0.25, 1e-6 * b.scale(), cfg.jobs);
        b.verdict("jbar-non-decreasing", s.jbar);
        b.verdict("ibar-non-decreasing[a=0.25]", s.ibar);
    });
    b.run("mcf-relation", [&] {
        const int n = 2;
        const double r = 1.0;
        const double lhs = std::pow(r, n) * ibar(n, 0.0, r).value;
        const Estimate rhs = integrate([&](double eta) { return n * std::pow(eta, n - 1) * jbar(n, eta).value; },
                                       0.0, r, {1e-12, 1e-10, 200});
        b.at_most("ibar-jbar-relation[n=2]", std::abs(lhs - rhs.value) / std::abs(lhs), 0.0, 1e-4, rhs.error);
    });
    b.run("li-yau-mcf", [&] {
        const std::vector<double> taus{0.1, 0.5, 2.0};
        const std::vector<double> x0c{0.0, 0.0}, x0o{0.3, -0.2};
        std::vector<std::vector<double>> dirs;
        for (int k = 0; k < 8; ++k) dirs.push_back({std::cos(0.8 * k), std::sin(0.8 * k)});
        b.at_most("li-yau-mcf[n=1]", li_yau_mcf_residual(1, x0c, dirs, taus), 0.0, 1e-8);
        b.at_most("li-yau-mcf-offset[n=1]", li_yau_mcf_residual(1, x0o, dirs, taus), 0.0, 1e-8);
        const std::vector<double> x0s{0.1, 0.2, -0.3};
        const std::vector<std::vector<double>> d3{{1, 0, 0}, {0, 0.6, 0.8}, {-0.48, 0.6, 0.64}};
        b.at_most("li-yau-mcf[n=2]", li_yau_mcf_residual(2, x0s, d3, taus), 0.0, 1e-8);
    });
}

using BatteryFn = void (*)(Battery&, const Config&);

const std::vector<std::pair<std::string, BatteryFn>>& batteries() {
    static const std::vector<std::pair<std::string, BatteryFn>> all{{"elliptic", elliptic_battery},
                                                                    {"parabolic", parabolic_battery},
                                                                    {"ricci", ricci_battery},
                                                                    {"mcf", mcf_battery},
                                                                    {"reduced", reduced_battery}};
    return all;
}

}  // namespace

// ---------------------------------------------------------------- reports

std::string to_json(const SuiteReport& report, int indent) {
    json checks = json::array();
    for (const Check& c : report.checks) {
        json e = std::holds_alternative<double>(c.expected) ? number(std::get<double>(c.expected))
                                                             : json(std::get<std::string>(c.expected));
        checks.push_back({{"name", c.name},
                          {"value", number(c.value)},
                          {"expected", e},
                          {"tol", number(c.tol)},
                          {"pass", c.pass},
                          {"err", number(c.err)}});
    }
    json j = {{"suite", report.suite}, {"checks", checks}, {"wall_ms", number(report.wall_ms)}, {"pass", report.pass}};
    return j.dump(indent) + "\n";
}

SuiteReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
        SuiteReport r;
        r.suite = j.at("suite").get<std::string>();
        r.wall_ms = read_number(j.at("wall_ms"));
        r.pass = j.at("pass").get<bool>();
        for (const json& c : j.at("checks")) {
            Check k;
            k.name = c.at("name").get<std::string>();
            k.value = read_number(c.at("value"));
            const json& e = c.at("expected");
            if (e.is_string())
                k.expected = e.get<std::string>();
            else
                k.expected = read_number(e);
            k.tol = read_number(c.at("tol"));
            k.pass = c.at("pass").get<bool>();
            k.err = read_number(c.at("err"));
            r.checks.push_back(std::move(k));
        }
        return r;
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed report: ") + e.what());
    }
}

std::string checks_csv(const SuiteReport& report) {
    std::ostringstream os;
    os << "name,value,expected,tol,pass,err\n";
    for (const Check& c : report.checks) {
        const std::string e = std::holds_alternative<double>(c.expected) ? fmt17(std::get<double>(c.expected))
                                                                          : std::get<std::string>(c.expected);
        os << c.name << ',' << fmt17(c.value) << ',' << e << ',' << fmt17(c.tol) << ','
           << (c.pass ? "true" : "false") << ',' << fmt17(c.err) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------- config

std::vector<std::string> config_keys() {
    return {"suite", "geometry", "dimension", "field", "quantity", "kernel", "rmin", "rmax", "steps",
            "taumin", "taumax", "a", "tol-scale", "out", "format", "jobs", "timing"};
}

namespace {

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos == v.size() && std::isfinite(x)) return x;
    } catch (const std::exception&) {
    }
    throw UsageError("invalid number for " + key + ": '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw UsageError("invalid integer for " + key + ": '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("invalid boolean for " + key + ": '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

void apply_setting(Config& c, const std::string& raw_key, const std::string& value) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "suite") c.suite = value;
    else if (key == "geometry") c.geometry = value;
    else if (key == "dimension") {
        c.dimension = to_int(key, value);
        if (*c.dimension < 1) throw UsageError("dimension must be >= 1");
    } else if (key == "field") c.field = value;
    else if (key == "quantity") c.quantity = value;
    else if (key == "kernel") c.kernel = value;
    else if (key == "rmin") c.rmin = to_double(key, value);
    else if (key == "rmax") c.rmax = to_double(key, value);
    else if (key == "steps") {
        c.steps = to_int(key, value);
        if (*c.steps < 1) throw UsageError("steps must be >= 1");
    } else if (key == "taumin") c.taumin = to_double(key, value);
    else if (key == "taumax") c.taumax = to_double(key, value);
    else if (key == "a") {
        c.a = to_double(key, value);
        if (c.a < 0.0) throw UsageError("a must be >= 0");
    } else if (key == "tol-scale") {
        c.tol_scale = to_double(key, value);
        if (!(c.tol_scale > 0.0)) throw UsageError("tol-scale must be positive");
    } else if (key == "out") c.out = value;
    else if (key == "format") {
        if (value != "csv" && value != "json") throw UsageError("format must be csv or json");
        c.format = value;
    } else if (key == "jobs") {
        c.jobs = to_int(key, value);
        if (c.jobs < 1) throw UsageError("jobs must be >= 1");
    } else if (key == "timing") c.timing = to_bool(key, value);
    else throw UsageError("unknown configuration key '" + raw_key + "'");
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------- suites

std::vector<std::string> suite_names() { return {"elliptic", "parabolic", "ricci", "mcf", "reduced", "all"}; }

SuiteReport run_suite(const std::string& suite, const Config& config) {
    const auto& bats = batteries();
    const bool all = suite == "all";
    if (!all && std::none_of(bats.begin(), bats.end(), [&](const auto& p) { return p.first == suite; }))
        throw UsageError("unknown suite '" + suite + "'");
    if (suite == "ricci" || all) ricci_models(config);  // validate before running anything

    const auto t0 = Clock::now();
    SuiteReport rep;
    rep.suite = suite;
    for (const auto& [name, fn] : bats) {
        if (!all && name != suite) continue;
        Battery b(all ? name + "." : "", config.tol_scale);
        fn(b, config);
        for (Check& c : b.take()) rep.checks.push_back(std::move(c));
    }
    rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.pass; });
    rep.wall_ms = config.timing ? elapsed_ms(t0) : 0.0;
    return rep;
}

// ---------------------------------------------------------------- sweeps

FlowGeometry parse_geometry(const std::string& name, std::optional<int> dimension) {
    static const std::regex re(R"(^(euclidean|hyperbolic|gaussian|gaussian-soliton|shrinking-s|shrinking-sphere)(\d*)$)");
    std::smatch m;
    if (!std::regex_match(name, m, re)) throw UsageError("unknown geometry '" + name + "'");
    const std::string kind = m[1];
    int n = dimension.value_or(3);
    if (m[2].length() > 0) {
        const int suffix = std::stoi(m[2]);
        if (dimension && *dimension != suffix)
            throw UsageError("geometry " + name + " conflicts with dimension " + std::to_string(*dimension));
        n = suffix;
    }
    try {
        if (kind == "euclidean") return FlowGeometry::euclidean(n);
        if (kind == "hyperbolic") return FlowGeometry::hyperbolic(n);
        if (kind == "gaussian" || kind == "gaussian-soliton") return FlowGeometry::gaussian_soliton(n);
        return FlowGeometry::shrinking_sphere(n);
    } catch (const RangeError& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::string> sweep_quantities() { return {"I", "J", "ihat", "jhat", "ibar", "jbar", "theta"}; }

namespace {

Kernel elliptic_kernel(const Config& c, const FlowGeometry& g) {
    const std::string k = c.kernel.empty() ? "green" : c.kernel;
    if (k == "green") return Kernel::green(g);
    if (k == "sub-green") return Kernel::sub_green(g, g.kind() == GeometryKind::hyperbolic ? g.curvature_parameter() : 0.0);
    if (k == "sup-green") return Kernel::sup_green(g);
    throw UsageError("kernel for I/J must be green, sub-green or sup-green");
}

Kernel parabolic_kernel(const Config& c, const FlowGeometry& g) {
    const bool ricci = g.kind() == GeometryKind::gaussian_soliton || g.kind() == GeometryKind::shrinking_sphere;
    const std::string k = c.kernel.empty() ? (ricci ? "sub-heat" : "heat") : c.kernel;
    if (k == "heat") return Kernel::heat(g);
    if (k == "sub-heat") return Kernel::sub_heat(std::make_shared<ReducedDistanceField>(g));
    throw UsageError("kernel for ihat/jhat must be heat or sub-heat");
}

SweepReport sweep_impl(const Config& c) {
    const std::string& q = c.quantity;
    const double tol = 1e-6 * c.tol_scale;
    if (q == "I" || q == "J") {
        const FlowGeometry g = parse_geometry(c.geometry.empty() ? "euclidean" : c.geometry, c.dimension);
        const Kernel K = elliptic_kernel(c, g);
        const TestField v = make_field(c.field, g);
        EllipticSweep s = elliptic_sweep(K, v, config_grid(c, 0.5, 1.5, 6), tol, c.jobs);
        return q == "I" ? s.I : s.J;
    }
    if (q == "jhat" || q == "ihat") {
        const FlowGeometry g = parse_geometry(c.geometry.empty() ? "gaussian" : c.geometry, c.dimension);
        const Kernel K = parabolic_kernel(c, g);
        const std::vector<double> grid = config_grid(c, 0.3, 0.8, 6);
        if (q == "ihat" && !(c.a < grid.front())) throw UsageError("a must be below rmin");
        RicciSweep s = jhat_sweep(K, grid, std::min(c.a, 0.5 * grid.front()) * (q == "ihat"), tol, c.jobs);
        return q == "jhat" ? s.jhat : s.ihat;
    }
    if (q == "jbar" || q == "ibar") {
        const int n = c.dimension.value_or(1);
        const std::vector<double> grid = config_grid(c, 0.5, 2.0, 6);
        if (q == "ibar" && !(c.a < grid.front())) throw UsageError("a must be below rmin");
        McfSweep s = mcf_sweep(n, grid, q == "ibar" ? c.a : 0.0, tol, c.jobs);
        return q == "jbar" ? s.jbar : s.ibar;
    }
    if (q == "theta") {
        const FlowGeometry g = parse_geometry(c.geometry.empty() ? "shrinking-s" : c.geometry, c.dimension);
        const ReducedDistanceField f(g);
        const std::vector<double> taus = tau_grid(c, 0.05, 0.3, 6);
        std::vector<Estimate> th(taus.size());
        parallel_for(taus.size(), c.jobs, [&](std::size_t i) { th[i] = reduced_volume(f, taus[i]); });
        std::vector<double> v, e;
        for (const Estimate& x : th) {
            v.push_back(x.value);
            e.push_back(x.error);
        }
        return make_sweep_report("theta", taus, v, e, Direction::non_increasing, 1e-5 * c.tol_scale);
    }
    throw UsageError("unknown quantity '" + q + "'");
}

}  // namespace

SweepReport run_sweep(const Config& config) {
    try {
        return sweep_impl(config);
    } catch (const UnsupportedError& e) {
        throw UsageError(e.what());
    }
}

std::string sweep_csv(const SweepReport& r) {
    std::ostringstream os;
    os << "parameter,value,error_estimate,monotone_ok\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        os << fmt17(r.grid[i]) << ',' << fmt17(r.values[i]) << ',' << fmt17(r.errors[i]) << ','
           << (r.row_ok(i) ? "true" : "false") << '\n';
    return os.str();
}

std::string sweep_json(const SweepReport& r, int indent) {
    json rows = json::array();
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        rows.push_back({{"parameter", number(r.grid[i])},
                        {"value", number(r.values[i])},
                        {"error_estimate", number(r.errors[i])},
                        {"monotone_ok", r.row_ok(i)}});
    json j = {{"quantity", r.quantity},  {"direction", to_string(r.direction)}, {"tol", number(r.tol)},
              {"monotone", r.monotone}, {"worst_violation", number(r.worst_violation)}, {"rows", rows}};
    return j.dump(indent) + "\n";
}

double sphere_reduced_distance(int n, double rho, double tau) {
    if (n < 2) throw RangeError("sphere dimension must be >= 2");
    if (!(tau > 0.0)) throw RangeError("tau must be positive");
    const double alpha = 0.5 * (n - 1);
    const double sigma = 2.0 * std::sqrt(tau);
    const double s = rho / std::sqrt(1.0 + 2.0 * (n - 1) * tau);
    const double F = std::atan(std::sqrt(alpha) * sigma) / std::sqrt(alpha);
    const double P = 0.5 * n * (sigma - F);
    return (s * s / F + P) / (2.0 * std::sqrt(tau));
}

}  // namespace mvlab
