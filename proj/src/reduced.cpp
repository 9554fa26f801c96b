#include "mvlab/reduced.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "mvlab/errors.hpp"

namespace mvlab {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 4>;  // u, du/dsigma, L-length, K-integral

constexpr double kOdeAbsTol = 1e-12;
constexpr double kOdeRelTol = 1e-10;
constexpr double kBlowUp = 1e8;
constexpr double kMemoResolution = 1e-9;
constexpr std::size_t kMemoCap = 2'000'000;
constexpr double kCutLocusGap = 1e-6;

void require_ricci_flow(const FlowGeometry& flow) {
    if (flow.kind() == GeometryKind::hyperbolic)
        throw UnsupportedError("reduced geometry needs a Ricci flow model");
}

// Coefficients of the sigma-form equation at parameter sigma.
struct Coefficients {
    double g;        // g_uu
    double dg;       // d g_uu / d sigma
    double R;
    double R_tau;    // dR / dtau
    double ric_rad;  // Upsilon radial eigenvalue
};

Coefficients coefficients(const FlowGeometry& flow, double sigma) {
    const double t = -0.25 * sigma * sigma;
    const double a = flow.radial_scale(t);
    const double a_t = flow.radial_scale_dt(t);
    const double R = flow.evolution_trace(t);
    const double ric = flow.is_static() ? 0.0 : (flow.dimension() - 1) * flow.sectional_curvature(t);
    return {a * a, -sigma * a * a_t, R, -flow.evolution_trace_dt(t), ric};
}

}  // namespace

double LGeodesic::terminal_velocity(const FlowGeometry& flow) const {
    if (!(sigma_end > 0.0)) return v;
    const double a = flow.radial_scale(-tau_end);
    return a * du_end * 2.0 / sigma_end;
}

Estimate l_length(const FlowGeometry& flow, const RadialPath& path, double sigma_bar) {
    require_ricci_flow(flow);
    if (!(sigma_bar > 0.0)) throw RangeError("sigma_bar must be positive");
    auto integrand = [&](double sigma) {
        const PathPoint p = path(sigma);
        const double t = -0.25 * sigma * sigma;
        const double a = flow.radial_scale(t);
        if (!(std::abs(a * p.u) < flow.rho_max(t))) throw RangeError("path leaves the domain");
        return a * a * p.du * p.du + 0.25 * sigma * sigma * flow.evolution_trace(t);
    };
    return integrate(integrand, 0.0, sigma_bar, {1e-14, 1e-12, 4000});
}

LGeodesic shoot_l_geodesic(const FlowGeometry& flow, double v, double sigma_bar,
                           bool record_samples) {
    require_ricci_flow(flow);
    if (!(sigma_bar > 0.0)) throw RangeError("sigma_bar must be positive");
    if (!std::isfinite(v)) throw RangeError("initial speed must be finite");

    auto rhs = [&flow](const State& x, State& dx, double sigma) {
        if (!(std::abs(x[0]) < kBlowUp && std::abs(x[1]) < kBlowUp))
            throw SolverError("L-geodesic blew up", sigma);
        const Coefficients c = coefficients(flow, sigma);
        const double s2 = sigma * sigma;
        dx[0] = x[1];
        dx[1] = -(c.dg / c.g) * x[1];
        dx[2] = c.g * x[1] * x[1] + 0.25 * s2 * c.R;
        dx[3] = -s2 * s2 * c.R_tau / 16.0 - 0.25 * s2 * c.R + 0.5 * s2 * c.ric_rad * c.g * x[1] * x[1];
    };

    LGeodesic geo;
    geo.v = v;
    geo.sigma_end = sigma_bar;
    geo.tau_end = 0.25 * sigma_bar * sigma_bar;
    // At sigma = 0 every model has a(0) = 1, so du/dsigma = v.
    State x{0.0, v / flow.radial_scale(0.0), 0.0, 0.0};
    double last_sigma = 0.0;
    auto observer = [&](const State& s, double sigma) {
        last_sigma = sigma;
        if (record_samples) geo.samples.push_back({sigma, s[0], s[1]});
    };
    try {
        auto stepper = odeint::make_controlled(kOdeAbsTol, kOdeRelTol,
                                               odeint::runge_kutta_dopri5<State>());
        odeint::integrate_adaptive(stepper, rhs, x, 0.0, sigma_bar, sigma_bar / 16.0, observer);
    } catch (const SolverError&) {
        throw;
    } catch (const std::exception& e) {
        throw SolverError(std::string("L-geodesic integration failed: ") + e.what(), last_sigma);
    }
    for (double c : x)
        if (!std::isfinite(c)) throw SolverError("L-geodesic is not finite", last_sigma);

    geo.u_end = x[0];
    geo.du_end = x[1];
    geo.rho_end = flow.radial_scale(-geo.tau_end) * x[0];
    geo.l_length = x[2];
    geo.k_integral = x[3];
    return geo;
}

std::size_t ReducedDistanceField::KeyHash::operator()(const Key& k) const noexcept {
    const std::size_t h1 = std::hash<std::int64_t>{}(k.rho);
    const std::size_t h2 = std::hash<std::int64_t>{}(k.tau);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

ReducedDistanceField::ReducedDistanceField(const FlowGeometry& flow) : flow_(flow) {
    require_ricci_flow(flow);
}

std::size_t ReducedDistanceField::memo_size() const {
    std::shared_lock lock(mutex_);
    return memo_.size();
}

void ReducedDistanceField::clear_memo() const {
    std::unique_lock lock(mutex_);
    memo_.clear();
}

ReducedPoint ReducedDistanceField::solve(double rho, double tau) const {
    const Key key{std::llround(rho / kMemoResolution), std::llround(tau / kMemoResolution)};
    {
        std::shared_lock lock(mutex_);
        auto it = memo_.find(key);
        // The quantized key selects the bucket; only the exact point is reused.
        if (it != memo_.end() && it->second.rho == rho && it->second.tau == tau)
            return it->second.point;
    }
    const ReducedPoint p = compute(rho, tau);
    std::unique_lock lock(mutex_);
    if (memo_.size() >= kMemoCap) memo_.clear();
    memo_[key] = Entry{rho, tau, p};
    return p;
}

ReducedPoint ReducedDistanceField::compute(double rho, double tau) const {
    if (!(tau > 0.0)) throw RangeError("tau must be positive");
    const double t = -tau;
    if (!flow_.time_interval().contains(t)) throw RangeError("tau outside the flow");
    if (!(rho >= 0.0) || !(rho < flow_.rho_max(t))) throw RangeError("radius outside the slice");

    const double sigma_bar = 2.0 * std::sqrt(tau);
    const double u_target = rho / flow_.radial_scale(t);
    std::vector<double> targets{u_target};
    if (flow_.kind() == GeometryKind::shrinking_sphere)
        targets.push_back(2.0 * std::numbers::pi - u_target);  // the other way round
    const double far_target = *std::max_element(targets.begin(), targets.end());

    auto endpoint = [&](double v) { return shoot_l_geodesic(flow_, v, sigma_bar, false).u_end; };

    // Multi-start grid: v = 0 and eight geometric starts on [1e-3, 10],
    // extended upward until every target is passed.
    std::vector<double> vs{0.0};
    for (int k = 0; k < 8; ++k) vs.push_back(1e-3 * std::pow(1e4, k / 7.0));
    std::vector<double> ends;
    ends.reserve(vs.size());
    for (double v : vs) ends.push_back(endpoint(v));
    while (ends.back() < far_target && vs.back() < 1e6) {
        vs.push_back(vs.back() * 2.0);
        ends.push_back(endpoint(vs.back()));
    }

    ReducedPoint out;
    for (std::size_t k = 1; k < ends.size(); ++k)
        if (!(ends[k] > ends[k - 1])) out.monotone = false;

    std::vector<LGeodesic> candidates;
    for (double target : targets) {
        for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
            const double f0 = ends[k] - target, f1 = ends[k + 1] - target;
            if (f0 * f1 > 0.0 || (f1 == 0.0 && k + 2 < vs.size())) continue;
            const double v = find_root([&](double s) { return endpoint(s) - target; }, vs[k],
                                       vs[k + 1], f0, f1);
            const bool seen = std::any_of(candidates.begin(), candidates.end(), [&](const LGeodesic& g) {
                return std::abs(g.v - v) <= 1e-12 * std::max(1.0, v);
            });
            if (!seen) candidates.push_back(shoot_l_geodesic(flow_, v, sigma_bar, false));
        }
    }
    if (candidates.empty()) throw UnreachableError("no initial speed reaches the target");

    std::sort(candidates.begin(), candidates.end(),
              [](const LGeodesic& x, const LGeodesic& y) { return x.l_length < y.l_length; });
    const LGeodesic& best = candidates.front();
    if (candidates.size() > 1 && candidates[1].l_length - best.l_length <= kCutLocusGap)
        out.cut_locus = true;

    out.l_length = best.l_length;
    out.ell = best.l_length / sigma_bar;
    out.k_integral = best.k_integral;
    out.velocity = best.v;
    out.terminal_velocity = best.terminal_velocity(flow_);
    return out;
}

double reduced_distance(const ReducedDistanceField& field, double rho, double tau) {
    return field.ell(rho, tau);
}

GaussResiduals gauss_identity_residuals(const ReducedDistanceField& field, double rho, double tau,
                                        double h) {
    if (!(rho > 0.0)) throw RangeError("point must be off the center");
    if (!(h > 0.0)) throw RangeError("step must be positive");
    const FlowGeometry& flow = field.flow();
    auto L = [&](double r, double s) { return 2.0 * std::sqrt(s) * field.ell(r, s); };

    const double hr = h * std::max(1.0, rho);
    const double L_rho = (L(rho + hr, tau) - L(rho - hr, tau)) / (2.0 * hr);

    // d/dtau at a fixed point of space: the comoving coordinate is held.
    const double ht = h * tau;
    const double u = rho / flow.radial_scale(-tau);
    auto L_at = [&](double s) { return L(u * flow.radial_scale(-s), s); };
    const double L_tau = (L_at(tau + ht) - L_at(tau - ht)) / (2.0 * ht);

    const ReducedPoint p = field.solve(rho, tau);
    const double X = p.terminal_velocity;
    const double R = flow.evolution_trace(-tau);
    return {std::abs(L_rho - 2.0 * std::sqrt(tau) * X),
            std::abs(L_tau - std::sqrt(tau) * (R - X * X))};
}

Estimate reduced_volume(const ReducedDistanceField& field, double tau) {
    if (!(tau > 0.0)) throw RangeError("tau must be positive");
    const FlowGeometry& flow = field.flow();
    const int n = flow.dimension();
    const double t = -tau;
    // Beyond ell = 60 the kernel is below e^-60 of its peak.
    const double upper = std::min(flow.rho_max(t), std::sqrt(240.0 * tau) * 1.5);
    const double norm = std::pow(4.0 * std::numbers::pi * tau, -0.5 * n);
    auto integrand = [&](double rho) {
        return norm * std::exp(-field.ell(rho, tau)) * flow.sphere_area(rho, t);
    };
    return integrate(integrand, 0.0, upper, {1e-12, 1e-10, 2000});
}

double k_curvature_integral(const ReducedDistanceField& field, double rho, double tau) {
    return field.solve(rho, tau).k_integral;
}

}  // namespace mvlab
