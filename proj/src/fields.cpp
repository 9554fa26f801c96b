#include "mvlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mvlab/errors.hpp"

namespace mvlab {

namespace {

constexpr double kSuperConstant = 10.0;      // C in C - |y|^2
constexpr double kTranslateShift = 1.0;      // t1: pole of the translate at t = -t1
constexpr double kTranslateOffset = 0.5;     // |a|, a along the first axis

double radial_laplacian(const FlowGeometry& g, double rho, double t, double f1, double f2) {
    return f2 + (g.dimension() - 1) * g.warp_drho(rho, t) / g.warp(rho, t) * f1;
}

TestField::Parts radial_parts(std::function<double(double, double)> f,
                              std::function<double(double, double)> lap,
                              std::function<double(double, double)> dt) {
    TestField::Parts p;
    p.value = [f](const SpaceTimePoint& q) { return f(q.rho, q.t); };
    p.laplacian = [lap](const SpaceTimePoint& q) { return lap(q.rho, q.t); };
    p.dt = [dt](const SpaceTimePoint& q) { return dt(q.rho, q.t); };
    p.mean = f;
    p.mean_laplacian = lap;
    p.mean_dt = dt;
    p.sphere_min = f;
    return p;
}

double zero(double, double) { return 0.0; }

void require_flat(const FlowGeometry& g, const std::string& name) {
    if (!g.is_flat()) throw UnsupportedError(name + " is only modelled on flat space");
}

// Mean of exp(z <w, e>) over the unit sphere S^{n-1} and its z-derivative.
std::pair<double, double> exp_sphere_mean(int n, double z) {
    if (n == 1) return {std::cosh(z), std::sinh(z)};
    if (z < 1e-8) return {1.0 + z * z / (2.0 * n), z / n};
    const double nu = 0.5 * n - 1.0;
    const double pre = std::tgamma(0.5 * n) * std::pow(0.5 * z, -nu);
    return {pre * std::cyl_bessel_i(nu, z), pre * std::cyl_bessel_i(nu + 1.0, z)};
}

TestField::Parts gaussian_translate_parts(const FlowGeometry& g) {
    const int n = g.dimension();
    const double a = kTranslateOffset;
    auto shifted = [](double t) {
        const double s = t + kTranslateShift;
        if (!(s > 0.0)) throw RangeError("gaussian-translate is defined for t > -1");
        return s;
    };
    auto norm = [n](double s) { return std::pow(4.0 * std::numbers::pi * s, -0.5 * n); };
    auto dist2 = [n, a](const SpaceTimePoint& q) {
        const std::vector<double> w = direction_from_angles(n, q.angles);
        double d2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double yi = q.rho * w[static_cast<size_t>(i)] - (i == 0 ? a : 0.0);
            d2 += yi * yi;
        }
        return d2;
    };
    TestField::Parts p;
    p.value = [=](const SpaceTimePoint& q) {
        const double s = shifted(q.t);
        return norm(s) * std::exp(-dist2(q) / (4.0 * s));
    };
    p.dt = [=](const SpaceTimePoint& q) {
        const double s = shifted(q.t);
        const double d2 = dist2(q);
        return norm(s) * std::exp(-d2 / (4.0 * s)) * (-0.5 * n / s + d2 / (4.0 * s * s));
    };
    p.laplacian = p.dt;
    p.mean = [=](double rho, double t) {
        const double s = shifted(t);
        const double z = rho * a / (2.0 * s);
        return norm(s) * std::exp(-(rho * rho + a * a) / (4.0 * s)) * exp_sphere_mean(n, z).first;
    };
    p.mean_dt = [=](double rho, double t) {
        const double s = shifted(t);
        const double z = rho * a / (2.0 * s);
        const double base = norm(s) * std::exp(-(rho * rho + a * a) / (4.0 * s));
        const auto [m, dm] = exp_sphere_mean(n, z);
        return base * (m * (-0.5 * n / s + (rho * rho + a * a) / (4.0 * s * s)) - dm * z / s);
    };
    p.mean_laplacian = p.mean_dt;
    p.sphere_min = [=](double rho, double t) {
        const double s = shifted(t);
        return norm(s) * std::exp(-(rho + a) * (rho + a) / (4.0 * s));
    };
    return p;
}

}  // namespace

std::string to_string(FieldClass c) {
    switch (c) {
    case FieldClass::harmonic: return "harmonic";
    case FieldClass::superharmonic: return "superharmonic";
    case FieldClass::subharmonic: return "subharmonic";
    case FieldClass::caloric: return "caloric";
    case FieldClass::supercaloric: return "supercaloric";
    case FieldClass::subcaloric: return "subcaloric";
    case FieldClass::none: return "none";
    }
    return "none";
}

TestField::TestField(std::string name, FieldClass tag, const FlowGeometry& geom, Parts parts)
    : name_(std::move(name)), tag_(tag), geom_(geom), parts_(std::move(parts)) {}

double TestField::center_value(double t) const { return parts_.mean(0.0, t); }

std::vector<double> direction_from_angles(int n, std::span<const double> angles) {
    std::vector<double> w(static_cast<size_t>(n), 0.0);
    if (angles.empty()) {
        w.back() = 1.0;
        return w;
    }
    if (static_cast<int>(angles.size()) != n - 1) throw RangeError("expected n - 1 angles");
    double s = 1.0;
    for (int i = 0; i < n - 1; ++i) {
        w[static_cast<size_t>(i)] = s * std::cos(angles[static_cast<size_t>(i)]);
        s *= std::sin(angles[static_cast<size_t>(i)]);
    }
    w.back() = s;
    return w;
}

std::vector<std::string> field_names() {
    return {"constant-1",    "linear",        "harmonic-quadratic", "power",     "subharmonic",
            "superharmonic", "caloric-quadratic", "gaussian-translate", "exp-radial"};
}

TestField make_field(const std::string& name, const FlowGeometry& geom) {
    const int n = geom.dimension();
    const double k = geom.curvature_parameter();
    const bool hyper = geom.kind() == GeometryKind::hyperbolic;

    if (name == "constant-1")
        return TestField(name, FieldClass::harmonic, geom,
                         radial_parts([](double, double) { return 1.0; }, zero, zero));

    if (geom.kind() == GeometryKind::shrinking_sphere)
        throw UnsupportedError(name + " is not modelled on " + geom.name());

    if (name == "linear") {
        require_flat(geom, name);
        TestField::Parts p;
        p.value = [n](const SpaceTimePoint& q) { return q.rho * direction_from_angles(n, q.angles)[0]; };
        p.laplacian = [](const SpaceTimePoint&) { return 0.0; };
        p.dt = p.laplacian;
        p.mean = zero;
        p.mean_laplacian = zero;
        p.mean_dt = zero;
        p.sphere_min = [](double rho, double) { return -rho; };
        return TestField(name, FieldClass::harmonic, geom, std::move(p));
    }
    if (name == "harmonic-quadratic") {
        require_flat(geom, name);
        if (n < 2) throw UnsupportedError("harmonic-quadratic needs n >= 2");
        TestField::Parts p;
        p.value = [n](const SpaceTimePoint& q) {
            const auto w = direction_from_angles(n, q.angles);
            return q.rho * q.rho * (w[0] * w[0] - w[1] * w[1]);
        };
        p.laplacian = [](const SpaceTimePoint&) { return 0.0; };
        p.dt = p.laplacian;
        p.mean = zero;
        p.mean_laplacian = zero;
        p.mean_dt = zero;
        p.sphere_min = [](double rho, double) { return -rho * rho; };
        return TestField(name, FieldClass::harmonic, geom, std::move(p));
    }
    if (name == "power") {
        require_flat(geom, name);
        if (n < 3) throw UnsupportedError("power field needs n >= 3");
        return TestField(name, FieldClass::harmonic, geom,
                         radial_parts([n](double r, double) { return std::pow(r, 2 - n); }, zero, zero));
    }
    if (name == "subharmonic" || name == "superharmonic") {
        if (!(geom.is_flat() || hyper)) throw UnsupportedError(name + " is not modelled on " + geom.name());
        const double sign = name == "subharmonic" ? 1.0 : -1.0;
        const double c = name == "subharmonic" ? 0.0 : kSuperConstant;
        auto lap = [=](double r, double) {
            if (!hyper) return sign * 2.0 * n;
            const double x = k * r;
            const double xcoth = x < 1e-8 ? 1.0 : x / std::tanh(x);
            return sign * (2.0 + 2.0 * (n - 1) * xcoth);
        };
        return TestField(name, sign > 0 ? FieldClass::subharmonic : FieldClass::superharmonic, geom,
                         radial_parts([=](double r, double) { return c + sign * r * r; }, lap, zero));
    }
    if (name == "caloric-quadratic") {
        require_flat(geom, name);
        const double two_n = 2.0 * n;
        return TestField(name, FieldClass::caloric, geom,
                         radial_parts([=](double r, double t) { return r * r + two_n * t; },
                                      [=](double, double) { return two_n; },
                                      [=](double, double) { return two_n; }));
    }
    if (name == "gaussian-translate") {
        require_flat(geom, name);
        return TestField(name, FieldClass::caloric, geom, gaussian_translate_parts(geom));
    }
    if (name == "exp-radial") {
        if (!(geom.is_flat() || hyper)) throw UnsupportedError(name + " is not modelled on " + geom.name());
        const FlowGeometry g = geom;
        auto lap = [g](double r, double t) {
            if (r == 0.0) return g.dimension() > 1 ? -HUGE_VAL : std::exp(-r);
            const double e = std::exp(-r);
            return radial_laplacian(g, r, t, -e, e);
        };
        const FieldClass tag =
            hyper && (n - 1) * k >= 1.0 ? FieldClass::superharmonic : FieldClass::none;
        return TestField(name, tag, geom,
                         radial_parts([](double r, double) { return std::exp(-r); }, lap, zero));
    }
    throw UnsupportedError("unknown field " + name);
}

double classification_check(const TestField& field, std::span<const SpaceTimePoint> samples) {
    double worst = 0.0;
    for (const SpaceTimePoint& p : samples) {
        const double lap = field.laplacian(p);
        const double heat = field.heat_operator(p);
        double v = 0.0;
        switch (field.tag()) {
        case FieldClass::harmonic: v = std::abs(lap); break;
        case FieldClass::superharmonic: v = std::max(lap, 0.0); break;
        case FieldClass::subharmonic: v = std::max(-lap, 0.0); break;
        case FieldClass::caloric: v = std::abs(heat); break;
        case FieldClass::supercaloric: v = std::max(-heat, 0.0); break;
        case FieldClass::subcaloric: v = std::max(heat, 0.0); break;
        case FieldClass::none: break;
        }
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace mvlab
