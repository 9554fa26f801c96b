#include "mvlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "mvlab/errors.hpp"

namespace mvlab {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const Integrand& f, double a, double b) {
    // Integrate on [-1, 1] and rescale: the library leaves the error unscaled.
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double err = 0.0;
    double v = Rule::integrate([&](double x) { return f(mid + half * x); }, -1.0, 1.0, 0, 0.0, &err);
    v *= half;
    err *= half;
    if (!std::isfinite(v)) throw AccuracyError("integrand is not finite", v, err);
    return {a, b, v, err};
}

}  // namespace

Estimate integrate(const Integrand& f, double a, double b, const QuadratureOptions& opt) {
    if (a == b) return {};
    if (!(std::isfinite(a) && std::isfinite(b))) throw RangeError("integration limits must be finite");
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::priority_queue<Panel> heap;
    Panel first = evaluate_panel(f, a, b);
    double value = first.value;
    double error = first.error;
    heap.push(first);
    int panels = 1;
    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(value)); };
    while (error > target() && panels < opt.max_panels) {
        Panel p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            heap.push(p);
            break;
        }
        Panel l = evaluate_panel(f, p.a, mid);
        Panel r = evaluate_panel(f, mid, p.b);
        value += l.value + r.value - p.value;
        error += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        ++panels;
    }
    // Recompute sums to shed accumulated round-off from the running updates.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    if (error > 1e3 * target())
        throw AccuracyError("adaptive quadrature did not converge", sign * value, error);
    return {sign * value, error};
}

double find_root(const Integrand& f, double lo, double hi, double f_lo, double f_hi,
                 double rel_tol) {
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) throw RangeError("root is not bracketed");
    auto done = [rel_tol](double x, double y) {
        return std::abs(x - y) <= rel_tol * std::max(std::abs(x), std::abs(y)) + 1e-300;
    };
    std::uintmax_t iters = 200;
    auto [l, h] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, done, iters);
    return 0.5 * (l + h);
}

double find_root(const Integrand& f, double lo, double hi, double rel_tol) {
    return find_root(f, lo, hi, f(lo), f(hi), rel_tol);
}

Derivatives central_derivatives(const Integrand& f, double x, double h) {
    const double fm2 = f(x - 2 * h), fm1 = f(x - h), f0 = f(x), fp1 = f(x + h), fp2 = f(x + 2 * h);
    return {(fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h),
            (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)};
}

}  // namespace mvlab
