#pragma once

#include <functional>

namespace mvlab {

/// A quadrature result with its error estimate.
struct Estimate {
    double value = 0.0;
    double error = 0.0;

    Estimate& operator+=(const Estimate& o) {
        value += o.value;
        error += o.error;
        return *this;
    }
};

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 2000;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (21 point panels) on a finite interval.
/// Panels with the largest error are bisected until
/// error <= max(abs_tol, rel_tol * |value|). Throws AccuracyError when the
/// panel budget runs out far from the target.
Estimate integrate(const Integrand& f, double a, double b, const QuadratureOptions& opt = {});

/// Root of f in [lo, hi] with f(lo), f(hi) of opposite sign (TOMS 748).
double find_root(const Integrand& f, double lo, double hi, double f_lo, double f_hi,
                 double rel_tol = 1e-15);
double find_root(const Integrand& f, double lo, double hi, double rel_tol = 1e-15);

/// Central first and second derivatives from the fourth order five point stencil.
struct Derivatives {
    double d1;
    double d2;
};
Derivatives central_derivatives(const Integrand& f, double x, double h);

}  // namespace mvlab
