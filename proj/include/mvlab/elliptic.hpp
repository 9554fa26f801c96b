#pragma once

#include <functional>
#include <vector>

#include "mvlab/fields.hpp"
#include "mvlab/kernels.hpp"
#include "mvlab/numerics.hpp"
#include "mvlab/sweep.hpp"

namespace mvlab {

enum class MeanValueForm { sphere, ball };

struct MeanValueResult {
    double lhs = 0.0;  // v at the center
    double rhs = 0.0;
    double residual = 0.0;  // |lhs - rhs|
    double error = 0.0;     // quadrature error estimate of rhs
};

/// Right-hand side of the mean value formula for a Green-type kernel:
/// sphere form  J_v(r) - int_{Omega_r} phi_r Lap v,
/// ball form    I_v(r) - (n / r^n) int_0^r eta^{n-1} int_{Omega_eta} phi_eta Lap v.
Estimate elliptic_mean_value_rhs(const Kernel& kernel, const TestField& v, double r,
                                 MeanValueForm form);

/// Identity for the exact Green's function.
MeanValueResult mv_identity(const Kernel& green, const TestField& v, double r, MeanValueForm form);

/// v(x) - rhs for a sub-Green kernel, rhs - v(x) for a sup-Green kernel; both
/// are non-negative when the inequality holds. Requires v >= 0 on the region.
Estimate mv_inequality_deficit(const Kernel& kernel, const TestField& v, double r,
                               MeanValueForm form);

/// J_v(r) = int_{Psi_r} |grad G| v dA.
Estimate elliptic_J(const Kernel& kernel, const TestField& v, double r);
/// I_v(r) = r^{-n} int_{Omega_r} |grad log G|^2 v dmu.
Estimate elliptic_I(const Kernel& kernel, const TestField& v, double r);

/// (n / r^{n+1}) int_{Omega_r} Lap v dmu and (n / r^{n+1}) int_{Omega_r} psi_r Lap v dmu.
Estimate elliptic_J_slope(const Kernel& kernel, const TestField& v, double r);
Estimate elliptic_I_slope(const Kernel& kernel, const TestField& v, double r);

/// Central difference derivative of a quantity against its predicted slope.
struct DerivativeCheck {
    double r = 0.0;
    double fd = 0.0;
    double predicted = 0.0;
    double slack = 0.0;
    /// Equality (exact Green), fd <= predicted (sub-Green), fd >= predicted (sup-Green).
    bool ok = false;
};

DerivativeCheck elliptic_derivative_check(const Kernel& kernel, const TestField& v, double r,
                                          bool ball, double tol);

/// |r^n I_v(r) - n int_0^r eta^{n-1} J_v(eta) d eta| / max(1, |r^n I_v(r)|).
double elliptic_relation_residual(const Kernel& kernel, const TestField& v, double r);

/// Direction in which I_v and J_v are asserted to move for this kernel and field.
Direction elliptic_direction(const Kernel& kernel, const TestField& v);

struct EllipticSweep {
    SweepReport I;
    SweepReport J;
    std::vector<DerivativeCheck> dI;  // interior grid points
    std::vector<DerivativeCheck> dJ;
    double relation_residual = 0.0;  // worst over the grid
};

EllipticSweep elliptic_sweep(const Kernel& kernel, const TestField& v, const std::vector<double>& grid,
                             double tol = 1e-6, int jobs = 1);

/// Difference between the two iterated integrals of the co-area identity
///   (n/r^n) int_0^r eta^{n-1} int_{Omega_eta} f phi_eta = int_0^r n/eta^{n+1} int_{Omega_eta} f psi_eta
/// for a radial f given by its spherical means.
Estimate coarea_check(const Kernel& kernel, const std::function<double(double rho)>& f, double r);

}  // namespace mvlab
