#pragma once

#include <span>
#include <vector>

#include "mvlab/elliptic.hpp"
#include "mvlab/fields.hpp"
#include "mvlab/kernels.hpp"
#include "mvlab/reduced.hpp"
#include "mvlab/sweep.hpp"

namespace mvlab {

// Parabolic regions live in backward time tau = -t below the center (x0, 0).
// Fields are evaluated at t = -tau.

/// Spherical form: surface term + r^{-n} int R v + int phi_r (d/dt - Lap) v.
Estimate heat_sphere_rhs(const Kernel& kernel, const TestField& v, double r);
/// Ball form: r^{-n} int (|grad log K|^2 + R psi_r) v + iterated (d/dt - Lap) v correction.
Estimate heat_ball_rhs(const Kernel& kernel, const TestField& v, double r);

MeanValueResult mv_heat_sphere(const Kernel& heat, const TestField& v, double r);
MeanValueResult mv_heat_ball(const Kernel& heat, const TestField& v, double r);

/// |ball rhs(r) - r^{-n} n int_0^r eta^{n-1} sphere rhs(eta) d eta|.
double heat_chain_residual(const Kernel& kernel, const TestField& v, double r);

/// J_v(r): surface term plus r^{-n} int R v, and I_v(r) = r^{-n} int (|grad log K|^2 + R psi_r) v.
Estimate parabolic_J(const Kernel& kernel, const TestField& v, double r);
Estimate parabolic_I(const Kernel& kernel, const TestField& v, double r);

/// int_{slice tau = s, K >= r^{-n}} v (K - r^{-n}) dmu; tends to v(x0, 0) as s -> 0.
Estimate cap_integral(const Kernel& kernel, const TestField& v, double r, double s);

/// Surface form of J for v = 1: int (|grad K|^2 - K K_tau) / sqrt(|grad K|^2 + K_tau^2) dA.
Estimate jhat(const Kernel& kernel, double r);
/// (r^n - a^n)^{-1} int over E_r \ E_a of |grad log K|^2 - (log K)_tau; a = 0 gives the ball.
Estimate ihat(const Kernel& kernel, double a, double r);

struct SurfaceFormResiduals {
    double j = 0.0;  // surface form against surface + volume term
    double i = 0.0;  // Li-Yau integrand against |grad log K|^2 + R psi_r
    double j_error = 0.0;
    double i_error = 0.0;
};
/// v = 1 forms of J and I for any parabolic kernel.
SurfaceFormResiduals surface_form_residual(const Kernel& kernel, double r);

struct RicciSweep {
    SweepReport jhat;           // asserted non-increasing
    SweepReport ihat;           // I(a, r) at fixed a, asserted non-increasing
    std::vector<bool> chain_ok;  // J(r) <= I(a, r) within errors
    bool chain = true;
};
RicciSweep jhat_sweep(const Kernel& kernel, const std::vector<double>& grid, double a,
                      double tol = 1e-6, int jobs = 1);

/// Relative residual of r^n I(0, r) = n int_0^r eta^{n-1} J(eta) d eta.
double jhat_relation_residual(const Kernel& kernel, double r);

struct EllDerivatives {
    double ell, d_rho, d_rho2, d_tau;  // d_tau at a fixed point of space
};
/// Fourth order central differences of ell with relative step h.
EllDerivatives ell_derivatives(const ReducedDistanceField& field, double rho, double tau,
                               double h = 2e-3);

struct SolitonPoint {
    double rho, tau;
    double ell_evolution;   // ell_tau - Lap ell + |grad ell|^2 - R + n/(2 tau)
    double ell_first_order;  // -2 ell_tau - |grad ell|^2 + R - ell / tau
    double entropy;    // (tau (2 Lap ell - |grad ell|^2 + R) + ell - n) K
    double soliton;    // max component of Ric + Hess ell - g / (2 tau)
};
struct SolitonCheck {
    std::vector<SolitonPoint> points;
    double ell_evolution = 0.0;  // largest |.| over the samples
    double ell_evolution_min = 0.0;
    double ell_first_order = 0.0;
    double entropy = 0.0;
    double soliton = 0.0;
};
SolitonCheck soliton_residuals(const ReducedDistanceField& field,
                               std::span<const std::pair<double, double>> samples, int jobs = 1);

/// Largest |Q(K) - n/(2 tau) + calK / (2 tau^{3/2})| with Q from differences of ell
/// and calK from the minimizing geodesic.
double li_yau_ricci_residual(const ReducedDistanceField& field,
                       std::span<const std::pair<double, double>> samples, int jobs = 1);

}  // namespace mvlab
