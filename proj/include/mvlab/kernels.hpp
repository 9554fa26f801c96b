#pragma once

#include <memory>
#include <span>

#include "mvlab/geometry.hpp"
#include "mvlab/reduced.hpp"

namespace mvlab {

enum class KernelKind {
    green,      // exact minimal Green's function
    sub_green,  // space form Green's function of curvature -k^2 at the manifold distance
    sup_green,  // Euclidean Green's function at the manifold distance
    heat,       // closed form heat kernel of a static model
    sub_heat,   // (4 pi tau)^{-n/2} exp(-ell)
};

/// Value with its radial derivative (<= 0) and, for parabolic kinds, the
/// tau derivative at a fixed point of space.
struct KernelSample {
    double value = 0.0;
    double drho = 0.0;
    double dtau = 0.0;
};

/// Radial kernel centered at the distinguished point (and at t = 0 for
/// parabolic kinds, evaluated at backward time tau = -t).
class Kernel {
public:
    static Kernel green(const FlowGeometry& geom);
    static Kernel sub_green(const FlowGeometry& geom, double k);
    static Kernel sup_green(const FlowGeometry& geom);
    static Kernel heat(const FlowGeometry& geom);
    static Kernel sub_heat(std::shared_ptr<const ReducedDistanceField> field);

    KernelKind kind() const { return kind_; }
    bool parabolic() const { return kind_ == KernelKind::heat || kind_ == KernelKind::sub_heat; }
    const FlowGeometry& geometry() const { return geom_; }
    int dimension() const { return geom_.dimension(); }
    /// Curvature parameter k of the comparison space form (sub-green only).
    double comparison_curvature() const { return k_; }
    const ReducedDistanceField* reduced_field() const { return field_.get(); }

    KernelSample eval(double rho, double tau = 0.0) const;
    double value(double rho, double tau = 0.0) const;

private:
    Kernel(KernelKind kind, const FlowGeometry& geom, double k,
           std::shared_ptr<const ReducedDistanceField> field);

    KernelSample eval_elliptic(double rho) const;
    KernelSample eval_heat(double rho, double tau) const;
    KernelSample eval_sub_heat(double rho, double tau) const;

    KernelKind kind_;
    FlowGeometry geom_;
    double k_;
    std::shared_ptr<const ReducedDistanceField> field_;
};

/// Green's function of the simply connected space form of curvature -k^2
/// (k = 0 is Euclidean, n >= 3) as a function of distance.
struct RadialValue {
    double value;
    double derivative;
};
RadialValue space_form_green(int n, double k, double d);

struct GreenValue {
    double value;
    double gradient;  // |grad G|
};
GreenValue green_value(const Kernel& kernel, double d);

struct HeatValue {
    double value;
    double gradient;  // |grad H|
    double dtau;
};
HeatValue heat_kernel(const Kernel& kernel, double d, double tau);
HeatValue sub_heat_kernel(const Kernel& kernel, const SpaceTimePoint& p);

/// Ambient Gaussian (4 pi tau)^{-n/2} exp(-|x0 - y|^2 / 4 tau) with intrinsic dimension n.
double mcf_sup_heat_kernel(std::span<const double> x0, std::span<const double> y, double tau, int n);

/// |grad log u|^2 - d/dtau log u for a parabolic kernel.
double liyau_Q(const Kernel& kernel, double rho, double tau);

}  // namespace mvlab
