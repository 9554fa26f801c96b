#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mvlab {

/// Rotationally symmetric model spaces and flows.
///
/// Every geometry is a warped product d rho^2 + phi(rho, t)^2 g_round on a
/// ball around a distinguished center. The geodesic radius rho at time t is
/// tied to a time independent (comoving) radial coordinate u by
/// rho = a(t) u, so points that stay fixed in space have constant u.
enum class GeometryKind {
    euclidean,
    gaussian_soliton,  // flat space seen as a static shrinking soliton
    hyperbolic,
    shrinking_sphere,
};

struct SpaceTimePoint {
    double rho = 0.0;
    double t = 0.0;
    /// Hyperspherical angles on S^{n-1}; empty means the equatorial default.
    std::vector<double> angles{};
};

struct TimeInterval {
    double lo;
    double hi;
    bool contains(double t) const { return t > lo && t < hi; }
};

/// Trace of the evolution tensor plus the two Ricci eigenvalues of the slice.
struct Curvature {
    double scalar;  // R = g^{ij} Upsilon_ij (zero for static kinds)
    double ric_radial;
    double ric_tangential;
};

/// Eigenvalues of Upsilon in the radial/tangential orthonormal frame.
struct Evolution {
    double radial;
    double tangential;
};

/// Area of the unit sphere S^dim in R^{dim+1}.
double unit_sphere_area(int dim);

class FlowGeometry {
public:
    static FlowGeometry euclidean(int n);
    static FlowGeometry gaussian_soliton(int n);
    static FlowGeometry hyperbolic(int n, double k = 1.0);
    /// Round sphere of radius 1 at t = 0 moving by Ricci flow.
    static FlowGeometry shrinking_sphere(int n);

    int dimension() const { return n_; }
    GeometryKind kind() const { return kind_; }
    double curvature_parameter() const { return k_; }
    bool is_static() const { return kind_ != GeometryKind::shrinking_sphere; }
    bool is_flat() const {
        return kind_ == GeometryKind::euclidean || kind_ == GeometryKind::gaussian_soliton;
    }
    std::string name() const;

    TimeInterval time_interval() const;
    double rho_max(double t) const;

    double warp(double rho, double t) const;
    double warp_drho(double rho, double t) const;
    double warp_drho2(double rho, double t) const;

    /// rho = a(t) u for a point with fixed comoving coordinate u.
    double radial_scale(double t) const;
    double radial_scale_dt(double t) const;

    /// Sectional curvature of the time-t slice (all models are space forms).
    double sectional_curvature(double t) const;

    Curvature curvature(const SpaceTimePoint& p) const;
    Evolution evolution(const SpaceTimePoint& p) const;
    /// R = tr Upsilon; spatially constant on every model.
    double evolution_trace(double t) const;
    double evolution_trace_dt(double t) const;

    /// Area of the geodesic sphere of radius rho at time t.
    double sphere_area(double rho, double t) const;

    /// Throws RangeError unless 0 <= rho < rho_max(t) and t is inside the time interval.
    void check_domain(const SpaceTimePoint& p) const;

private:
    FlowGeometry(GeometryKind kind, int n, double k);

    GeometryKind kind_;
    int n_;
    double k_;
};

/// max over samples of the orthonormal-frame components of d/dt g + 2 Upsilon,
/// with d/dt g taken by central differences at fixed comoving coordinates.
double flow_residual(const FlowGeometry& geom, std::span<const SpaceTimePoint> samples,
                     double h = 1e-4);

/// Coordinates on the space-time (t, u, theta_1, ..., theta_{n-1}).
std::vector<double> spacetime_coordinates(const FlowGeometry& geom, const SpaceTimePoint& p);

/// Diagonal of the space-time metric g~ = g(t) + dt^2 at the given coordinates.
std::vector<double> spacetime_metric_diagonal(const FlowGeometry& geom,
                                              std::span<const double> coords);

/// Christoffel symbols of g~ indexed (C, A, B), with index 0 the time direction.
class SpacetimeConnection {
public:
    explicit SpacetimeConnection(int n) : dim_(n + 1), gamma_(static_cast<size_t>(dim_ * dim_ * dim_), 0.0) {}
    int size() const { return dim_; }
    double& operator()(int c, int a, int b) { return gamma_[index(c, a, b)]; }
    double operator()(int c, int a, int b) const { return gamma_[index(c, a, b)]; }
    /// Largest absolute component difference.
    double max_difference(const SpacetimeConnection& other) const;

private:
    size_t index(int c, int a, int b) const {
        return static_cast<size_t>((c * dim_ + a) * dim_ + b);
    }
    int dim_;
    std::vector<double> gamma_;
};

/// Christoffels of g~ assembled from Upsilon and the spatial connection.
SpacetimeConnection spacetime_christoffels(const FlowGeometry& geom, const SpaceTimePoint& p);

/// Christoffels of g~ by central differences of the metric components.
SpacetimeConnection spacetime_christoffels_fd(const FlowGeometry& geom, const SpaceTimePoint& p,
                                              double h = 1e-4);

/// Gamma~^0(e_i, e_j) in the orthonormal spatial frame; equals Upsilon(e_i, e_j).
double spacetime_time_component_frame(const FlowGeometry& geom, const SpaceTimePoint& p, int i,
                                      int j);

/// Space-time vector field: coordinate components (X^0, X^u, X^theta...) at coordinates.
using SpacetimeField = std::function<std::vector<double>(std::span<const double> coords)>;

/// div(X) - X^0 R + d/dt X^0 with the spatial divergence from the analytic
/// connection; field derivatives by central differences of step h.
double spacetime_divergence(const FlowGeometry& geom, const SpacetimeField& field,
                            const SpaceTimePoint& p, double h = 1e-4);

/// (1/sqrt det g~) d_A (sqrt det g~ X^A), everything by central differences.
double spacetime_divergence_fd(const FlowGeometry& geom, const SpacetimeField& field,
                               const SpaceTimePoint& p, double h = 1e-4);

}  // namespace mvlab
