#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mvlab/geometry.hpp"

namespace mvlab {

enum class FieldClass { harmonic, superharmonic, subharmonic, caloric, supercaloric, subcaloric, none };

std::string to_string(FieldClass c);

/// Analytic test function v(y, t) with exact derivatives and exact means
/// over geodesic spheres around the center.
class TestField {
public:
    using PointFn = std::function<double(const SpaceTimePoint&)>;
    using RadialFn = std::function<double(double rho, double t)>;

    struct Parts {
        PointFn value, laplacian, dt;
        RadialFn mean, mean_laplacian, mean_dt, sphere_min;
    };

    TestField(std::string name, FieldClass tag, const FlowGeometry& geom, Parts parts);

    const std::string& name() const { return name_; }
    FieldClass tag() const { return tag_; }
    const FlowGeometry& geometry() const { return geom_; }

    double value(const SpaceTimePoint& p) const { return parts_.value(p); }
    double laplacian(const SpaceTimePoint& p) const { return parts_.laplacian(p); }
    double dt(const SpaceTimePoint& p) const { return parts_.dt(p); }
    /// (d/dt - Laplacian) v
    double heat_operator(const SpaceTimePoint& p) const { return dt(p) - laplacian(p); }

    double mean(double rho, double t = 0.0) const { return parts_.mean(rho, t); }
    double mean_laplacian(double rho, double t = 0.0) const { return parts_.mean_laplacian(rho, t); }
    double mean_dt(double rho, double t = 0.0) const { return parts_.mean_dt(rho, t); }
    double mean_heat_operator(double rho, double t = 0.0) const {
        return mean_dt(rho, t) - mean_laplacian(rho, t);
    }
    /// Exact minimum of v over the geodesic sphere of radius rho.
    double sphere_min(double rho, double t = 0.0) const { return parts_.sphere_min(rho, t); }

    /// Value at the center (x0, t).
    double center_value(double t = 0.0) const;

private:
    std::string name_;
    FieldClass tag_;
    FlowGeometry geom_;
    Parts parts_;
};

/// Catalog names: constant-1, linear, harmonic-quadratic, power, subharmonic,
/// superharmonic, caloric-quadratic, gaussian-translate, exp-radial.
TestField make_field(const std::string& name, const FlowGeometry& geom);
std::vector<std::string> field_names();

/// Unit direction in R^n from hyperspherical angles (empty: last axis).
std::vector<double> direction_from_angles(int n, std::span<const double> angles);

/// Largest violation of the tag's sign condition over the samples (0 if it holds).
double classification_check(const TestField& field, std::span<const SpaceTimePoint> samples);

}  // namespace mvlab
