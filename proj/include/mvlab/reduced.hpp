#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "mvlab/geometry.hpp"
#include "mvlab/numerics.hpp"

namespace mvlab {

// Reduced geometry of a flow seen from the center at t = 0, in backward time
// tau = -t and sigma = 2 sqrt(tau). Radial L-geodesics are described by the
// comoving coordinate u along a meridian, unwrapped past the antipode.

struct LSample {
    double sigma;
    double u;
    double du;  // du / dsigma
};

struct LGeodesic {
    double v = 0.0;  // initial speed d gamma / d sigma at sigma = 0
    double sigma_end = 0.0;
    double tau_end = 0.0;
    double u_end = 0.0;
    double du_end = 0.0;
    double rho_end = 0.0;  // a(t) u_end, signed and unwrapped
    double l_length = 0.0;
    double k_integral = 0.0;  // int tau^{3/2} H(X) dtau along the curve
    std::vector<LSample> samples;

    /// Radial component of X = d gamma / d tau at the endpoint (orthonormal frame).
    double terminal_velocity(const FlowGeometry& flow) const;
};

/// Radial test path in comoving coordinates: sigma -> (u, du/dsigma).
struct PathPoint {
    double u;
    double du;
};
using RadialPath = std::function<PathPoint(double sigma)>;

/// Quadrature of |d gamma/d sigma|^2 + sigma^2 R / 4 over [0, sigma_bar].
Estimate l_length(const FlowGeometry& flow, const RadialPath& path, double sigma_bar);

/// Integrates the sigma form of the L-geodesic equation from the center with
/// initial speed v. Samples are recorded only when requested.
LGeodesic shoot_l_geodesic(const FlowGeometry& flow, double v, double sigma_bar,
                           bool record_samples = true);

struct ReducedPoint {
    double ell = 0.0;
    double l_length = 0.0;
    double k_integral = 0.0;
    double velocity = 0.0;           // minimizing initial speed
    double terminal_velocity = 0.0;  // radial X at the endpoint
    bool cut_locus = false;          // two shot minima agree to 1e-6
    bool monotone = true;            // sampled shooting map was increasing
};

/// ell(rho, tau) for a Ricci flow model, with a concurrent memo.
class ReducedDistanceField {
public:
    explicit ReducedDistanceField(const FlowGeometry& flow);

    const FlowGeometry& flow() const { return flow_; }
    ReducedPoint solve(double rho, double tau) const;
    double ell(double rho, double tau) const { return solve(rho, tau).ell; }
    std::size_t memo_size() const;
    void clear_memo() const;

private:
    struct Key {
        std::int64_t rho;
        std::int64_t tau;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };
    struct Entry {
        double rho;
        double tau;
        ReducedPoint point;
    };

    ReducedPoint compute(double rho, double tau) const;

    FlowGeometry flow_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<Key, Entry, KeyHash> memo_;
};

double reduced_distance(const ReducedDistanceField& field, double rho, double tau);

struct GaussResiduals {
    double gradient;  // |grad L - 2 sqrt(tau) X|
    double time;      // |dL/dtau - sqrt(tau) (R - |X|^2)|
};
GaussResiduals gauss_identity_residuals(const ReducedDistanceField& field, double rho, double tau,
                                        double h = 1e-4);

/// theta(tau) = integral of (4 pi tau)^{-n/2} exp(-ell) over the slice.
Estimate reduced_volume(const ReducedDistanceField& field, double tau);

double k_curvature_integral(const ReducedDistanceField& field, double rho, double tau);

}  // namespace mvlab
