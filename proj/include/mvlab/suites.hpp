#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mvlab/geometry.hpp"
#include "mvlab/kernels.hpp"
#include "mvlab/sweep.hpp"

namespace mvlab {

/// One verified property. `expected` is a number or a relation such as ">= 0".
struct Check {
    std::string name;
    double value = 0.0;
    std::variant<double, std::string> expected = 0.0;
    double tol = 0.0;
    bool pass = false;
    double err = 0.0;

    bool operator==(const Check&) const = default;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    double wall_ms = 0.0;
    bool pass = true;

    bool operator==(const SuiteReport&) const = default;
};

/// Stable schema {suite, checks:[{name, value, expected, tol, pass, err}], wall_ms, pass}.
/// Non-finite numbers are written as null and read back as NaN.
std::string to_json(const SuiteReport& report, int indent = 2);
SuiteReport report_from_json(const std::string& text);

struct Config {
    std::string suite = "all";
    std::string geometry;  // empty: suite default
    std::optional<int> dimension;
    std::string field = "constant-1";
    std::string quantity;
    std::string kernel;  // empty: natural kernel of the quantity
    std::optional<double> rmin, rmax;
    std::optional<int> steps;
    std::optional<double> taumin, taumax;
    double a = 0.0;
    double tol_scale = 1.0;
    std::string out;
    std::string format = "json";
    int jobs = 1;
    bool timing = true;
};

std::vector<std::string> config_keys();
/// Applies key = value; throws UsageError on unknown keys or malformed values.
void apply_setting(Config& config, const std::string& key, const std::string& value);
/// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

std::vector<std::string> suite_names();
/// Runs a fixed battery. Numerical failures become failed checks; a bad suite
/// name or configuration throws UsageError.
SuiteReport run_suite(const std::string& suite, const Config& config);

/// "euclidean3", "hyperbolic3", "gaussian", "shrinking-s3", ...; a missing
/// dimension suffix falls back to `dimension` (default 3).
FlowGeometry parse_geometry(const std::string& name, std::optional<int> dimension);

/// Quantities I, J, ihat, jhat, ibar, jbar, theta on the configured grid.
SweepReport run_sweep(const Config& config);
std::vector<std::string> sweep_quantities();

/// CSV with header parameter,value,error_estimate,monotone_ok and 17 significant digits.
std::string sweep_csv(const SweepReport& report);
std::string sweep_json(const SweepReport& report, int indent = 2);
std::string checks_csv(const SuiteReport& report);

/// Closed-form reduced distance of the shrinking round sphere.
double sphere_reduced_distance(int n, double rho, double tau);

}  // namespace mvlab
