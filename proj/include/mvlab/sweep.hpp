#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <vector>

namespace mvlab {

enum class Direction { non_increasing, non_decreasing, constant, none };

std::string to_string(Direction d);

/// A monotone quantity sampled on an increasing grid.
struct SweepReport {
    std::string quantity;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> errors;
    Direction direction = Direction::none;
    double tol = 0.0;
    /// pair_ok[i] judges the step from grid[i] to grid[i + 1].
    std::vector<bool> pair_ok;
    bool monotone = true;
    double worst_violation = 0.0;

    /// Row i is fine when the step into it is (row 0 always is).
    bool row_ok(std::size_t i) const { return i == 0 || pair_ok[i - 1]; }
};

/// Builds the verdicts: a step passes when it respects the direction within
/// errors[i] + errors[i + 1] + tol.
SweepReport make_sweep_report(std::string quantity, std::vector<double> grid,
                              std::vector<double> values, std::vector<double> errors,
                              Direction direction, double tol);

std::vector<double> linear_grid(double lo, double hi, int steps);

/// Runs body(i) for i in [0, count) on up to `jobs` threads. After all threads
/// join, the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

/// Worker count from MVLAB_JOBS, else 1. Throws UsageError on a malformed value.
int default_jobs();

}  // namespace mvlab
