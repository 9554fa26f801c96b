#include "mvlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <mutex>
#include <thread>

#include "mvlab/errors.hpp"

namespace mvlab {

std::string to_string(Direction d) {
    switch (d) {
    case Direction::non_increasing: return "non-increasing";
    case Direction::non_decreasing: return "non-decreasing";
    case Direction::constant: return "constant";
    case Direction::none: return "none";
    }
    return "none";
}

SweepReport make_sweep_report(std::string quantity, std::vector<double> grid,
                              std::vector<double> values, std::vector<double> errors,
                              Direction direction, double tol) {
    if (grid.size() != values.size() || grid.size() != errors.size())
        throw RangeError("sweep columns differ in length");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw RangeError("sweep grid must be strictly increasing");

    SweepReport rep{std::move(quantity), std::move(grid), std::move(values), std::move(errors),
                    direction, tol, {}, true, 0.0};
    for (std::size_t i = 0; i + 1 < rep.values.size(); ++i) {
        const double step = rep.values[i + 1] - rep.values[i];
        const double slack = rep.errors[i] + rep.errors[i + 1] + tol;
        double violation = 0.0;
        switch (direction) {
        case Direction::non_increasing: violation = step; break;
        case Direction::non_decreasing: violation = -step; break;
        case Direction::constant: violation = std::abs(step); break;
        case Direction::none: break;
        }
        const bool ok = !(violation > slack) && std::isfinite(step);
        rep.pair_ok.push_back(ok);
        rep.monotone = rep.monotone && ok;
        rep.worst_violation = std::max(rep.worst_violation, violation);
    }
    return rep;
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
    if (steps < 1) throw UsageError("steps must be at least 1");
    if (steps == 1) return {lo};
    if (!(hi > lo)) throw UsageError("grid upper end must exceed the lower end");
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
    return g;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::size_t first_index = count;
    std::mutex m;
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(m);
                if (i < first_index) {
                    first = std::current_exception();
                    first_index = i;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

int default_jobs() {
    if (const char* s = std::getenv("MVLAB_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v > 0 && v <= 4096) return static_cast<int>(v);
        throw UsageError(std::string("invalid MVLAB_JOBS '") + s + "'");
    }
    return 1;
}

}  // namespace mvlab
