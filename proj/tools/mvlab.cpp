#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mvlab/errors.hpp"
#include "mvlab/suites.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2 };

/// Flag values kept as strings so only flags actually given override the config file.
struct Flags {
    std::string config;
    std::map<std::string, std::string> values;
    bool no_timing = false;
};

void add_setting(CLI::App* cmd, Flags& f, const std::string& key, const std::string& help) {
    cmd->add_option("--" + key, f.values[key], help);
}

mvlab::Config build_config(CLI::App* cmd, const Flags& f) {
    mvlab::Config c;
    c.jobs = mvlab::default_jobs();
    if (!f.config.empty())
        for (const auto& [k, v] : mvlab::read_config_file(f.config)) mvlab::apply_setting(c, k, v);
    for (const auto& [k, v] : f.values)
        if (cmd->count("--" + k) > 0) mvlab::apply_setting(c, k, v);
    if (f.no_timing) c.timing = false;
    return c;
}

void emit(const mvlab::Config& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(c.out);
    if (!os) throw mvlab::UsageError("cannot write " + c.out);
    os << text;
}

void summarize(const mvlab::SuiteReport& r) {
    for (const auto& c : r.checks) std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << '\n';
    std::cerr << r.suite << ": " << (r.pass ? "pass" : "fail") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mvlab: numerical checks of mean value formulae and monotone quantities"};
    app.require_subcommand(1);

    Flags vf, sf;
    auto common = [](CLI::App* cmd, Flags& f) {
        cmd->add_option("--config", f.config, "flat key = value file; flags override its keys");
        add_setting(cmd, f, "geometry", "euclidean<n>, hyperbolic<n>, gaussian<n>, shrinking-s<n>");
        add_setting(cmd, f, "dimension", "spatial dimension");
        add_setting(cmd, f, "field", "test field name");
        add_setting(cmd, f, "kernel", "green, sub-green, sup-green, heat or sub-heat");
        add_setting(cmd, f, "rmin", "smallest radius");
        add_setting(cmd, f, "rmax", "largest radius");
        add_setting(cmd, f, "steps", "grid points");
        add_setting(cmd, f, "taumin", "smallest tau");
        add_setting(cmd, f, "taumax", "largest tau");
        add_setting(cmd, f, "a", "inner radius of annular quantities");
        add_setting(cmd, f, "tol-scale", "multiplier on every tolerance");
        add_setting(cmd, f, "out", "output file (default stdout)");
        add_setting(cmd, f, "format", "csv or json");
        add_setting(cmd, f, "jobs", "worker threads (default MVLAB_JOBS or 1)");
        cmd->add_flag("--no-timing", f.no_timing, "omit wall-clock checks and report wall_ms = 0");
    };

    CLI::App* verify = app.add_subcommand("verify", "run a check suite");
    common(verify, vf);
    add_setting(verify, vf, "suite", "elliptic, parabolic, ricci, mcf, reduced or all");
    add_setting(verify, vf, "quantity", "unused by verify");

    CLI::App* sweep = app.add_subcommand("sweep", "tabulate a monotone quantity");
    common(sweep, sf);
    add_setting(sweep, sf, "quantity", "I, J, ihat, jhat, ibar, jbar or theta");
    add_setting(sweep, sf, "suite", "unused by sweep");

    std::string report_path;
    CLI::App* report = app.add_subcommand("report", "summarize a saved JSON report");
    report->add_option("file", report_path, "report written by verify")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*verify) {
            const mvlab::Config c = build_config(verify, vf);
            const mvlab::SuiteReport r = mvlab::run_suite(c.suite, c);
            emit(c, c.format == "csv" ? mvlab::checks_csv(r) : mvlab::to_json(r));
            summarize(r);
            return r.pass ? kPass : kFail;
        }
        if (*sweep) {
            const mvlab::Config c = build_config(sweep, sf);
            if (c.quantity.empty()) throw mvlab::UsageError("sweep needs --quantity");
            const mvlab::SweepReport r = mvlab::run_sweep(c);
            emit(c, c.format == "csv" ? mvlab::sweep_csv(r) : mvlab::sweep_json(r));
            std::cerr << r.quantity << ' ' << mvlab::to_string(r.direction) << ": "
                      << (r.monotone ? "monotone" : "not monotone") << '\n';
            return r.monotone ? kPass : kFail;
        }
        std::ifstream in(report_path);
        if (!in) throw mvlab::UsageError("cannot read " + report_path);
        std::stringstream ss;
        ss << in.rdbuf();
        const mvlab::SuiteReport r = mvlab::report_from_json(ss.str());
        for (const auto& c : r.checks) std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << '\n';
        std::cout << r.suite << ": " << r.checks.size() << " checks, " << (r.pass ? "pass" : "fail") << '\n';
        return r.pass ? kPass : kFail;
    } catch (const mvlab::UsageError& e) {
        std::cerr << "mvlab: " << e.what() << '\n';
        return kUsage;
    } catch (const mvlab::UnsupportedError& e) {
        std::cerr << "mvlab: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "mvlab: " << e.what() << '\n';
        return kFail;
    }
}
