// Command line front end: build, run, montecarlo, certify, report.

#include "mgrid/experiment.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace mgrid;

namespace {

// Relative output paths land under $MGRID_OUTPUT_ROOT when it is set.
std::string output_path(const std::string& dir)
{
    const char* root = std::getenv("MGRID_OUTPUT_ROOT");
    if (root && *root && fs::path(dir).is_relative()) {
        return (fs::path(root) / dir).string();
    }
    return dir;
}

void print_summary(const BuiltProblem& b)
{
    const StochasticProblem& p = b.problem;
    fmt::print("agents {}  K {}  R {}  coupling rows {}\n", p.num_agents(), p.K(), p.R(), p.dim());
    for (int i = 0; i < p.num_agents(); ++i) {
        const LocalBlock& blk = p.agents[i].base;
        fmt::print("  {:<12} {:<18} vars {:>3}  binaries {:>2}  rows {:>3}  degree {}\n",
                   b.agents[i].name, b.agents[i].type, blk.size(), blk.num_integral(),
                   blk.num_rows(), b.graph.degree(i));
    }
    fmt::print("graph edges {}  q+ {}  q- {}\n", b.graph.edges.size(), p.recourse.q_plus,
               p.recourse.q_minus);
}

void print_certificate(const ViolationCertificate& c)
{
    fmt::print("certificate ({}): holds {}  integral agents {}  max excess {:.6g}\n", c.label,
               c.holds ? "yes" : "no", c.integral_count, c.max_excess);
    fmt::print("  bound max {:.6g}  measured max {:.6g}\n", c.bound.maxCoeff(), c.measured.maxCoeff());
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Distributed two-stage microgrid scheduling"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::string lp_path;
    std::string run_dir;
    int iterations = -1;
    int trials = 1;
    bool serial = false;

    auto* build = app.add_subcommand("build", "validate a config and dump the centralized problem");
    build->add_option("-c,--config", config, "config file")->required()->check(CLI::ExistingFile);
    build->add_option("--lp", lp_path, "write the centralized mixed-integer program here (LP format)");

    auto* runc = app.add_subcommand("run", "run the distributed scheme and write all artifacts");
    runc->add_option("-c,--config", config, "config file")->required()->check(CLI::ExistingFile);
    runc->add_option("-o,--out", out, "output directory (default: the config's output_dir)");
    runc->add_option("-n,--iterations", iterations, "override the iteration count");
    runc->add_flag("--serial", serial, "solve agents one after another");

    auto* mc = app.add_subcommand("montecarlo", "repeat a run over consecutive scenario seeds");
    mc->add_option("-c,--config", config, "config file")->required()->check(CLI::ExistingFile);
    mc->add_option("-t,--trials", trials, "number of trials")->check(CLI::PositiveNumber);
    mc->add_option("-o,--out", out, "output directory (default: <output_dir>_mc)");
    mc->add_option("-n,--iterations", iterations, "override the iteration count");
    mc->add_flag("--serial", serial, "solve agents one after another");

    auto* cert = app.add_subcommand("certify", "recompute the violation certificate of a saved run");
    cert->add_option("run_dir", run_dir, "directory written by 'run'")->required()->check(CLI::ExistingDirectory);

    auto* report = app.add_subcommand("report", "write figure-data CSVs of a saved run");
    report->add_option("run_dir", run_dir, "directory written by 'run'")->required()->check(CLI::ExistingDirectory);
    report->add_option("-o,--out", out, "output directory (default: run_dir)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            const BuiltProblem b = build_problem(load_config(config));
            print_summary(b);
            if (!lp_path.empty()) {
                std::ofstream os(lp_path);
                if (!os) {
                    throw std::runtime_error(fmt::format("cannot write '{}'", lp_path));
                }
                write_centralized_lp(os, b);
                fmt::print("wrote {}\n", lp_path);
            }
        } else if (*runc || *mc) {
            ExperimentConfig c = load_config(config);
            if (iterations >= 0) {
                c.T_f = iterations;
            }
            if (serial) {
                c.parallel = false;
            }
            if (*runc) {
                const std::string dir = output_path(out.empty() ? c.output_dir : out);
                const ExperimentResult r = run_experiment(c, dir);
                const TraceRow& first = r.run.trace.rows.front();
                const TraceRow& last = r.run.trace.rows.back();
                fmt::print("iterations {}  cost {:.6g} -> {:.6g}  max violation {:.6g}/{:.6g}\n", c.T_f,
                           first.incumbent_cost, last.incumbent_cost, last.max_violation_pos,
                           last.max_violation_neg);
                print_certificate(r.certificate);
                fmt::print("wrote {}\n", dir);
            } else {
                const std::string dir = output_path(out.empty() ? c.output_dir + "_mc" : out);
                const MonteCarloResult m = run_montecarlo(c, trials, dir);
                const MonteCarloRow& last = m.aggregate.back();
                int holds = 0;
                for (const auto& cc : m.certificates) {
                    holds += cc.holds ? 1 : 0;
                }
                fmt::print("trials {}  final cost {:.6g} +- {:.6g}  certificates holding {}/{}\n", trials,
                           last.cost_mean, last.cost_std, holds, trials);
                fmt::print("wrote {}\n", dir);
            }
        } else if (*cert) {
            print_certificate(recertify(run_dir));
        } else if (*report) {
            const RunState s = load_run_state(run_dir);
            const std::string dir = out.empty() ? run_dir : output_path(out);
            write_reports(build_problem(s.config), s.x, dir);
            fmt::print("wrote reports to {}\n", dir);
        }
    } catch (const ConfigError& e) {
        for (const auto& msg : e.errors()) {
            fmt::print(stderr, "config error: {}\n", msg);
        }
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
