#include <CLI11.hpp>

#include <iostream>

#include "cavimag/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cavimag: micromagnetics with a single-mode cavity"};
    app.require_subcommand(1);
    app.fallthrough();

    int threads = 1;
    bool quiet = false;
    app.add_option("--threads", threads, "worker threads")->envname("CAVIMAG_THREADS")->check(CLI::Range(1, 1024));
    app.add_flag("--quiet", quiet, "suppress the console summary");

    cavimag::CommandOptions opts;
    std::string config, out_dir = ".";

    auto* run = app.add_subcommand("run", "run one simulation from a config file");
    run->add_option("--config", config, "config file")->required();
    run->add_option("--out", out_dir, "output directory");

    auto* sweep = app.add_subcommand("sweep", "parameter sweep from the config's [sweep] section");
    sweep->add_option("--config", config, "config file")->required();
    sweep->add_option("--out", out_dir, "output directory");

    cavimag::DickeBenchOptions bench;
    std::string bench_out;
    auto* dicke = app.add_subcommand("dicke-bench", "engine vs explicit Dicke oracle vs closed forms");
    dicke->add_option("--omega-z", bench.omega_z, "spin frequency, rad/s");
    dicke->add_option("--omega-c", bench.omega_c, "cavity frequency, rad/s");
    dicke->add_option("--lambda-over-lc", bench.lambda_over_lc, "coupling in units of lambda_c");
    dicke->add_option("--kappa", bench.kappa, "cavity loss rate, rad/s");
    dicke->add_option("--alpha", bench.alpha, "Gilbert damping");
    dicke->add_option("--duration", bench.duration, "simulated time in s (default 400 cavity periods)");
    dicke->add_option("--steps-per-period", bench.steps_per_period, "time steps per cavity period");
    dicke->add_option("--compare-periods", bench.compare_periods, "trajectory comparison window, cavity periods");
    dicke->add_option("--tilt-deg", bench.tilt_deg, "initial tilt of m from +z, degrees");
    dicke->add_option("--out", bench_out, "write engine/oracle CSVs here");

    std::string ovf_path;
    auto* validate = app.add_subcommand("validate-ovf", "check an OVF 2.0 file");
    validate->add_option("path", ovf_path, "OVF file")->required();

    CLI11_PARSE(app, argc, argv);

    opts.config = config;
    opts.out_dir = out_dir;
    opts.threads = threads;
    opts.quiet = quiet;

    if (*run) return cavimag::cmd_run(opts, std::cout, std::cerr);
    if (*sweep) return cavimag::cmd_sweep(opts, std::cout, std::cerr);
    if (*dicke) {
        bench.quiet = quiet;
        if (!bench_out.empty()) bench.out_dir = bench_out;
        return cavimag::cmd_dicke_bench(bench, std::cout, std::cerr);
    }
    return cavimag::cmd_validate_ovf(ovf_path, std::cout, std::cerr);
}
