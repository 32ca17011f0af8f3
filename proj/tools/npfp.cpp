#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "npfp/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Coarse/fine detection scheduling: analysis, simulation and sweeps"};
    app.require_subcommand(1);

    npfp::CommandOptions opts;
    std::string policy, seeds, sampling;
    std::uint64_t seed = 0;
    double horizon_ms = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON configuration file")->required();
        sub->add_option("--horizon-ms", horizon_ms, "simulated time span in milliseconds");
        sub->add_option("--sampling", sampling, "wcet or mean-centered");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_flag("--force", opts.force, "simulate even if the response-time test fails");
    };

    auto* analyze = app.add_subcommand("analyze", "response-time analysis of the configured task set");
    analyze->add_option("--config", opts.config_path, "JSON configuration file")->required();

    auto* simulate = app.add_subcommand("simulate", "simulate one run; writes trace.csv, trace.json, report.json");
    common(simulate);
    simulate->add_option("--policy", policy, "c, cf, cbf, cfb or cbfb");

    auto* sweep = app.add_subcommand("sweep", "simulate seeds x policies; writes sweep.csv");
    common(sweep);
    sweep->add_option("--policy", policy, "comma-separated policies (default c,cfb,cbf,cbfb)");
    sweep->add_option("--seeds", seeds, "seed range A..B");
    sweep->add_flag("--serial", opts.serial, "run without the OpenMP fan-out");

    auto* demo = app.add_subcommand("dp-demo", "print the worked batch-partition example and self-check it");

    CLI11_PARSE(app, argc, argv);

    auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
    for (auto* sub : {simulate, sweep}) {
        if (!sub->parsed()) continue;
        if (given(sub, "--policy")) opts.policy = policy;
        if (given(sub, "--seed")) opts.seed = seed;
        if (given(sub, "--horizon-ms")) opts.horizon_ms = horizon_ms;
        if (given(sub, "--sampling")) opts.sampling = sampling;
    }
    if (sweep->parsed() && given(sweep, "--seeds")) opts.seeds = seeds;

    if (analyze->parsed()) return npfp::cmd_analyze(opts, std::cout, std::cerr);
    if (simulate->parsed()) return npfp::cmd_simulate(opts, std::cout, std::cerr);
    if (sweep->parsed()) return npfp::cmd_sweep(opts, std::cout, std::cerr);
    if (demo->parsed()) return npfp::cmd_dp_demo(std::cout, std::cerr);
    return 1;
}
