#include <CLI11.hpp>

#include <iostream>

#include "fieldcomm/cli.hpp"

int main(int argc, char** argv) {
    namespace fc = fieldcomm::cli;

    CLI::App app{"Detector-mediated communication through a quantum field"};
    fc::RunOptions opts;
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int jobs = 0;

    app.add_option("experiment", opts.experiment, "Experiment to run")
        ->required()
        ->check(CLI::IsMember(fc::experiments()));
    app.add_option("--config", config, "JSON configuration file")->required();
    auto* out_opt = app.add_option("--out", out, "CSV output path; the manifest is written next to it");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for the Haar-random inputs");
    auto* jobs_opt =
        app.add_option("--jobs", jobs, "Worker threads (default: FIELDCOMM_JOBS, then hardware threads)")
            ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fc::kExitValidation;
    }

    opts.config_path = config;
    if (*out_opt) {
        opts.out = out;
    }
    if (*seed_opt) {
        opts.seed = seed;
    }
    if (*jobs_opt) {
        opts.jobs = jobs;
    }
    return fc::run(opts, std::cerr);
}
