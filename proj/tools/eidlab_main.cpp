#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "eidlab/error.hpp"
#include "eidlab/experiments.hpp"

// Exit codes: 0 all assertions hold, 1 an experiment assertion failed,
// 2 usage or configuration error.
int main(int argc, char** argv) {
    CLI::App app{"eidlab: energy image density experiments on finite metric measure graphs"};
    app.failure_message(CLI::FailureMessage::help);

    eidlab::RunOptions opt;
    std::string joined;
    for (const auto& name : eidlab::experiment_names())
        joined += (joined.empty() ? "" : ", ") + name;
    app.add_option("experiment", opt.experiment, "One of: " + joined)->required();
    app.add_option("--config", opt.config_path, "Configuration file (key = value with [sections])");
    app.add_option("--seed", opt.seed, "Seed for every random draw (default 0)");
    app.add_option("--out", opt.out_dir, "Output directory (default ./out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        int code = eidlab::run_experiment(opt);
        std::printf("%s: %s\n", opt.experiment.c_str(), code == 0 ? "pass" : "fail");
        return code;
    } catch (const eidlab::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const eidlab::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
