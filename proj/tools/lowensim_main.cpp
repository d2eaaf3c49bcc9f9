#include <CLI11.hpp>
#include <iostream>

#include "lowensim/experiments.hpp"
#include "lowensim/log.hpp"

namespace {

int run_one(const std::string& name, const std::string& config_path, int jobs, bool json_mirror,
            const std::string& output_override) {
    using namespace lowensim;
    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = ExperimentConfig::from_json(json::parse(read_file(config_path)));
            if (!name.empty() && cfg.experiment != name)
                throw ConfigInvalid("config experiment '" + cfg.experiment +
                                    "' does not match subcommand '" + name + "'");
        } else {
            cfg.experiment = name;
        }
        if (!output_override.empty()) cfg.output = output_override;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    ExperimentResult res;
    try {
        res = run_experiment(cfg, jobs);
    } catch (const ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "experiment failed before producing rows: " << e.what() << "\n";
        return 1;
    }

    const std::string payload =
        json_mirror ? to_json_result(cfg, res).dump(2) + "\n" : to_csv(cfg, res);
    try {
        if (cfg.output.empty()) std::cout << payload;
        else write_file(cfg.output, payload);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return res.any_failure ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lowensim: numerical toolkit for low-energy Hamiltonian simulation"};
    app.require_subcommand(0, 1);

    std::string config_path, output_override;
    int jobs = 1;
    bool json_mirror = false;
    std::string picked;

    for (const auto& name : lowensim::experiment_names()) {
        CLI::App* sub = app.add_subcommand(name, lowensim::experiment_help(name));
        sub->add_option("--config", config_path, "JSON experiment config");
        sub->add_option("--jobs", jobs, "worker pool size for sweep points")->check(CLI::PositiveNumber);
        sub->add_flag("--json", json_mirror, "emit JSON instead of CSV");
        sub->add_option("--output", output_override, "output path (default stdout)");
        sub->callback([&picked, name]() { picked = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        // CLI11 reserves nonzero codes for parse errors; map them onto the
        // documented config-error exit code, keeping 0 for --help.
        return rc == 0 ? 0 : 2;
    }

    if (picked.empty()) {
        std::cerr << app.help();
        std::cerr << "\nvalid experiments:";
        for (const auto& n : lowensim::experiment_names()) std::cerr << " " << n;
        std::cerr << "\n";
        return 2;
    }
    return run_one(picked, config_path, jobs, json_mirror, output_override);
}
