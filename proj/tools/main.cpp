#include "pqmt/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

nlohmann::json load_raw_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw pqmt::cli::ConfigError("cannot open config file " + path);
    nlohmann::json raw = nlohmann::json::parse(in, nullptr, false);
    if (raw.is_discarded())
        throw pqmt::cli::ConfigError("config file " + path + " is not valid JSON");
    return raw;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for memory-shared photonic quantum memristor networks"};
    app.require_subcommand(1);

    std::string chosen;
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    int jobs = 1;
    long long seed = -1;

    for (const std::string& name : pqmt::cli::subcommands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--set", overrides, "Override a config key, e.g. --set drive.tau_ratio=0.5")
            ->take_all();
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--seed", seed, "Dataset seed (shorthand for --set data.seed=...)");
        sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        nlohmann::json raw = load_raw_config(config_path);
        for (const std::string& assignment : overrides)
            pqmt::cli::apply_override(raw, assignment);
        if (seed >= 0) {
            if (!pqmt::cli::schema_for(chosen).count("data.seed"))
                throw pqmt::cli::ConfigError("--seed is not applicable to " + chosen);
            pqmt::cli::apply_override(raw, "data.seed=" + std::to_string(seed));
        }
        nlohmann::json resolved =
            pqmt::cli::validate_config(raw, pqmt::cli::schema_for(chosen));
        return pqmt::cli::run_subcommand(chosen, resolved, out_dir, jobs);
    } catch (const pqmt::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
