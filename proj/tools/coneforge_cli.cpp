#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coneforge/runner.hpp"
#include "coneforge/serialize.hpp"

int main(int argc, char** argv) {
    CLI::App app{"coneforge: translated cone forests, Nikodym patches and measure checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string inline_config;
    coneforge::RunOverrides overrides;
    std::uint64_t seed = 0;
    std::string out_dir;
    double tol = 0.0;
    std::int64_t cone_cap = 0;

    const char* names[] = {"construct", "verify", "measure", "nikodym",
                           "snap",      "cover",  "tangent", "dimension"};
    for (const char* name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--config-json", inline_config, "inline JSON config");
        sub->add_option("--seed", seed, "override the seed");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--tol", tol, "override the tolerance");
        sub->add_option("--cone-cap", cone_cap, "override the cone budget");
    }

    CLI11_PARSE(app, argc, argv);
    auto* sub = app.get_subcommands().front();

    std::string config = "{}";
    try {
        if (!config_path.empty()) config = coneforge::read_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (!inline_config.empty()) config = inline_config;

    if (sub->count("--seed")) overrides.seed = seed;
    if (sub->count("--out")) overrides.out_dir = out_dir;
    if (sub->count("--tol")) overrides.tol = tol;
    if (sub->count("--cone-cap")) overrides.cone_cap = cone_cap;

    return coneforge::run(sub->get_name(), config, overrides);
}
