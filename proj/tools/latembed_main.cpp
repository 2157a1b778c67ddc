#include <cstdio>
#include <exception>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "latembed/runner.hpp"

namespace {

int cmd_run(const std::string& config_path, int threads) {
    const latembed::RunOutcome outcome = latembed::run_config_file(config_path, threads);
    if (outcome.exit_code == 2) {
        for (const std::string& d : outcome.diagnostics)
            std::fprintf(stderr, "%s\n", d.c_str());
        return 2;
    }
    for (const std::string& f : outcome.files_written)
        std::printf("wrote %s\n", f.c_str());
    std::printf("termination = %s\n", latembed::to_string(outcome.termination).c_str());
    return outcome.exit_code;
}

int cmd_validate(const std::string& config_path) {
    const latembed::ConfigParse parsed = latembed::parse_config_file(config_path);
    for (const std::string& d : parsed.diagnostics) std::printf("%s\n", d.c_str());
    return parsed.ok() ? 0 : 2;
}

int cmd_demo(const std::string& name, std::string out_path) {
    std::string text;
    try {
        text = latembed::demo_config_text(name);
    } catch (const latembed::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    if (out_path.empty()) out_path = "latembed_demo_" + name + ".json";
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
        return 1;
    }
    out << text;
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Embed integer-lattice point sets onto smooth manifolds"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 1;
    auto* run = app.add_subcommand("run", "Execute an embedding run from a config file");
    run->add_option("config", config_path, "Run configuration file")->required();
    run->add_option("--threads", threads, "Worker thread count")->check(CLI::PositiveNumber);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a config file without running");
    validate->add_option("config", validate_path, "Run configuration file")->required();

    std::string demo_name;
    std::string demo_out;
    auto* demo = app.add_subcommand("demo", "Write a built-in demo config");
    demo->add_option("name", demo_name, "Demo name: plane, sphere or torus")->required();
    demo->add_option("--out", demo_out, "Output file (default latembed_demo_<name>.json)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, threads);
        if (validate->parsed()) return cmd_validate(validate_path);
        if (demo->parsed()) return cmd_demo(demo_name, demo_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
