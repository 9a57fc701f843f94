// Command-line driver: check, solve, uniqueness, oracle.

#include <iostream>

#include "CLI11.hpp"
#include "orlicz/cli.hpp"

namespace {

std::vector<orlicz::BodySpec> split_bodies(const std::string& list) {
    std::vector<orlicz::BodySpec> specs;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const auto comma = list.find(',', pos);
        const std::string item = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!item.empty()) specs.push_back(orlicz::parse_body_spec(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return specs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gauss-like curvature flow for the Orlicz-Aleksandrov problem"};
    app.require_subcommand(1);

    std::string config_path, out_dir, bodies;
    auto* check = app.add_subcommand("check", "solvability and uniqueness-condition report");
    check->add_option("--config", config_path)->required();
    auto* solve = app.add_subcommand("solve", "run the flow and write artifacts");
    solve->add_option("--config", config_path)->required();
    solve->add_option("--out", out_dir, "output directory (overrides output.dir)");
    auto* uniq = app.add_subcommand("uniqueness", "run from several bodies and compare limits");
    uniq->add_option("--config", config_path)->required();
    uniq->add_option("--bodies", bodies, "comma separated: ellipse:a:b, offset_ball:c:vx:vy, ball:c, file:path")
        ->required();
    auto* oracle = app.add_subcommand("oracle", "cross-check battery on the configured body");
    oracle->add_option("--config", config_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : orlicz::exit_config;
    }

    orlicz::configure_threads_from_env();
    try {
        const orlicz::RunConfig config = orlicz::load_config(config_path);
        if (check->parsed()) return orlicz::cmd_check(config, std::cout);
        if (solve->parsed()) {
            return orlicz::cmd_solve(config, out_dir.empty() ? config.output_dir : std::filesystem::path(out_dir), std::cout, std::cerr);
        }
        if (uniq->parsed()) return orlicz::cmd_uniqueness(config, split_bodies(bodies), std::cout, std::cerr);
        return orlicz::cmd_oracle(config, std::cout, std::cerr);
    } catch (const orlicz::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return orlicz::exit_config;
    } catch (const orlicz::GridError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return orlicz::exit_config;
    } catch (const orlicz::ConvexityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return orlicz::exit_flow_failure;
    }
}
