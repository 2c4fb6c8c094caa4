// adiapass: command-line driver for the triple-dot transfer simulations.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adiapass/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw adiapass::ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = adiapass::cli;

    CLI::App app{"Adiabatic state transfer through a gated triple quantum dot"};
    app.set_version_flag("--version", std::string(cli::version));

    std::string subcommand;
    std::string config_path;
    std::string replay_path;
    std::string out_path;
    std::vector<std::string> sets;

    app.add_option("subcommand", subcommand, "evolve | gap | analytic | sweep-tau | sweep-mu0 | sweep-ratio | compare")
        ->required();
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--replay", replay_path, "reuse the settings recorded in a previous output's header")
        ->excludes("--config");
    app.add_option("--out", out_path, "write CSV here instead of stdout");
    app.add_option("--set", sets, "override a configuration key (key=value), applied after the file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << cli::usage();
        return cli::exit_validation;
    }

    cli::ExperimentConfig config;
    try {
        if (!config_path.empty()) config = cli::parse_config(read_file(config_path));
        if (!replay_path.empty()) config = cli::parse_config(cli::config_from_output(read_file(replay_path)));
        cli::apply_overrides(config, sets);
    } catch (const adiapass::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_validation;
    }

    if (out_path.empty()) return cli::run_subcommand(subcommand, config, std::cout, std::cerr);

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return cli::exit_validation;
    }
    return cli::run_subcommand(subcommand, config, out, std::cerr);
}
