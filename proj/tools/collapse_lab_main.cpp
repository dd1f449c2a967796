#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "collapselab/coherence.hpp"
#include "collapselab/errors.hpp"
#include "collapselab/scenario.hpp"
#include "collapselab/version.hpp"

namespace {

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::optional<std::string> out;
    std::optional<std::string> format;
};

collapselab::OutputFormat parse_format_flag(const std::string& name) {
    if (name == "json") return collapselab::OutputFormat::json;
    if (name == "csv") return collapselab::OutputFormat::csv;
    throw collapselab::ValidationError("--format: expected \"json\" or \"csv\", got \"" + name +
                                       "\"");
}

int run_command(const RunOptions& options) {
    collapselab::ScenarioConfig config = collapselab::load_config(options.config_path);
    if (options.seed) config.seed = *options.seed;
    if (options.shots) {
        if (*options.shots < 1) {
            throw collapselab::ValidationError("--shots: must be at least 1");
        }
        config.shots = *options.shots;
    }
    if (options.out) config.output.path = *options.out;
    if (options.format) config.output.format = parse_format_flag(*options.format);

    const collapselab::RunReport report = collapselab::run(config);
    collapselab::emit(report, config.output.format, config.output.path);
    return 0;
}

int validate_command(const std::string& path) {
    const collapselab::ScenarioConfig config = collapselab::load_config(path);
    std::cout << "valid: kind=" << collapselab::to_string(config.kind) << " seed=" << config.seed
              << " shots=" << config.shots << "\n";
    return 0;
}

int oracle_command(double p, double gamma_re, double gamma_im, double theta, double phi) {
    collapselab::QubitParams params;
    params.p = p;
    params.gamma = {gamma_re, gamma_im};
    params.theta = theta;
    params.phi = phi;
    const collapselab::QubitOracleValues values = collapselab::qubit_oracle(params);

    nlohmann::json doc;
    doc["p_direct_plus"] = values.p_direct_plus;
    doc["p_direct_minus"] = values.p_direct_minus;
    doc["p_post_plus"] = values.p_post_plus;
    doc["p_post_minus"] = values.p_post_minus;
    doc["residual"] = values.residual;
    doc["trace_distance"] = values.trace_distance;
    doc["variance_gap_at_optimum"] = values.variance_gap_at_optimum;
    std::cout << doc.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential projective measurement simulator and coherence certifier"};
    app.set_version_flag("--version", std::string(collapselab::version));
    app.require_subcommand(1);

    RunOptions run_options;
    CLI::App* run_cmd = app.add_subcommand("run", "Execute a scenario config");
    run_cmd->add_option("config", run_options.config_path, "Path to a JSON scenario config")
        ->required();
    std::uint64_t seed_flag = 0;
    std::uint64_t shots_flag = 0;
    std::string out_flag;
    std::string format_flag;
    CLI::Option* seed_opt =
        run_cmd->add_option("--seed", seed_flag, "Override the config seed");
    CLI::Option* shots_opt =
        run_cmd->add_option("--shots", shots_flag, "Override the config shot count");
    CLI::Option* out_opt =
        run_cmd->add_option("--out", out_flag, "Override the output path (\"-\" for stdout)");
    CLI::Option* format_opt =
        run_cmd->add_option("--format", format_flag, "Override the output format (json|csv)");

    std::string validate_path;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Load and validate a scenario config");
    validate_cmd->add_option("config", validate_path, "Path to a JSON scenario config")
        ->required();

    double p = 0.5, gamma_re = 0.0, gamma_im = 0.0, theta = 0.0, phi = 0.0;
    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "Print the qubit closed forms for given parameters");
    oracle_cmd->add_option("--p", p, "Population of the +1 outcome")->required();
    oracle_cmd->add_option("--gamma-re", gamma_re, "Re(gamma)")->required();
    oracle_cmd->add_option("--gamma-im", gamma_im, "Im(gamma)")->required();
    oracle_cmd->add_option("--theta", theta, "Second observable polar angle")->required();
    oracle_cmd->add_option("--phi", phi, "Second observable azimuthal angle")->required();

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) {
            if (*seed_opt) run_options.seed = seed_flag;
            if (*shots_opt) run_options.shots = shots_flag;
            if (*out_opt) run_options.out = out_flag;
            if (*format_opt) run_options.format = format_flag;
            return run_command(run_options);
        }
        if (validate_cmd->parsed()) {
            return validate_command(validate_path);
        }
        if (oracle_cmd->parsed()) {
            return oracle_command(p, gamma_re, gamma_im, theta, phi);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const collapselab::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const collapselab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const collapselab::InvalidParamsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const collapselab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
