// Command-line driver: run an experiment, dump a kernel profile, or emit an
// instability witness. Errors go to stderr as one JSON object.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bpsi/errors.hpp"
#include "bpsi/experiment.hpp"

namespace {

int report_error(const std::string& kind, const std::string& message) {
    const nlohmann::json record = {{"error", kind}, {"message", message}};
    std::cerr << record.dump() << '\n';
    return 1;
}

std::filesystem::path output_dir(const std::string& flag, const bpsi::ExperimentConfig& cfg) {
    return std::filesystem::path(flag.empty() ? cfg.output.directory : flag);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral reconstruction of a space-dependent source from final-time data"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    double nu_max = 0.0;
    int order = 0;

    auto* run = app.add_subcommand("run", "Run the noise sweep and write results");
    run->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory (default: output.directory)");

    auto* kernel = app.add_subcommand("kernel", "Dump the kernel profile and its zeros");
    kernel->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    kernel->add_option("--nu-max", nu_max, "Upper end of the zero scan")->required()
        ->check(CLI::PositiveNumber);
    kernel->add_option("--out", out, "Output directory (default: output.directory)");

    auto* unstable = app.add_subcommand("unstable", "Emit the instability witness of order n");
    unstable->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    unstable->add_option("--n", order, "Witness order")->required()->check(CLI::PositiveNumber);
    unstable->add_option("--out", out, "Output directory (default: output.directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report_error("usage", e.what());
    }

    try {
        const auto cfg = bpsi::ExperimentConfig::from_file(config_path);
        const auto dir = output_dir(out, cfg);
        if (*run) {
            const auto result = bpsi::run_experiment(cfg);
            bpsi::write_outputs(result, dir);
            for (const auto& row : result.rows) {
                std::printf("eps=%-8.3g alpha=%-10.4g median E_abs=%-10.4g median E_rel=%.4g%%\n",
                            row.epsilon, row.alpha, row.median_e_abs, 100.0 * row.median_e_rel);
            }
            if (result.rate_fit) {
                std::printf("fitted slope %.4f (theory %.4f)\n", result.rate_fit->slope,
                            result.theoretical_exponent);
            }
        } else if (*kernel) {
            std::cout << bpsi::write_kernel_dump(cfg, nu_max, dir).dump(2) << '\n';
        } else {
            std::cout << bpsi::write_instability_dump(cfg, order, dir).dump(2) << '\n';
        }
    } catch (const bpsi::Error& e) {
        return report_error(e.kind(), e.what());
    } catch (const std::exception& e) {
        return report_error("internal", e.what());
    }
    return 0;
}
