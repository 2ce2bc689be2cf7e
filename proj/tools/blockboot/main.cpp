#include "commands.hpp"

#include "blockboot/errors.hpp"
#include "blockboot/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_plan_options(CLI::App* cmd, blockboot::cli::PlanOptions& plan) {
    cmd->add_option("--block-length", plan.block_length, "Block length, or 'auto' for the schedule")
        ->capture_default_str();
    cmd->add_option("--exponent", plan.exponent, "Schedule exponent in (0, 1)")->capture_default_str();
    cmd->add_flag("--freeze-dyadic", plan.freeze_dyadic, "Hold the block length fixed on dyadic ranges");
}

void add_test_options(CLI::App* cmd, blockboot::cli::TestOptions& opt, bool cvm) {
    cmd->add_option("--data", opt.data, "Scalar sample CSV")->required();
    cmd->add_option("--kernel", opt.kernel,
                    cvm ? "Optional cvm:<dist>, same as --null" : "product | gaussian:<bandwidth> | cvm:<dist>");
    if (cvm) {
        cmd->add_option("--null", opt.null, "Hypothesized law: uniform[:a:b] | gaussian[:mu:sigma]")
            ->capture_default_str();
        cmd->add_option("--weight", opt.weight, "Weight function: unit | density | zero")->capture_default_str();
        cmd->add_option("--grid-points", opt.grid_points, "Uniform quadrature points")->capture_default_str();
    }
    add_plan_options(cmd, opt.plan);
    cmd->add_option("--replicates", opt.replicates, "Bootstrap replicates B")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Bootstrap seed")->capture_default_str();
    cmd->add_option("--level", opt.level, "Test level alpha")->capture_default_str();
    cmd->add_option("--out", opt.out, "JSON report path (stdout when omitted)");
    cmd->add_option("--threads", opt.threads, "Worker threads (0: all cores)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace blockboot::cli;
    CLI::App app{"Block bootstrap inference for dependent functional and real-valued data"};
    app.set_version_flag("--version", std::string(blockboot::software_version()));
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Simulate a process and write it as CSV");
    generate->add_option("--config", gen.config, "Process config file")->required();
    generate->add_option("--out", gen.out, "Output CSV (stdout when omitted)");
    generate->add_option("--n", gen.n, "Sample length (overrides the config)");

    BootstrapOptions boot;
    auto* bootstrap = app.add_subcommand("bootstrap", "Block bootstrap distribution of a mean statistic");
    bootstrap->add_option("--data", boot.data, "Sample CSV")->required();
    bootstrap->add_option("--grid", boot.grid, "Sidecar file with #grid / #weight lines");
    add_plan_options(bootstrap, boot.plan);
    bootstrap->add_option("--replicates", boot.replicates, "Bootstrap replicates B")->capture_default_str();
    bootstrap->add_option("--seed", boot.seed, "Bootstrap seed")->capture_default_str();
    bootstrap->add_option("--statistic", boot.statistic, "mean-norm | lrv")
        ->check(CLI::IsMember({"mean-norm", "lrv"}))
        ->capture_default_str();
    bootstrap->add_option("--out", boot.out, "JSON report path (stdout when omitted)");
    bootstrap->add_option("--replicates-csv", boot.replicates_csv, "Also write raw replicates here");
    bootstrap->add_option("--threads", boot.threads, "Worker threads (0: all cores)")->capture_default_str();

    TestOptions cvm_opt;
    auto* cvm_test = app.add_subcommand("cvm-test", "Cramer-von Mises goodness-of-fit test");
    add_test_options(cvm_test, cvm_opt, true);

    TestOptions vstat_opt;
    auto* vstat_test = app.add_subcommand("vstat-test", "Degenerate V-statistic test");
    add_test_options(vstat_test, vstat_opt, false);
    vstat_test->get_option("--kernel")->required();

    TwoSampleOptions two;
    auto* two_sample = app.add_subcommand("two-sample", "Test equality of two mean functions");
    two_sample->add_option("--data-x", two.data_x, "First sample CSV")->required();
    two_sample->add_option("--data-y", two.data_y, "Second sample CSV")->required();
    two_sample->add_option("--grid", two.grid, "Sidecar file with #grid / #weight lines");
    add_plan_options(two_sample, two.plan);
    two_sample->add_option("--replicates", two.replicates, "Bootstrap replicates B")->capture_default_str();
    two_sample->add_option("--seed", two.seed, "Bootstrap seed")->capture_default_str();
    two_sample->add_option("--level", two.level, "Test level alpha")->capture_default_str();
    two_sample->add_option("--out", two.out, "JSON report path (stdout when omitted)");
    two_sample->add_option("--threads", two.threads, "Worker threads (0: all cores)")->capture_default_str();

    MonteCarloOptions mc;
    auto* montecarlo = app.add_subcommand("montecarlo", "Run a Monte Carlo experiment from a config file");
    montecarlo->add_option("--config", mc.config, "Experiment config file")->required();
    montecarlo->add_option("--out", mc.out, "Output directory")->required();
    montecarlo->add_option("--threads", mc.threads, "Worker threads (0: all cores)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*generate) return run_generate(gen);
        if (*bootstrap) return run_bootstrap(boot);
        if (*cvm_test) return run_cvm_test(cvm_opt);
        if (*vstat_test) return run_vstat_test(vstat_opt);
        if (*two_sample) return run_two_sample(two);
        if (*montecarlo) return run_montecarlo(mc);
    } catch (const blockboot::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
