#include "commands.hpp"

#include "blockboot/bootstrap.hpp"
#include "blockboot/config.hpp"
#include "blockboot/errors.hpp"
#include "blockboot/experiment.hpp"
#include "blockboot/generators.hpp"
#include "blockboot/io.hpp"
#include "blockboot/parallel.hpp"
#include "blockboot/vmstat.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>

namespace blockboot::cli {

namespace {

using nlohmann::json;

HilbertSample load_sample(const std::string& path, const std::string& grid) {
    if (grid.empty()) return io::read_sample_csv(path);
    return io::read_sample_csv(path, std::filesystem::path(grid));
}

BlockPlan make_plan(std::size_t n, const PlanOptions& opt) {
    if (opt.block_length == "auto") return block_length_schedule(n, opt.exponent, opt.freeze_dyadic);
    std::size_t p = 0;
    const auto& s = opt.block_length;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), p);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("--block-length must be a positive integer or 'auto'");
    }
    return BlockPlan::make(n, p, opt.freeze_dyadic);
}

void warn_about_tail(const BlockPlan& plan, const std::string& what) {
    if (plan.discarded() > 0) {
        std::cerr << "warning: " << what << ": the last " << plan.discarded()
                  << " observation(s) do not fill a block and are ignored (n=" << plan.n
                  << ", p=" << plan.p << ", k=" << plan.k << ")\n";
    }
}

json plan_json(const BlockPlan& plan) {
    return json{{"n", plan.n},
                {"p", plan.p},
                {"k", plan.k},
                {"used", plan.used()},
                {"discarded", plan.discarded()},
                {"dyadic_freeze", plan.dyadic_freeze}};
}

json software_json() {
    return json{{"name", "blockboot"}, {"version", std::string(software_version())}};
}

void emit(const json& report, const std::string& path) {
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

json summarize(const std::vector<double>& replicates) {
    const double mean =
        std::accumulate(replicates.begin(), replicates.end(), 0.0) / static_cast<double>(replicates.size());
    json quantiles;
    for (const auto& [label, q] : {std::pair{"0.5", 0.5}, {"0.9", 0.9}, {"0.95", 0.95}, {"0.99", 0.99}}) {
        quantiles[label] = empirical_quantile(replicates, q);
    }
    return json{{"count", replicates.size()}, {"mean", mean}, {"quantiles", quantiles}};
}

// Observed statistic and bootstrap replicates -> test report.
json test_report(const std::string& statistic, double observed, const std::vector<double>& replicates,
                 double level, const BlockPlan& plan, std::uint64_t seed) {
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("--level must lie in (0, 1)");
    const double critical = empirical_quantile(replicates, 1.0 - level);
    const bool reject = observed > critical;
    return json{{"schema", 1},
                {"software", software_json()},
                {"statistic", statistic},
                {"observed", observed},
                {"critical_value", critical},
                {"p_value", bootstrap_p_value(replicates, observed)},
                {"level", level},
                {"decision", reject ? "reject" : "retain"},
                {"replicates", replicates.size()},
                {"seed", seed},
                {"plan", plan_json(plan)},
                {"degenerate", plan.degenerate()}};
}

}  // namespace

int run_generate(const GenerateOptions& opt) {
    const ConfigFile file = ConfigFile::load(opt.config);
    const ProcessConfig cfg = parse_process_config(file, "process");
    const std::size_t n = opt.n ? *opt.n : file.get_u64("n", 0);
    if (n == 0) throw ConfigError("sample length 'n' must be positive");
    SpacePtr space;
    if (cfg.is_functional()) {
        GridSettings grid;
        grid.points = file.get_u64("grid.points", grid.points);
        grid.lower = file.get_double("grid.lower", grid.lower);
        grid.upper = file.get_double("grid.upper", grid.upper);
        grid.weight = file.get_double("grid.weight", grid.weight);
        space = grid.space();
    }
    const HilbertSample sample = generate(cfg, n, space);
    if (opt.out.empty()) {
        io::write_sample_csv(std::cout, sample);
    } else {
        io::write_sample_csv(std::filesystem::path(opt.out), sample);
    }
    return kExitOk;
}

int run_bootstrap(const BootstrapOptions& opt) {
    const HilbertSample s = load_sample(opt.data, opt.grid);
    const BlockPlan plan = make_plan(s.size(), opt.plan);
    warn_about_tail(plan, "bootstrap");

    BootstrapDistribution dist;
    if (opt.statistic == "mean-norm") {
        const ScalarStatistic stat = [](const HilbertSample& x, const HilbertSample& star, const BlockPlan& pl) {
            return norm(bootstrap_mean_statistic(x, star, pl));
        };
        dist = bootstrap_distribution(s, plan, opt.replicates, stat, opt.seed, opt.statistic, opt.threads);
    } else {
        const BlockPlan star_plan = BlockPlan::make(plan.used(), plan.p);
        const ScalarStatistic stat = [star_plan](const HilbertSample&, const HilbertSample& star, const BlockPlan&) {
            return long_run_variance_estimate(star, star_plan);
        };
        dist = bootstrap_distribution(s, plan, opt.replicates, stat, opt.seed, opt.statistic, opt.threads);
    }
    const auto& reps = dist.scalar_replicates();

    const json report{{"schema", 1},
                      {"software", software_json()},
                      {"statistic", opt.statistic},
                      {"seed", opt.seed},
                      {"plan", plan_json(plan)},
                      {"degenerate", plan.degenerate()},
                      {"long_run_variance", long_run_variance_estimate(s, plan)},
                      {"summary", summarize(reps)}};
    emit(report, opt.out);

    if (!opt.replicates_csv.empty()) {
        std::ofstream out(opt.replicates_csv, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + opt.replicates_csv + "'");
        out << "replicate,value\n";
        for (std::size_t r = 0; r < reps.size(); ++r) out << r << ',' << io::format_double(reps[r]) << '\n';
    }
    return kExitOk;
}

int run_cvm_test(const TestOptions& opt) {
    std::string null_text = opt.null;
    if (!opt.kernel.empty()) {
        if (!opt.kernel.starts_with("cvm:")) throw ConfigError("cvm-test only accepts --kernel cvm:<dist>");
        null_text = opt.kernel.substr(4);
    }
    const HilbertSample s = io::read_sample_csv(opt.data);
    const auto xs = s.scalar_values();
    const BlockPlan plan = make_plan(s.size(), opt.plan);
    warn_about_tail(plan, "cvm-test");

    const NullDistribution null = NullDistribution::parse(null_text);
    const CvmSpec spec = make_cvm_spec(null, parse_cvm_weight(opt.weight), opt.grid_points, xs);
    const double observed = static_cast<double>(s.size()) * cvm_statistic(xs, spec);
    const CvmBootstrap engine(xs, plan, spec);
    const auto dist = bootstrap_distribution_from_choices(
        plan, opt.replicates, [&](std::span<const std::size_t> c) { return engine.replicate(c); }, opt.seed,
        "cvm", opt.threads);

    json report = test_report("cvm", observed, dist.scalar_replicates(), opt.level, plan, opt.seed);
    report["null"] = null.name();
    report["weight"] = std::string(to_string(parse_cvm_weight(opt.weight)));
    report["grid_points"] = spec.grid().size();
    emit(report, opt.out);
    return kExitOk;
}

int run_vstat_test(const TestOptions& opt) {
    const Kernel kernel = parse_kernel(opt.kernel, opt.grid_points);
    const HilbertSample s = io::read_sample_csv(opt.data);
    const auto xs = s.scalar_values();
    const BlockPlan plan = make_plan(s.size(), opt.plan);
    warn_about_tail(plan, "vstat-test");

    const double observed = static_cast<double>(s.size()) * v_statistic(xs, kernel, opt.threads);
    const VStatBootstrap engine(xs, plan, kernel, opt.threads);
    const double kp = static_cast<double>(plan.used());
    const auto dist = bootstrap_distribution_from_choices(
        plan, opt.replicates, [&](std::span<const std::size_t> c) { return kp * engine.replicate(c); },
        opt.seed, "vstat:" + opt.kernel, opt.threads);

    // Probe the degeneracy condition on an even grid over the sample range.
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    std::vector<double> probes(32);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        probes[i] = *lo + (*hi - *lo) * static_cast<double>(i) / static_cast<double>(probes.size() - 1);
    }

    json report = test_report("vstat:" + opt.kernel, observed, dist.scalar_replicates(), opt.level, plan, opt.seed);
    report["kernel"] = kernel.name();
    report["degeneracy_diagnostic"] = degeneracy_diagnostic(xs, kernel, probes);
    emit(report, opt.out);
    return kExitOk;
}

int run_two_sample(const TwoSampleOptions& opt) {
    const HilbertSample x = load_sample(opt.data_x, opt.grid);
    const HilbertSample y = load_sample(opt.data_y, opt.grid);
    require_same_space(x.space(), y.space());
    const BlockPlan plan_x = make_plan(x.size(), opt.plan);
    const BlockPlan plan_y = make_plan(y.size(), opt.plan);
    warn_about_tail(plan_x, "two-sample (x)");
    warn_about_tail(plan_y, "two-sample (y)");

    const BlockSums sums_x(x, plan_x);
    const BlockSums sums_y(y, plan_y);
    const double observed = norm(sums_x.center() - sums_y.center());
    const std::uint64_t seed_x = derive_seed(opt.seed, 0);
    const std::uint64_t seed_y = derive_seed(opt.seed, 1);
    std::vector<double> reps(opt.replicates);
    parallel_for(opt.replicates, opt.threads, [&](std::size_t b) {
        Stream sx(derive_seed(seed_x, b));
        Stream sy(derive_seed(seed_y, b));
        const auto cx = draw_block_choices(plan_x, sx);
        const auto cy = draw_block_choices(plan_y, sy);
        reps[b] = norm(sums_x.centered_mean(cx) - sums_y.centered_mean(cy));
    });

    json report = test_report("two-sample-mean", observed, reps, opt.level, plan_x, opt.seed);
    report["plan_y"] = plan_json(plan_y);
    emit(report, opt.out);
    return kExitOk;
}

int run_montecarlo(const MonteCarloOptions& opt) {
    const ExperimentConfig cfg = load_experiment_config(opt.config);
    const ExperimentReport report = run_experiment(cfg, opt.threads);
    write_report_files(report, opt.out);
    if (report.degenerate()) {
        std::cerr << "warning: k = 1, every bootstrap sample equals the original\n";
    }
    if (report.aggregates.failure_policy_breached) {
        std::cerr << "error: " << report.aggregates.failed << " of " << report.records.size()
                  << " replications failed\n";
        return kExitFailurePolicy;
    }
    return kExitOk;
}

}  // namespace blockboot::cli
