#include "blockboot/experiment.hpp"

#include "blockboot/config.hpp"
#include "blockboot/distances.hpp"
#include "blockboot/errors.hpp"
#include "blockboot/parallel.hpp"
#include "blockboot/random.hpp"
#include "blockboot/vmstat.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#ifndef BLOCKBOOT_VERSION
#define BLOCKBOOT_VERSION "0.0.0"
#endif

namespace blockboot {

namespace {

constexpr std::uint64_t kProcessX = 0;
constexpr std::uint64_t kProcessY = 1;
constexpr std::uint64_t kBootstrapX = 2;
constexpr std::uint64_t kBootstrapY = 3;

struct ReplicationOutcome {
    ReplicationRecord record;
    std::vector<double> replicates;
    bool decided = false;
};

// Fills in critical value, p-value and decision from the replicates.
void decide(ReplicationOutcome& out, double level) {
    auto& rec = out.record;
    if (!std::isfinite(rec.observed)) throw Error("observed statistic is not finite");
    for (double v : out.replicates) {
        if (!std::isfinite(v)) throw Error("bootstrap replicate is not finite");
    }
    rec.critical_value = empirical_quantile(out.replicates, 1.0 - level);
    rec.p_value = bootstrap_p_value(out.replicates, rec.observed);
    rec.reject = rec.observed > rec.critical_value;
    out.decided = true;
}

HilbertSample draw_path(const ProcessConfig& base, std::uint64_t seed, std::size_t n,
                        const SpacePtr& space) {
    ProcessConfig cfg = base;
    cfg.seed = seed;
    return generate(cfg, n, space);
}

std::vector<double> replicates_from_choices(const BlockPlan& plan, std::size_t B, std::uint64_t seed,
                                            const ChoiceStatistic& statistic) {
    auto dist = bootstrap_distribution_from_choices(plan, B, statistic, seed, "replication");
    return std::get<std::vector<double>>(std::move(dist.replicates));
}

ExperimentReport run_replications(
    const ExperimentConfig& cfg, std::size_t threads,
    const std::function<void(std::uint64_t seed, const BlockPlan& plan, ReplicationOutcome& out)>& body) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;
    report.plan = cfg.plan.plan_for(cfg.n);
    std::vector<ReplicationOutcome> outcomes(cfg.M);
    parallel_for(cfg.M, threads, [&](std::size_t r) {
        ReplicationOutcome& out = outcomes[r];
        out.record.index = r;
        try {
            body(derive_seed(cfg.master_seed, r), report.plan, out);
            if (!out.decided) decide(out, cfg.level);
        } catch (const std::exception& e) {
            out.record = ReplicationRecord{};
            out.record.index = r;
            out.record.failed = true;
            out.record.error = e.what();
            out.replicates.clear();
        }
    });
    report.records.reserve(cfg.M);
    for (auto& out : outcomes) {
        report.records.push_back(std::move(out.record));
        report.pooled_bootstrap.insert(report.pooled_bootstrap.end(), out.replicates.begin(),
                                       out.replicates.end());
    }
    report.aggregates = compute_aggregates(cfg, report.records, report.pooled_bootstrap);
    return report;
}

void require_statistic(const ExperimentConfig& cfg, StatisticKind kind, const char* runner) {
    if (cfg.statistic != kind) {
        throw ConfigError(std::string(runner) + " cannot run statistic '" + cfg.statistic_label() + "'");
    }
}

SpacePtr space_for(const ExperimentConfig& cfg) {
    return cfg.process.is_functional() ? cfg.grid.space() : GridSpace::scalar();
}

// Asymptotic variance parameter of the observed statistic, when known.
std::optional<double> reference_variance(const ExperimentConfig& cfg) {
    if (cfg.process.is_functional()) return std::nullopt;
    const auto lrv = long_run_trace(cfg.process, GridSpace::scalar());
    if (!lrv) return std::nullopt;
    switch (cfg.statistic) {
        case StatisticKind::mean_norm:
            return lrv;
        case StatisticKind::vstat:
            if (cfg.kernel == "product" && cfg.process.location == 0.0) return lrv;
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

}  // namespace

BlockPlan PlanSettings::plan_for(std::size_t n) const {
    if (block_length) return BlockPlan::make(n, *block_length, freeze_dyadic);
    return block_length_schedule(n, exponent, freeze_dyadic);
}

SpacePtr GridSettings::space() const {
    if (points == 1) return GridSpace::make({lower}, {weight});
    const auto uniform = GridSpace::uniform(lower, upper, points);
    const std::vector<double> w(points, weight);
    return GridSpace::trapezoid(std::vector<double>(uniform->grid().begin(), uniform->grid().end()), w);
}

void ExperimentConfig::validate() const {
    process.validate();
    if (process_y) process_y->validate();
    if (n == 0) throw ConfigError("n must be positive");
    if (B == 0) throw ConfigError("replicates (B) must be positive");
    if (M == 0) throw ConfigError("replications (M) must be positive");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
    (void)plan.plan_for(n);
    const bool functional = process.is_functional();
    if (process_y && process_y->is_functional() != functional) {
        throw ConfigError("both samples of a two-sample experiment must live in the same space");
    }
    switch (statistic) {
        case StatisticKind::cvm:
        case StatisticKind::vstat:
            if (functional) {
                throw ConfigError("statistic '" + statistic_label() + "' needs a scalar process");
            }
            break;
        default:
            break;
    }
    if (statistic == StatisticKind::vstat) (void)parse_kernel(kernel, 16);
    if (functional) (void)grid.space();
}

std::string ExperimentConfig::statistic_label() const {
    switch (statistic) {
        case StatisticKind::mean_norm: return "mean-norm";
        case StatisticKind::two_sample_mean: return "two-sample-mean";
        case StatisticKind::cvm: return "cvm";
        case StatisticKind::vstat: return "vstat:" + kernel;
    }
    return "?";
}

ExperimentConfig parse_experiment_config(const ConfigFile& file) {
    ExperimentConfig cfg;
    const std::string statistic = file.get_string("statistic", "");
    if (statistic == "mean-norm") {
        cfg.statistic = StatisticKind::mean_norm;
    } else if (statistic == "two-sample-mean") {
        cfg.statistic = StatisticKind::two_sample_mean;
    } else if (statistic == "cvm") {
        cfg.statistic = StatisticKind::cvm;
    } else if (statistic.starts_with("vstat:")) {
        cfg.statistic = StatisticKind::vstat;
        cfg.kernel = statistic.substr(6);
    } else {
        throw ConfigError("unknown or missing statistic '" + statistic + "'");
    }
    cfg.process = parse_process_config(file, "process");
    if (file.has_section("process_y")) cfg.process_y = parse_process_config(file, "process_y");
    cfg.identical_samples = file.get_bool("identical_samples", false);
    cfg.n = file.get_u64("n", 0);
    cfg.B = file.get_u64("replicates", 0);
    cfg.M = file.get_u64("replications", 0);
    cfg.level = file.get_double("level", cfg.level);
    cfg.master_seed = file.get_u64("master_seed", 0);

    const std::string block_length = file.get_string("plan.block_length", "auto");
    if (block_length != "auto") cfg.plan.block_length = file.get_u64("plan.block_length", 0);
    cfg.plan.exponent = file.get_double("plan.exponent", cfg.plan.exponent);
    cfg.plan.freeze_dyadic = file.get_bool("plan.freeze_dyadic", cfg.plan.freeze_dyadic);

    cfg.grid.points = file.get_u64("grid.points", cfg.grid.points);
    cfg.grid.lower = file.get_double("grid.lower", cfg.grid.lower);
    cfg.grid.upper = file.get_double("grid.upper", cfg.grid.upper);
    cfg.grid.weight = file.get_double("grid.weight", cfg.grid.weight);

    cfg.cvm.null = NullDistribution::parse(file.get_string("cvm.null", "uniform:0:1"));
    cfg.cvm.weight = parse_cvm_weight(file.get_string("cvm.weight", "unit"));
    cfg.cvm.points = file.get_u64("cvm.points", cfg.cvm.points);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(ConfigFile::load(path));
}

double bootstrap_p_value(std::span<const double> replicates, double observed) {
    const auto at_least = std::count_if(replicates.begin(), replicates.end(),
                                        [observed](double v) { return v >= observed; });
    return (1.0 + static_cast<double>(at_least)) / (static_cast<double>(replicates.size()) + 1.0);
}

std::string_view software_version() noexcept { return BLOCKBOOT_VERSION; }

ExperimentAggregates compute_aggregates(const ExperimentConfig& config,
                                        const std::vector<ReplicationRecord>& records,
                                        const std::vector<double>& pooled_bootstrap) {
    ExperimentAggregates agg;
    std::vector<double> observed;
    std::size_t rejections = 0;
    double critical_sum = 0.0;
    for (const auto& rec : records) {
        if (rec.failed) {
            ++agg.failed;
            continue;
        }
        ++agg.completed;
        observed.push_back(rec.observed);
        critical_sum += rec.critical_value;
        if (rec.reject) ++rejections;
    }
    agg.failure_policy_breached =
        static_cast<double>(agg.failed) > kMaxFailureFraction * static_cast<double>(records.size());
    if (agg.completed == 0) return agg;

    const double m = static_cast<double>(agg.completed);
    agg.rejection_rate = static_cast<double>(rejections) / m;
    agg.rejection_stderr = std::sqrt(agg.rejection_rate * (1.0 - agg.rejection_rate) / m);
    agg.mean_observed = std::accumulate(observed.begin(), observed.end(), 0.0) / m;
    agg.mean_critical_value = critical_sum / m;
    if (!pooled_bootstrap.empty()) {
        agg.ks_bootstrap_vs_montecarlo = kolmogorov_distance(pooled_bootstrap, observed);
    }
    agg.reference_variance = reference_variance(config);
    if (agg.reference_variance) {
        const double var = *agg.reference_variance;
        std::function<double(double)> cdf;
        if (config.statistic == StatisticKind::mean_norm) {
            cdf = [var](double x) { return half_normal_cdf(x, var); };
        } else {
            cdf = [var](double x) { return scaled_chi_square1_cdf(x, var); };
        }
        agg.ks_montecarlo_vs_reference = kolmogorov_distance(observed, cdf);
        if (!pooled_bootstrap.empty()) {
            agg.ks_bootstrap_vs_reference = kolmogorov_distance(pooled_bootstrap, cdf);
        }
    }
    return agg;
}

ExperimentReport run_mean_experiment(const ExperimentConfig& cfg, std::size_t threads) {
    require_statistic(cfg, StatisticKind::mean_norm, "run_mean_experiment");
    const SpacePtr space = space_for(cfg);
    const GridFunction mu = true_mean(cfg.process, space);
    return run_replications(cfg, threads, [&](std::uint64_t seed, const BlockPlan& plan, ReplicationOutcome& out) {
        const HilbertSample x = draw_path(cfg.process, derive_seed(seed, kProcessX), cfg.n, space);
        const BlockSums sums(x, plan);
        const double root_kp = std::sqrt(static_cast<double>(plan.used()));
        out.replicates = replicates_from_choices(plan, cfg.B, derive_seed(seed, kBootstrapX),
                                                 [&](std::span<const std::size_t> choices) {
                                                     return norm(sums.mean_statistic(choices));
                                                 });
        out.record.observed = norm((sums.center() - mu).scaled(root_kp));
        decide(out, cfg.level);
        if (x.space()->is_scalar()) {
            const double half_width = out.record.critical_value / root_kp;
            out.record.ci_lower = sums.center()[0] - half_width;
            out.record.ci_upper = sums.center()[0] + half_width;
        }
    });
}

ExperimentReport run_two_sample_experiment(const ExperimentConfig& cfg, std::size_t threads) {
    require_statistic(cfg, StatisticKind::two_sample_mean, "run_two_sample_experiment");
    const SpacePtr space = space_for(cfg);
    const ProcessConfig& process_y = cfg.process_y ? *cfg.process_y : cfg.process;
    return run_replications(cfg, threads, [&](std::uint64_t seed, const BlockPlan& plan, ReplicationOutcome& out) {
        const HilbertSample x = draw_path(cfg.process, derive_seed(seed, kProcessX), cfg.n, space);
        const HilbertSample y = cfg.identical_samples
                                    ? x
                                    : draw_path(process_y, derive_seed(seed, kProcessY), cfg.n, space);
        const BlockSums sums_x(x, plan);
        const BlockSums sums_y(y, plan);
        out.record.observed = norm(sums_x.center() - sums_y.center());
        const std::uint64_t boot_x = derive_seed(seed, kBootstrapX);
        const std::uint64_t boot_y = derive_seed(seed, kBootstrapY);
        out.replicates.resize(cfg.B);
        for (std::size_t b = 0; b < cfg.B; ++b) {
            Stream stream_x(derive_seed(boot_x, b));
            Stream stream_y(derive_seed(boot_y, b));
            const auto choices_x = draw_block_choices(plan, stream_x);
            const auto choices_y = draw_block_choices(plan, stream_y);
            out.replicates[b] = norm(sums_x.centered_mean(choices_x) - sums_y.centered_mean(choices_y));
        }
    });
}

ExperimentReport run_cvm_experiment(const ExperimentConfig& cfg, std::size_t threads) {
    require_statistic(cfg, StatisticKind::cvm, "run_cvm_experiment");
    return run_replications(cfg, threads, [&](std::uint64_t seed, const BlockPlan& plan, ReplicationOutcome& out) {
        const HilbertSample x = draw_path(cfg.process, derive_seed(seed, kProcessX), cfg.n, nullptr);
        const auto xs = x.scalar_values();
        const CvmSpec spec = make_cvm_spec(cfg.cvm.null, cfg.cvm.weight, cfg.cvm.points, xs);
        out.record.observed = static_cast<double>(cfg.n) * cvm_statistic(xs, spec);
        const CvmBootstrap engine(xs, plan, spec);
        out.replicates = replicates_from_choices(
            plan, cfg.B, derive_seed(seed, kBootstrapX),
            [&](std::span<const std::size_t> choices) { return engine.replicate(choices); });
    });
}

ExperimentReport run_vstat_experiment(const ExperimentConfig& cfg, std::size_t threads) {
    require_statistic(cfg, StatisticKind::vstat, "run_vstat_experiment");
    const Kernel kernel = parse_kernel(cfg.kernel);
    return run_replications(cfg, threads, [&](std::uint64_t seed, const BlockPlan& plan, ReplicationOutcome& out) {
        const HilbertSample x = draw_path(cfg.process, derive_seed(seed, kProcessX), cfg.n, nullptr);
        const auto xs = x.scalar_values();
        out.record.observed = static_cast<double>(cfg.n) * v_statistic(xs, kernel);
        const VStatBootstrap engine(xs, plan, kernel);
        const double kp = static_cast<double>(plan.used());
        out.replicates = replicates_from_choices(
            plan, cfg.B, derive_seed(seed, kBootstrapX),
            [&](std::span<const std::size_t> choices) { return kp * engine.replicate(choices); });
    });
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t threads) {
    switch (cfg.statistic) {
        case StatisticKind::mean_norm: return run_mean_experiment(cfg, threads);
        case StatisticKind::two_sample_mean: return run_two_sample_experiment(cfg, threads);
        case StatisticKind::cvm: return run_cvm_experiment(cfg, threads);
        case StatisticKind::vstat: return run_vstat_experiment(cfg, threads);
    }
    throw ConfigError("unknown statistic");
}

}  // namespace blockboot
