#pragma once

// Monte Carlo experiments that check the bootstrap at fixed sample size.
//
// Each of the M replications draws a fresh path, computes the observed
// statistic and B bootstrap replicates, and records the bootstrap critical
// value at level 1 - alpha. Replication r draws everything from
// derive_seed(master_seed, r):
//   child 0  process X        child 2  bootstrap of X
//   child 1  process Y        child 3  bootstrap of Y
// so a record depends on nothing but its own index, and reports are
// identical for any number of threads.
//
// The "truth" for distribution distances is the pooled Monte Carlo law of
// the observed statistic at the same n. Where the asymptotic law is known
// in closed form, distances to it are reported as well.

#include "blockboot/bootstrap.hpp"
#include "blockboot/cvm.hpp"
#include "blockboot/generators.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace blockboot {

class ConfigFile;

enum class StatisticKind { mean_norm, two_sample_mean, cvm, vstat };

struct PlanSettings {
    std::optional<std::size_t> block_length;  ///< empty: use the schedule
    double exponent = kDefaultBlockExponent;
    bool freeze_dyadic = true;

    [[nodiscard]] BlockPlan plan_for(std::size_t n) const;
};

/// Grid for functional processes: `points` abscissae on [lower, upper] with
/// constant pointwise weight `weight`.
struct GridSettings {
    std::size_t points = 32;
    double lower = 0.0;
    double upper = 1.0;
    double weight = 1.0;

    [[nodiscard]] SpacePtr space() const;
};

struct CvmSettings {
    NullDistribution null;
    CvmWeight weight = CvmWeight::unit;
    std::size_t points = kDefaultCvmGridPoints;
};

struct ExperimentConfig {
    ProcessConfig process;
    std::optional<ProcessConfig> process_y;  ///< two-sample only; defaults to `process`
    bool identical_samples = false;          ///< two-sample only; Y is the X sample itself
    std::size_t n = 0;
    PlanSettings plan;
    StatisticKind statistic = StatisticKind::mean_norm;
    std::string kernel;  ///< vstat only
    std::size_t B = 0;
    std::size_t M = 0;
    double level = 0.05;
    std::uint64_t master_seed = 0;
    GridSettings grid;
    CvmSettings cvm;

    /// Throws ConfigError on violated constraints.
    void validate() const;

    /// "mean-norm", "two-sample-mean", "cvm" or "vstat:<kernel>".
    [[nodiscard]] std::string statistic_label() const;
};

[[nodiscard]] ExperimentConfig parse_experiment_config(const ConfigFile& file);
[[nodiscard]] ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ReplicationRecord {
    std::size_t index = 0;
    bool failed = false;
    std::string error;
    double observed = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
    std::optional<double> ci_lower;
    std::optional<double> ci_upper;
};

/// Fractions failed > this fail the run.
inline constexpr double kMaxFailureFraction = 0.01;

struct ExperimentAggregates {
    std::size_t completed = 0;
    std::size_t failed = 0;
    double rejection_rate = 0.0;
    double rejection_stderr = 0.0;
    double mean_observed = 0.0;
    double mean_critical_value = 0.0;
    std::optional<double> ks_bootstrap_vs_montecarlo;
    std::optional<double> reference_variance;
    std::optional<double> ks_montecarlo_vs_reference;
    std::optional<double> ks_bootstrap_vs_reference;
    bool failure_policy_breached = false;

    friend bool operator==(const ExperimentAggregates&, const ExperimentAggregates&) = default;
};

struct ExperimentReport {
    ExperimentConfig config;
    BlockPlan plan;
    std::vector<ReplicationRecord> records;
    /// Bootstrap replicates of all completed replications in index order.
    /// Kept in memory for distance computations; not serialized.
    std::vector<double> pooled_bootstrap;
    ExperimentAggregates aggregates;

    [[nodiscard]] bool degenerate() const noexcept { return plan.degenerate(); }

    /// Empirical coverage, 1 - rejection rate (mean experiments).
    [[nodiscard]] double coverage() const noexcept { return 1.0 - aggregates.rejection_rate; }

    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] std::string records_csv() const;
    [[nodiscard]] std::string summary_csv() const;
};

/// Recomputes the aggregates from records and pooled replicates.
[[nodiscard]] ExperimentAggregates compute_aggregates(const ExperimentConfig& config,
                                                      const std::vector<ReplicationRecord>& records,
                                                      const std::vector<double>& pooled_bootstrap);

[[nodiscard]] ExperimentReport run_mean_experiment(const ExperimentConfig& cfg, std::size_t threads = 1);
[[nodiscard]] ExperimentReport run_two_sample_experiment(const ExperimentConfig& cfg,
                                                         std::size_t threads = 1);
[[nodiscard]] ExperimentReport run_cvm_experiment(const ExperimentConfig& cfg, std::size_t threads = 1);
[[nodiscard]] ExperimentReport run_vstat_experiment(const ExperimentConfig& cfg, std::size_t threads = 1);

/// Dispatches on cfg.statistic.
[[nodiscard]] ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t threads = 1);

/// Writes report.json, records.csv and summary.csv into `dir`.
void write_report_files(const ExperimentReport& report, const std::filesystem::path& dir);

/// p-value (1 + #{replicates >= observed}) / (B + 1).
[[nodiscard]] double bootstrap_p_value(std::span<const double> replicates, double observed);

[[nodiscard]] std::string_view software_version() noexcept;

}  // namespace blockboot
