#include "blockboot/config.hpp"
#include "blockboot/errors.hpp"
#include "blockboot/experiment.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

using namespace blockboot;

ExperimentConfig mean_config() {
    ExperimentConfig cfg;
    cfg.statistic = StatisticKind::mean_norm;
    cfg.process.kind = ProcessKind::ar1_real;
    cfg.process.phi = 0.3;
    cfg.n = 200;
    cfg.B = 99;
    cfg.M = 40;
    cfg.level = 0.1;
    cfg.master_seed = 123;
    return cfg;
}

ExperimentConfig two_sample_config() {
    ExperimentConfig cfg;
    cfg.statistic = StatisticKind::two_sample_mean;
    cfg.process.kind = ProcessKind::ar1_functional;
    cfg.process.phi = 0.2;
    cfg.process.burn_in = 200;
    cfg.n = 500;
    cfg.B = 500;
    cfg.M = 1000;
    cfg.level = 0.05;
    cfg.master_seed = 2;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(ExperimentConfig, ParsesDocumentedKeys) {
    const auto file = ConfigFile::parse(R"(schema = 1
statistic = vstat:gaussian:0.5
n = 300
replicates = 50
replications = 7
level = 0.1
master_seed = 99

[plan]
block_length = 6
freeze_dyadic = false

[process]
kind = iid
innovation = uniform
location = 0
)");
    const auto cfg = parse_experiment_config(file);
    EXPECT_EQ(cfg.statistic, StatisticKind::vstat);
    EXPECT_EQ(cfg.kernel, "gaussian:0.5");
    EXPECT_EQ(cfg.statistic_label(), "vstat:gaussian:0.5");
    EXPECT_EQ(cfg.n, 300u);
    EXPECT_EQ(cfg.B, 50u);
    EXPECT_EQ(cfg.M, 7u);
    EXPECT_EQ(cfg.level, 0.1);
    EXPECT_EQ(cfg.master_seed, 99u);
    EXPECT_EQ(cfg.plan.block_length, 6u);
    EXPECT_FALSE(cfg.plan.freeze_dyadic);
    EXPECT_EQ(cfg.process.innovation, Innovation::uniform);
}

TEST(ExperimentConfig, Validation) {
    auto cfg = mean_config();
    cfg.B = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = mean_config();
    cfg.M = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = mean_config();
    cfg.level = 1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = mean_config();
    cfg.statistic = StatisticKind::cvm;
    cfg.process.kind = ProcessKind::ar1_functional;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = mean_config();
    cfg.statistic = StatisticKind::vstat;
    cfg.kernel = "nope";
    EXPECT_THROW(cfg.validate(), ConfigError);
    EXPECT_THROW((void)parse_experiment_config(ConfigFile::parse("schema=1\nstatistic=median\n")), ConfigError);
    EXPECT_THROW((void)run_cvm_experiment(mean_config()), ConfigError);
}

TEST(MeanExperiment, SingleBlockIsDegenerate) {
    auto cfg = mean_config();
    cfg.M = 1;
    cfg.B = 1;
    cfg.plan.block_length = cfg.n;
    const auto report = run_mean_experiment(cfg);
    EXPECT_TRUE(report.degenerate());
    EXPECT_EQ(report.pooled_bootstrap, std::vector<double>{0.0});
    EXPECT_EQ(report.records[0].critical_value, 0.0);
    EXPECT_EQ(*report.records[0].ci_lower, *report.records[0].ci_upper);
    EXPECT_NE(report.to_json().find("\"degenerate\": true"), std::string::npos);
}

TEST(MeanExperiment, DeterministicAcrossRunsAndThreads) {
    const auto cfg = mean_config();
    const auto a = run_mean_experiment(cfg, 1).to_json();
    EXPECT_EQ(a, run_mean_experiment(cfg, 1).to_json());
    EXPECT_EQ(a, run_mean_experiment(cfg, 4).to_json());
}

TEST(MeanExperiment, ReplicationDependsOnlyOnItsIndex) {
    auto cfg = mean_config();
    const auto full = run_mean_experiment(cfg);
    cfg.M = 5;
    const auto part = run_mean_experiment(cfg);
    for (std::size_t r = 0; r < 5; ++r) {
        EXPECT_EQ(part.records[r].observed, full.records[r].observed);
        EXPECT_EQ(part.records[r].critical_value, full.records[r].critical_value);
        EXPECT_EQ(part.records[r].ci_lower, full.records[r].ci_lower);
    }
}

TEST(MeanExperiment, ConfidenceIntervalMatchesDecision) {
    const auto cfg = mean_config();
    const auto report = run_mean_experiment(cfg);
    for (const auto& r : report.records) {
        ASSERT_FALSE(r.failed);
        const bool covers = *r.ci_lower <= 0.0 && 0.0 <= *r.ci_upper;
        // Equality at the boundary is measure zero; the two forms agree otherwise.
        EXPECT_EQ(covers, !r.reject) << r.index;
    }
}

TEST(Aggregates, RecomputedFromSerializedRecords) {
    auto cfg = mean_config();
    cfg.process.kind = ProcessKind::iid;
    const auto report = run_mean_experiment(cfg);
    const auto parsed = nlohmann::json::parse(report.to_json());
    std::vector<ReplicationRecord> records;
    for (const auto& j : parsed["records"]) {
        ReplicationRecord r;
        r.index = j["index"];
        r.failed = j["status"] == "failed";
        r.observed = j["observed"];
        r.critical_value = j["critical_value"];
        r.p_value = j["p_value"];
        r.reject = j["reject"];
        r.ci_lower = j["ci"][0].get<double>();
        r.ci_upper = j["ci"][1].get<double>();
        records.push_back(r);
    }
    EXPECT_EQ(compute_aggregates(cfg, records, report.pooled_bootstrap), report.aggregates);
    EXPECT_TRUE(report.aggregates.ks_montecarlo_vs_reference.has_value());
    EXPECT_EQ(*report.aggregates.reference_variance, 1.0);
}

TEST(Report, JsonRoundTripsByteForByte) {
    const auto text = run_mean_experiment(mean_config()).to_json();
    const auto parsed = nlohmann::json::parse(text);
    EXPECT_EQ(parsed.dump(2) + "\n", text);
    EXPECT_EQ(parsed["schema"], 1);
    EXPECT_EQ(parsed["software"]["version"], std::string(software_version()));
    EXPECT_EQ(parsed["config"]["master_seed"], 123);
}

TEST(Report, FilesAndCsvColumns) {
    const auto report = run_mean_experiment(mean_config());
    const auto dir = std::filesystem::temp_directory_path() / "blockboot_report_test";
    std::filesystem::remove_all(dir);
    write_report_files(report, dir);
    EXPECT_EQ(slurp(dir / "report.json"), report.to_json());
    EXPECT_EQ(slurp(dir / "summary.csv").substr(0, 19), "metric,value,stderr");
    EXPECT_EQ(slurp(dir / "records.csv").substr(0, 13), "index,status,");
    std::filesystem::remove_all(dir);
}

TEST(FailurePolicy, NonFiniteStatisticsFailTheRun) {
    ExperimentConfig cfg;
    cfg.statistic = StatisticKind::vstat;
    cfg.kernel = "product";
    cfg.process.scale = 1e300;  // x * y overflows
    cfg.n = 50;
    cfg.B = 10;
    cfg.M = 20;
    const auto report = run_vstat_experiment(cfg);
    EXPECT_EQ(report.aggregates.failed, 20u);
    EXPECT_TRUE(report.aggregates.failure_policy_breached);
    EXPECT_TRUE(report.records[3].failed);
    EXPECT_FALSE(report.records[3].error.empty());
}

TEST(FailurePolicy, OnePercentIsTolerated) {
    std::vector<ReplicationRecord> records(200);
    records[0].failed = true;
    records[1].failed = true;
    EXPECT_FALSE(compute_aggregates(mean_config(), records, {}).failure_policy_breached);
    records[2].failed = true;
    const auto agg = compute_aggregates(mean_config(), records, {});
    EXPECT_TRUE(agg.failure_policy_breached);
    EXPECT_EQ(agg.completed, 197u);
}

TEST(PValue, Convention) {
    const std::vector<double> reps{1.0, 2.0, 3.0, 4.0};
    EXPECT_DOUBLE_EQ(bootstrap_p_value(reps, 2.5), 3.0 / 5.0);
    EXPECT_DOUBLE_EQ(bootstrap_p_value(reps, 4.0), 2.0 / 5.0);
    EXPECT_DOUBLE_EQ(bootstrap_p_value(reps, 9.0), 1.0 / 5.0);
}

TEST(TwoSampleExperiment, IdenticalSamplesNeverReject) {
    auto cfg = two_sample_config();
    cfg.identical_samples = true;
    cfg.M = 50;
    cfg.B = 50;
    const auto report = run_two_sample_experiment(cfg);
    for (const auto& r : report.records) {
        EXPECT_EQ(r.observed, 0.0);
        EXPECT_FALSE(r.reject);
    }
    EXPECT_EQ(report.aggregates.rejection_rate, 0.0);
}

TEST(TwoSampleExperiment, SizeUnderEqualMeans) {
    const auto report = run_two_sample_experiment(two_sample_config());
    EXPECT_EQ(report.aggregates.failed, 0u);
    EXPECT_GE(report.aggregates.rejection_rate, 0.03);
    EXPECT_LE(report.aggregates.rejection_rate, 0.07);
}

TEST(TwoSampleExperiment, PowerAgainstShiftedMean) {
    auto cfg = two_sample_config();
    cfg.M = 200;
    cfg.B = 200;
    cfg.process_y = cfg.process;
    cfg.process_y->location = 1.0;
    const auto report = run_two_sample_experiment(cfg);
    EXPECT_GE(report.aggregates.rejection_rate, 0.99);
}

TEST(CvmExperiment, ZeroWeightNeverRejects) {
    ExperimentConfig cfg;
    cfg.statistic = StatisticKind::cvm;
    cfg.process.innovation = Innovation::uniform;
    cfg.process.location = 0.5;
    cfg.process.scale = 1.0 / std::sqrt(12.0);
    cfg.cvm.weight = CvmWeight::zero;
    cfg.n = 100;
    cfg.B = 50;
    cfg.M = 20;
    const auto report = run_cvm_experiment(cfg);
    for (const auto& r : report.records) EXPECT_EQ(r.observed, 0.0);
    EXPECT_EQ(report.aggregates.rejection_rate, 0.0);
}

TEST(CvmExperiment, MarginalMismatchHasPower) {
    ExperimentConfig cfg;
    cfg.statistic = StatisticKind::cvm;
    cfg.process.kind = ProcessKind::ar1_real;
    cfg.process.phi = 0.3;
    cfg.process.innovation = Innovation::uniform;
    cfg.process.location = 0.5;
    cfg.process.scale = 0.15;  // AR(1) marginal is not uniform[0, 1]
    cfg.cvm.points = 256;
    cfg.n = 400;
    cfg.B = 199;
    cfg.M = 100;
    cfg.level = 0.05;
    const auto alt = run_cvm_experiment(cfg);
    EXPECT_GT(alt.aggregates.rejection_rate, 0.5);
}

TEST(VstatExperiment, SingleBlockReplicatesAreZero) {
    ExperimentConfig cfg;
    cfg.statistic = StatisticKind::vstat;
    cfg.kernel = "product";
    cfg.n = 30;
    cfg.B = 20;
    cfg.M = 3;
    cfg.plan.block_length = 30;
    const auto report = run_vstat_experiment(cfg);
    EXPECT_TRUE(report.degenerate());
    for (double v : report.pooled_bootstrap) EXPECT_EQ(v, 0.0);
}

}  // namespace
