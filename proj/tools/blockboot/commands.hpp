#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace blockboot::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitFailurePolicy = 3;

struct PlanOptions {
    std::string block_length = "auto";
    double exponent = 1.0 / 3.0;
    bool freeze_dyadic = false;
};

struct GenerateOptions {
    std::string config;
    std::string out;
    std::optional<std::size_t> n;
};

struct BootstrapOptions {
    std::string data;
    std::string grid;
    PlanOptions plan;
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
    std::string statistic = "mean-norm";
    std::string out;
    std::string replicates_csv;
    std::size_t threads = 0;
};

struct TestOptions {
    std::string data;
    std::string grid;
    std::string kernel;
    std::string null = "uniform:0:1";
    std::string weight = "unit";
    std::size_t grid_points = 2048;
    PlanOptions plan;
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
    double level = 0.05;
    std::string out;
    std::size_t threads = 0;
};

struct TwoSampleOptions {
    std::string data_x;
    std::string data_y;
    std::string grid;
    PlanOptions plan;
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
    double level = 0.05;
    std::string out;
    std::size_t threads = 0;
};

struct MonteCarloOptions {
    std::string config;
    std::string out;
    std::size_t threads = 0;
};

int run_generate(const GenerateOptions& opt);
int run_bootstrap(const BootstrapOptions& opt);
int run_cvm_test(const TestOptions& opt);
int run_vstat_test(const TestOptions& opt);
int run_two_sample(const TwoSampleOptions& opt);
int run_montecarlo(const MonteCarloOptions& opt);

}  // namespace blockboot::cli
