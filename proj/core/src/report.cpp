#include "blockboot/errors.hpp"
#include "blockboot/experiment.hpp"
#include "blockboot/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace blockboot {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json process_json(const ProcessConfig& p) {
    return json{{"kind", std::string(to_string(p.kind))},
                {"phi", p.phi},
                {"coefficients", p.coefficients},
                {"basis_size", p.basis_size},
                {"innovation", std::string(to_string(p.innovation))},
                {"nu", p.nu},
                {"burn_in", p.burn_in},
                {"location", p.location},
                {"scale", p.scale}};
}

json config_json(const ExperimentConfig& c) {
    json j{{"statistic", c.statistic_label()},
           {"n", c.n},
           {"replicates", c.B},
           {"replications", c.M},
           {"level", c.level},
           {"master_seed", c.master_seed},
           {"process", process_json(c.process)},
           {"plan",
            {{"block_length", c.plan.block_length ? json(*c.plan.block_length) : json("auto")},
             {"exponent", c.plan.exponent},
             {"freeze_dyadic", c.plan.freeze_dyadic}}}};
    if (c.statistic == StatisticKind::two_sample_mean) {
        j["process_y"] = process_json(c.process_y ? *c.process_y : c.process);
        j["identical_samples"] = c.identical_samples;
    }
    if (c.process.is_functional()) {
        j["grid"] = {{"points", c.grid.points},
                     {"lower", c.grid.lower},
                     {"upper", c.grid.upper},
                     {"weight", c.grid.weight}};
    }
    if (c.statistic == StatisticKind::cvm) {
        j["cvm"] = {{"null", c.cvm.null.name()},
                    {"weight", std::string(to_string(c.cvm.weight))},
                    {"points", c.cvm.points}};
    }
    return j;
}

std::string optional_csv(const std::optional<double>& v) { return v ? io::format_double(*v) : ""; }

}  // namespace

std::string ExperimentReport::to_json() const {
    json records_json = json::array();
    for (const auto& r : records) {
        json rec{{"index", r.index}, {"status", r.failed ? "failed" : "ok"}};
        if (r.failed) {
            rec["error"] = r.error;
        } else {
            rec["observed"] = r.observed;
            rec["critical_value"] = r.critical_value;
            rec["p_value"] = r.p_value;
            rec["reject"] = r.reject;
            if (r.ci_lower) rec["ci"] = {*r.ci_lower, *r.ci_upper};
        }
        records_json.push_back(std::move(rec));
    }
    const auto& a = aggregates;
    json agg{{"completed", a.completed},
             {"failed", a.failed},
             {"rejection_rate", a.rejection_rate},
             {"rejection_stderr", a.rejection_stderr},
             {"mean_observed", a.mean_observed},
             {"mean_critical_value", a.mean_critical_value},
             {"ks_bootstrap_vs_montecarlo", optional_number(a.ks_bootstrap_vs_montecarlo)},
             {"reference_variance", optional_number(a.reference_variance)},
             {"ks_montecarlo_vs_reference", optional_number(a.ks_montecarlo_vs_reference)},
             {"ks_bootstrap_vs_reference", optional_number(a.ks_bootstrap_vs_reference)},
             {"failure_policy_breached", a.failure_policy_breached}};
    if (config.statistic == StatisticKind::mean_norm) agg["coverage"] = coverage();

    json out{{"schema", 1},
             {"software", {{"name", "blockboot"}, {"version", std::string(software_version())}}},
             {"config", config_json(config)},
             {"plan",
              {{"n", plan.n},
               {"p", plan.p},
               {"k", plan.k},
               {"used", plan.used()},
               {"discarded", plan.discarded()},
               {"dyadic_freeze", plan.dyadic_freeze}}},
             {"degenerate", degenerate()},
             {"aggregates", std::move(agg)},
             {"records", std::move(records_json)}};
    return out.dump(2) + "\n";
}

std::string ExperimentReport::records_csv() const {
    std::ostringstream out;
    out << "index,status,observed,critical_value,p_value,reject,ci_lower,ci_upper\n";
    for (const auto& r : records) {
        out << r.index << ',' << (r.failed ? "failed" : "ok") << ',';
        if (r.failed) {
            out << ",,,,,\n";
            continue;
        }
        out << io::format_double(r.observed) << ',' << io::format_double(r.critical_value) << ','
            << io::format_double(r.p_value) << ',' << (r.reject ? 1 : 0) << ','
            << optional_csv(r.ci_lower) << ',' << optional_csv(r.ci_upper) << '\n';
    }
    return out.str();
}

std::string ExperimentReport::summary_csv() const {
    const auto& a = aggregates;
    std::ostringstream out;
    out << "metric,value,stderr\n";
    out << "rejection_rate," << io::format_double(a.rejection_rate) << ','
        << io::format_double(a.rejection_stderr) << '\n';
    if (config.statistic == StatisticKind::mean_norm) {
        out << "coverage," << io::format_double(coverage()) << ','
            << io::format_double(a.rejection_stderr) << '\n';
    }
    out << "mean_observed," << io::format_double(a.mean_observed) << ",\n";
    out << "mean_critical_value," << io::format_double(a.mean_critical_value) << ",\n";
    out << "ks_bootstrap_vs_montecarlo," << optional_csv(a.ks_bootstrap_vs_montecarlo) << ",\n";
    out << "ks_montecarlo_vs_reference," << optional_csv(a.ks_montecarlo_vs_reference) << ",\n";
    out << "ks_bootstrap_vs_reference," << optional_csv(a.ks_bootstrap_vs_reference) << ",\n";
    out << "completed," << a.completed << ",\n";
    out << "failed," << a.failed << ",\n";
    return out.str();
}

void write_report_files(const ExperimentReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&dir](const char* name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'");
        out << text;
    };
    write("report.json", report.to_json());
    write("records.csv", report.records_csv());
    write("summary.csv", report.summary_csv());
}

}  // namespace blockboot
