#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "niah/eval.hpp"
#include "niah/sweep.hpp"

namespace niah {

// Report writers. All numeric output is formatted with fixed precision so
// re-running a report over the same results is byte-identical.

nlohmann::json metrics_to_json(const MetricsReport& report);

// task,n,acc,consist,acc_given_consist — percentages, two decimals;
// "overall" last. Absent Acc|Consist renders as an empty field.
std::string metrics_table_csv(const MetricsReport& report);

// bucket,n,acc / needle_count,n,acc / k,acc
std::string buckets_csv(const MetricsReport& report);
std::string needle_counts_csv(const MetricsReport& report);
std::string iteration_curve_csv(const MetricsReport& report);

std::string sweep_csv(const SweepGrid& grid);
std::string sweep_svg(const SweepGrid& grid);
nlohmann::json sweep_to_json(const SweepGrid& grid);

std::string correlation_csv(const Eigen::MatrixXd& corr, const std::vector<std::string>& labels);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// Per-task sample counts block printed by `generate`.
std::string task_stats_table(const std::map<TaskKind, std::size_t>& counts);

}  // namespace niah
