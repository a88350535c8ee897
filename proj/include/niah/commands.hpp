#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "niah/eval.hpp"
#include "niah/sweep.hpp"

namespace niah {

// The four pipeline commands, callable as a library (the CLI is a thin
// wrapper). Each returns a process exit code and logs to `log`.

struct GenerateOptions {
    std::filesystem::path plan_path;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;        // overrides the plan seed
    std::vector<std::string> tasks;           // subset filter; empty = plan tasks
    int jobs = 1;
};
int cmd_generate(const GenerateOptions& options, std::ostream& log);

struct EvaluateOptions {
    std::filesystem::path manifest_path;
    std::string adapter_spec;                 // inline spec or JSON config path
    std::filesystem::path out_dir;
    int k = 4;
    int jobs = 1;
    bool resume = false;
    std::string shuffle = "rotation";         // "rotation" | "random"
    std::uint64_t shuffle_seed = 0;
};
int cmd_evaluate(const EvaluateOptions& options, std::ostream& log);

struct SweepOptions {
    std::filesystem::path plan_path;          // sweep plan JSON
    std::string adapter_spec;
    std::filesystem::path out_dir;
};
int cmd_sweep(const SweepOptions& options, std::ostream& log);

struct ReportOptions {
    std::filesystem::path manifest_path;
    std::vector<std::filesystem::path> results;  // >= 1 results files
    std::filesystem::path out_dir;
};
int cmd_report(const ReportOptions& options, std::ostream& log);

// Sweep plan JSON parsing (axes either explicit arrays or {from,to,step}).
SweepPlan sweep_plan_from_json(const nlohmann::json& j);
SweepPlan load_sweep_plan(const std::filesystem::path& path);

}  // namespace niah
