#include "niah/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>

#include "niah/adapters.hpp"
#include "niah/report.hpp"
#include "niah/runner.hpp"
#include "niah/sweep.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace niah {

namespace {

json pools_snapshot(const BenchmarkPlan& plan) {
    json pools = json::object();
    for (TaskKind task : plan.tasks) {
        const std::string ref = task_pool_ref(plan, task);
        if (pools.contains(ref)) continue;
        const NeedlePool pool = resolve_pool(ref);
        json entries = json::array();
        for (const PoolEntry& e : pool.entries) {
            entries.push_back({{"label", e.label}, {"path", e.payload_ref}});
        }
        pools[ref] = {{"kind", to_string(pool.kind)}, {"entries", std::move(entries)}};
    }
    return pools;
}

}  // namespace

int cmd_generate(const GenerateOptions& options, std::ostream& log) {
    BenchmarkPlan plan = load_plan(options.plan_path);
    if (options.seed) plan.seed = *options.seed;
    if (!options.tasks.empty()) {
        plan.tasks.clear();
        for (const std::string& t : options.tasks) plan.tasks.push_back(task_from_string(t));
    }

    fs::create_directories(options.out_dir);
    const BuildResult result = build_benchmark(plan, options.out_dir, options.jobs);

    Manifest manifest;
    manifest.benchmark_id = plan.benchmark_id;
    manifest.global_seed = plan.seed;
    manifest.config = plan_to_json(plan);
    manifest.pools = pools_snapshot(plan);
    manifest.samples = result.samples;
    validate_manifest(manifest, options.out_dir);
    save_manifest(manifest, options.out_dir / "manifest.json");

    log << task_stats_table(result.task_counts);
    log << "manifest: " << (options.out_dir / "manifest.json").string() << "\n";

    if (!result.errors.empty()) {
        log << result.errors.size() << " sample(s) failed:\n";
        for (const BuildError& e : result.errors) {
            log << "  " << e.sample_id << ": " << e.message << "\n";
        }
        return 1;
    }
    return 0;
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& log) {
    const Manifest manifest = load_manifest(options.manifest_path);
    validate_manifest(manifest);
    const auto adapter = make_adapter_from_spec(options.adapter_spec);

    fs::create_directories(options.out_dir);
    EvalOptions eval_options;
    eval_options.k = options.k;
    eval_options.jobs = options.jobs;
    eval_options.resume = options.resume;
    eval_options.mode =
        options.shuffle == "random" ? ShuffleMode::Random : ShuffleMode::Rotation;
    eval_options.shuffle_seed = options.shuffle_seed;
    eval_options.media_root = options.manifest_path.parent_path();
    eval_options.journal = options.out_dir / "results.jsonl";

    const std::vector<EvalRecord> records = run_evaluation(manifest, *adapter, eval_options);
    const MetricsReport report =
        aggregate(records, manifest, buckets_from_config(manifest.config));

    write_text_file(options.out_dir / "report.json", metrics_to_json(report).dump(2) + "\n");
    write_text_file(options.out_dir / "per_task.csv", metrics_table_csv(report));
    write_text_file(options.out_dir / "buckets.csv", buckets_csv(report));
    write_text_file(options.out_dir / "needle_counts.csv", needle_counts_csv(report));
    write_text_file(options.out_dir / "iteration_curve.csv", iteration_curve_csv(report));

    log << "adapter: " << adapter->id() << "  k=" << options.k << "\n";
    log << metrics_table_csv(report);
    log << "results: " << (options.out_dir / "results.jsonl").string() << "\n";
    return 0;
}

SweepPlan sweep_plan_from_json(const json& j) {
    SweepPlan plan;
    auto parse_axis = [](const json& axis) {
        std::vector<double> values;
        if (axis.is_array()) {
            for (const json& v : axis) values.push_back(v.get<double>());
        } else {
            const double from = axis.at("from").get<double>();
            const double to = axis.at("to").get<double>();
            const double step = axis.at("step").get<double>();
            for (double v = from; v <= to + 1e-9; v += step) values.push_back(v);
        }
        return values;
    };
    plan.durations_s = parse_axis(j.at("durations_s"));
    plan.depths = parse_axis(j.at("depths"));
    plan.n_per_cell = j.value("n_per_cell", plan.n_per_cell);
    plan.k = j.value("k", plan.k);
    plan.seed = j.value("seed", plan.seed);
    plan.pool_ref = j.value("pool", plan.pool_ref);
    plan.needle_duration_s = j.value("needle_duration_s", plan.needle_duration_s);

    const json& src = j.at("long_source");
    plan.long_source.seed = src.value("seed", 0ull);
    plan.long_source.duration_s = src.at("duration_s").get<double>();
    plan.long_source.fps = src.value("fps", plan.long_source.fps);
    if (src.contains("resolution")) {
        plan.long_source.width = src.at("resolution").at(0).get<int>();
        plan.long_source.height = src.at("resolution").at(1).get<int>();
    }
    return plan;
}

SweepPlan load_sweep_plan(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_sweep_plan: cannot open " + path.string());
    return sweep_plan_from_json(json::parse(in));
}

int cmd_sweep(const SweepOptions& options, std::ostream& log) {
    const SweepPlan plan = load_sweep_plan(options.plan_path);
    const auto adapter = make_adapter_from_spec(options.adapter_spec);

    const SweepGrid grid = depth_sweep(plan, *adapter);

    fs::create_directories(options.out_dir);
    write_text_file(options.out_dir / "sweep.csv", sweep_csv(grid));
    write_text_file(options.out_dir / "sweep.svg", sweep_svg(grid));
    write_text_file(options.out_dir / "sweep.json", sweep_to_json(grid).dump(2) + "\n");

    std::size_t infeasible = 0;
    for (const SweepCell& cell : grid.cells) infeasible += cell.feasible ? 0 : 1;
    log << "sweep: " << grid.durations_s.size() << " durations x " << grid.depths.size()
        << " depths, " << plan.n_per_cell << "/cell, adapter " << adapter->id() << "\n";
    if (infeasible > 0) {
        log << infeasible << " infeasible cell(s), see sweep.csv\n";
        for (const SweepCell& cell : grid.cells) {
            if (!cell.feasible) {
                log << "  duration " << cell.duration_s << " depth " << cell.depth << ": "
                    << cell.note << "\n";
            }
        }
    }
    log << "grid: " << (options.out_dir / "sweep.csv").string() << "\n";
    return 0;
}

int cmd_report(const ReportOptions& options, std::ostream& log) {
    if (options.results.empty()) throw Error("cmd_report: need at least one results file");
    const Manifest manifest = load_manifest(options.manifest_path);

    fs::create_directories(options.out_dir);
    std::vector<std::string> run_labels;
    std::vector<std::vector<double>> task_acc_vectors;

    auto unique_label = [&run_labels](const fs::path& path) {
        std::string label = path.stem().string();
        if (std::find(run_labels.begin(), run_labels.end(), label) != run_labels.end()) {
            label = path.parent_path().filename().string() + "__" + label;
        }
        int suffix = 2;
        while (std::find(run_labels.begin(), run_labels.end(), label) != run_labels.end()) {
            label += "_" + std::to_string(suffix++);
        }
        return label;
    };

    const DurationBuckets buckets = buckets_from_config(manifest.config);
    for (const fs::path& results_path : options.results) {
        const std::vector<EvalRecord> records = load_results(results_path);
        const MetricsReport report = aggregate(records, manifest, buckets);
        const std::string label = unique_label(results_path);

        const fs::path run_dir =
            options.results.size() == 1 ? options.out_dir : options.out_dir / label;
        fs::create_directories(run_dir);
        write_text_file(run_dir / "report.json", metrics_to_json(report).dump(2) + "\n");
        write_text_file(run_dir / "per_task.csv", metrics_table_csv(report));
        write_text_file(run_dir / "buckets.csv", buckets_csv(report));
        write_text_file(run_dir / "needle_counts.csv", needle_counts_csv(report));
        write_text_file(run_dir / "iteration_curve.csv", iteration_curve_csv(report));

        log << "== " << label << "\n" << metrics_table_csv(report);

        std::vector<double> acc_vector;
        for (const auto& [task, metrics] : report.per_task) acc_vector.push_back(metrics.acc());
        run_labels.push_back(label);
        task_acc_vectors.push_back(std::move(acc_vector));
    }

    if (options.results.size() >= 2) {
        try {
            const Eigen::MatrixXd corr = task_correlation(task_acc_vectors);
            write_text_file(options.out_dir / "correlation.csv",
                            correlation_csv(corr, run_labels));
            log << "cross-run correlation written to "
                << (options.out_dir / "correlation.csv").string() << "\n";
        } catch (const DegenerateVector& e) {
            log << "cross-run correlation undefined: " << e.what() << "\n";
        }
    }
    return 0;
}

}  // namespace niah
