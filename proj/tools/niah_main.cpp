#include <CLI11.hpp>

#include <iostream>

#include "niah/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"needle-in-a-haystack video benchmark toolkit"};
    app.require_subcommand(1);

    niah::GenerateOptions gen;
    std::uint64_t gen_seed = 0;
    bool gen_seed_set = false;
    auto* generate = app.add_subcommand("generate", "synthesize a benchmark from a plan");
    generate->add_option("--plan", gen.plan_path, "plan JSON")->required();
    generate->add_option("--out", gen.out_dir, "output directory")->required();
    generate->add_option("--seed", gen_seed, "override the plan seed")
        ->each([&](const std::string&) { gen_seed_set = true; });
    generate->add_option("--tasks", gen.tasks, "subset of tasks (e.g. retrieval-e)");
    generate->add_option("--jobs", gen.jobs, "parallel workers");

    niah::EvaluateOptions ev;
    auto* evaluate = app.add_subcommand("evaluate", "run circular evaluation over a manifest");
    evaluate->add_option("--manifest", ev.manifest_path, "manifest.json")->required();
    evaluate->add_option("--adapter", ev.adapter_spec,
                         "adapter spec (oracle | fixed:A | random:SEED | "
                         "sampler:uniform:16[:SEED] | config.json)")
        ->required();
    evaluate->add_option("--out", ev.out_dir, "output directory")->required();
    evaluate->add_option("--k", ev.k, "circular tries, 1..4")->check(CLI::Range(1, 4));
    evaluate->add_option("--jobs", ev.jobs, "parallel workers");
    evaluate->add_flag("--resume", ev.resume, "skip samples already in results.jsonl");
    evaluate->add_option("--shuffle", ev.shuffle, "rotation | random");
    evaluate->add_option("--shuffle-seed", ev.shuffle_seed, "seed for random shuffles");

    niah::SweepOptions sw;
    auto* sweep = app.add_subcommand("sweep", "depth x duration recall sweep");
    sweep->add_option("--plan", sw.plan_path, "sweep plan JSON")->required();
    sweep->add_option("--adapter", sw.adapter_spec, "adapter spec")->required();
    sweep->add_option("--out", sw.out_dir, "output directory")->required();

    niah::ReportOptions rp;
    auto* report = app.add_subcommand("report", "tables and correlations from results files");
    report->add_option("--manifest", rp.manifest_path, "manifest.json")->required();
    report->add_option("--results", rp.results, "results.jsonl (repeatable)")->required();
    report->add_option("--out", rp.out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            if (gen_seed_set) gen.seed = gen_seed;
            return niah::cmd_generate(gen, std::cout);
        }
        if (evaluate->parsed()) return niah::cmd_evaluate(ev, std::cout);
        if (sweep->parsed()) return niah::cmd_sweep(sw, std::cout);
        if (report->parsed()) return niah::cmd_report(rp, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
