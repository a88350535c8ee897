#pragma once

#include <Eigen/Dense>

#include "niah/adapters.hpp"
#include "niah/runner.hpp"

namespace niah {

// Depth x duration recall sweep: regenerated single-image-insert samples
// with a fixed query-response pair per sample slot, haystacks cut from one
// shared long source. Each grid cell averages n_per_cell circular verdicts.
struct SweepPlan {
    std::vector<double> durations_s;  // subset of [10, 180]
    std::vector<double> depths;       // subset of [0, 0.9]
    int n_per_cell = 32;
    int k = 4;
    std::uint64_t seed = 0;
    SyntheticHaystackConfig long_source;  // shared long video
    std::string pool_ref = "builtin:fruits";
    double needle_duration_s = 1.0;

    void validate() const;
};

struct SweepCell {
    double duration_s = 0.0;
    double depth = 0.0;
    int n = 0;
    double mean_acc = 0.0;
    bool feasible = true;
    std::string note;  // set for infeasible cells
};

struct SweepGrid {
    std::vector<double> durations_s;
    std::vector<double> depths;
    Eigen::MatrixXd acc;  // rows = depths, cols = durations; NaN where infeasible
    std::vector<SweepCell> cells;
};

SweepGrid depth_sweep(const SweepPlan& plan, Adapter& adapter);

// The sample geometry a sweep cell slot produces; exposed so oracles can
// recompute coverage predictions without running the harness.
struct SweepSampleGeometry {
    std::string sample_id;
    std::size_t haystack_frames = 0;
    std::size_t output_frames = 0;
    std::size_t span_begin = 0;  // needle span [begin, end) on the output timeline
    std::size_t span_end = 0;
};

SweepSampleGeometry sweep_sample_geometry(const SweepPlan& plan, int slot, double duration_s,
                                          double depth);

// The fixed query-response pair of a sweep slot (label, options, answer
// position), reused across all cells of that slot.
struct SweepSlot {
    PoolEntry entry;
    OptionSet options;
};

SweepSlot sweep_slot(const SweepPlan& plan, int slot);

}  // namespace niah
