#pragma once

#include <filesystem>

#include "niah/adapters.hpp"
#include "niah/eval.hpp"

namespace niah {

struct EvalOptions {
    int k = 4;
    ShuffleMode mode = ShuffleMode::Rotation;
    std::uint64_t shuffle_seed = 0;
    int jobs = 1;
    bool resume = false;
    std::filesystem::path media_root;  // prefix for per-sample media paths
    std::filesystem::path journal;     // results file appended per sample; "" disables
};

// Runs circular evaluation of every manifest sample against the adapter.
// Completed samples are journaled immediately so interrupts keep partial
// progress; with resume, journaled samples are not re-queried. Worker count
// is min(jobs, adapter.max_in_flight()). Records return in manifest order.
std::vector<EvalRecord> run_evaluation(const Manifest& manifest, Adapter& adapter,
                                       const EvalOptions& options);

// Evaluates one sample (k tries) and scores it, applying the adapter's
// judge fallback to unparseable responses when available.
EvalRecord evaluate_sample(const Sample& sample, Adapter& adapter, const EvalOptions& options,
                           const MediaRef& media);

MediaRef media_ref_for(const Sample& sample, const std::filesystem::path& media_root);

}  // namespace niah
