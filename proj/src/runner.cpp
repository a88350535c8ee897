#include "niah/runner.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

namespace fs = std::filesystem;

namespace niah {

MediaRef media_ref_for(const Sample& sample, const fs::path& media_root) {
    MediaRef media;
    if (!sample.media_path.empty()) {
        media.media_path = (media_root.empty() ? fs::path(sample.media_path)
                                               : media_root / sample.media_path)
                               .string();
    }
    media.frame_count = sample.output_frames;
    media.fps = sample.haystack.fps;
    for (const ResolvedSpan& span : sample.needle_spans) {
        media.needle_spans.emplace_back(span.begin, span.end);
    }
    return media;
}

EvalRecord evaluate_sample(const Sample& sample, Adapter& adapter, const EvalOptions& options,
                           const MediaRef& media) {
    const auto tries =
        circular_variants(sample, options.k, options.mode, options.shuffle_seed);
    std::vector<std::string> responses;
    responses.reserve(tries.size());
    std::vector<std::optional<int>> judged(tries.size());
    for (std::size_t i = 0; i < tries.size(); ++i) {
        try {
            responses.push_back(adapter.answer(tries[i], media));
        } catch (const AdapterTimeout& e) {
            // Recorded against the try, scored incorrect and inconsistent.
            // Other adapter failures abort the sample.
            responses.push_back(std::string("[adapter-timeout] ") + e.what());
            judged[i] = 0;
        }
    }

    if (const JudgeClient* judge = adapter.judge()) {
        for (std::size_t i = 0; i < tries.size(); ++i) {
            if (!judged[i].has_value() && !extract_choice(responses[i], tries[i].options)) {
                judged[i] = judge->verdict(sample.question, sample.answer_text(), responses[i]);
            }
        }
    }
    return score_sample(sample, tries, responses, judged);
}

std::vector<EvalRecord> run_evaluation(const Manifest& manifest, Adapter& adapter,
                                       const EvalOptions& options) {
    const std::size_t n = manifest.samples.size();
    std::vector<std::optional<EvalRecord>> slots(n);

    std::set<std::string> done;
    if (options.resume && !options.journal.empty() && fs::exists(options.journal)) {
        for (EvalRecord& r : load_results(options.journal)) {
            for (std::size_t i = 0; i < n; ++i) {
                if (manifest.samples[i].sample_id == r.sample_id) {
                    slots[i] = std::move(r);
                    done.insert(manifest.samples[i].sample_id);
                    break;
                }
            }
        }
    }

    std::ofstream journal;
    std::mutex journal_mutex;
    if (!options.journal.empty()) {
        journal.open(options.journal, options.resume ? std::ios::app : std::ios::trunc);
        if (!journal) throw IoError("run_evaluation: cannot open journal " +
                                    options.journal.string());
    }

    const int workers = std::max(
        1, std::min({options.jobs, adapter.max_in_flight(), static_cast<int>(n)}));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::vector<std::string> failures;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            const Sample& sample = manifest.samples[i];
            if (slots[i].has_value()) continue;  // resumed
            try {
                EvalRecord record = evaluate_sample(
                    sample, adapter, options, media_ref_for(sample, options.media_root));
                if (journal.is_open()) {
                    const std::lock_guard<std::mutex> lock(journal_mutex);
                    append_result(journal, record);
                    journal.flush();
                }
                slots[i] = std::move(record);
            } catch (const std::exception& e) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                failures.push_back(sample.sample_id + ": " + e.what());
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    if (!failures.empty()) {
        std::string message = "evaluation failed for " + std::to_string(failures.size()) +
                              " sample(s); partial results preserved";
        for (const std::string& f : failures) message += "\n  " + f;
        throw Error(message);
    }

    std::vector<EvalRecord> records;
    records.reserve(n);
    for (auto& slot : slots) records.push_back(std::move(*slot));
    return records;
}

}  // namespace niah
