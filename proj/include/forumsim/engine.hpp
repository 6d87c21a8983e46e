#pragma once

#include <cstdint>
#include <vector>

#include "forumsim/model.hpp"
#include "forumsim/record.hpp"
#include "forumsim/rng.hpp"

namespace forumsim {

// One discussion thread. posts[0] is the source message.
struct Thread {
    std::int64_t thread_id = 0;
    Category source_category = Category::N;
    std::vector<Post> posts;
    std::int64_t quarrel_post_count = 0;

    std::int64_t comment_count() const {
        return static_cast<std::int64_t>(posts.size()) - 1;
    }
};

struct SimulationOutput {
    std::vector<ForumRecord> records;
    std::int64_t n_active_threads = 0;  // threads with >= 1 comment
    std::int64_t n_active_agents = 0;   // distinct author ids in records
    std::int64_t total_posts = 0;       // rows in records
    double quarrel_fraction = 0.0;      // quarrel posts / total posts
};

// Fixed agent population; categories are sampled once per run and never
// change.
struct Population {
    std::vector<Category> category;
};

Population make_population(const ModelParams& params, Rng& rng);

// Reader-selection weights, frozen for a batch of threads. Weights grow
// with past posting activity (see engine.cpp for the weighting rule),
// which is what concentrates activity on a heavy-tailed core of agents.
class SelectionTable {
public:
    SelectionTable() = default;
    // activity[i] = posts authored by agent i so far.
    explicit SelectionTable(const std::vector<std::int64_t>& activity);

    std::int32_t pick(Rng& rng) const;
    std::size_t size() const { return cumulative_.size(); }

private:
    std::vector<double> cumulative_;
    double total_ = 0.0;
};

// Target choice for one reader: the source with probability p_s (always,
// when the thread has no comments yet), otherwise a comment drawn with
// probability proportional to its total degree (indegree + 1).
std::int32_t select_target(const Thread& thread, double p_s, Rng& rng);

// Runs the quarrel subroutine after `first_comment` was placed on a
// non-source target: the two authors respond to each other in
// alternation, each response surviving a p_r * f(responder, newest)
// coin, until the first decline. Returns the number of responses;
// response posts are appended to the thread and flagged in_quarrel.
std::size_t quarrel(Thread& thread, std::int32_t first_comment_id,
                    const ModelParams& params, Rng& rng);

// Simulates one complete thread against a frozen selection table.
Thread simulate_thread(const ModelParams& params, const Population& population,
                       const SelectionTable& selection, std::int64_t thread_id,
                       Rng& rng);

// Full run: builds the population, simulates n_threads threads and
// aggregates the flattened log. Deterministic for a given seed and
// independent of n_workers (threads are simulated on per-thread RNG
// substreams against batch-frozen selection tables).
SimulationOutput run_simulation(const ModelParams& params, int n_workers = 1);

// Engine constants, exposed for tests.
inline constexpr std::size_t kQuarrelCap = 1'000'000;  // degenerate p_r*f = 1 guard
inline constexpr std::int64_t kSelectionBatch = 1024;  // threads per weight snapshot
inline constexpr double kSelectionExponent = 0.88;     // weight = (activity+1)^exp
inline constexpr double kLurkerWeight = 0.75;          // weight of never-posted agents

}  // namespace forumsim
