#include "forumsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_set>

namespace forumsim {

Population make_population(const ModelParams& params, Rng& rng) {
    Population pop;
    pop.category.reserve(static_cast<std::size_t>(params.population));
    for (std::int64_t i = 0; i < params.population; ++i)
        pop.category.push_back(static_cast<Category>(rng.pick3(params.agent_mix)));
    return pop;
}

SelectionTable::SelectionTable(const std::vector<std::int64_t>& activity) {
    cumulative_.reserve(activity.size());
    double acc = 0.0;
    for (std::int64_t a : activity) {
        acc += a == 0 ? kLurkerWeight
                      : std::pow(static_cast<double>(a) + 1.0, kSelectionExponent);
        cumulative_.push_back(acc);
    }
    total_ = acc;
}

std::int32_t SelectionTable::pick(Rng& rng) const {
    const double x = rng.u01() * total_;
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    const auto idx = it == cumulative_.end() ? cumulative_.size() - 1
                                             : static_cast<std::size_t>(it - cumulative_.begin());
    return static_cast<std::int32_t>(idx);
}

std::int32_t select_target(const Thread& thread, double p_s, Rng& rng) {
    if (thread.comment_count() == 0 || rng.bernoulli(p_s)) return 0;
    // Total degree of a comment is indegree + its one out-link.
    std::int64_t total = 0;
    for (std::size_t i = 1; i < thread.posts.size(); ++i)
        total += thread.posts[i].indegree + 1;
    std::int64_t x = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(total)));
    for (std::size_t i = 1; i < thread.posts.size(); ++i) {
        x -= thread.posts[i].indegree + 1;
        if (x < 0) return static_cast<std::int32_t>(i);
    }
    return static_cast<std::int32_t>(thread.posts.size() - 1);  // unreachable
}

namespace {

// Appends a comment by `author` replying to `target`, drawing the valence.
std::int32_t append_comment(Thread& thread, std::int32_t author, Category author_cat,
                            std::int32_t target, double x_n, Rng& rng) {
    const Category target_cat = thread.posts[static_cast<std::size_t>(target)].category;
    const bool needs_draw = author_cat != Category::N && target_cat == Category::N;
    const Valence v = comment_valence(author_cat, target_cat, x_n,
                                      needs_draw ? rng.u01() : 0.0);
    Post post;
    post.post_id = static_cast<std::int32_t>(thread.posts.size());
    post.author_id = author;
    post.target_id = target;
    post.category = author_cat;
    post.valence = v;
    thread.posts.push_back(post);
    thread.posts[static_cast<std::size_t>(target)].indegree++;
    return post.post_id;
}

}  // namespace

std::size_t quarrel(Thread& thread, std::int32_t first_comment_id,
                    const ModelParams& params, Rng& rng) {
    const Post& first = thread.posts[static_cast<std::size_t>(first_comment_id)];
    const std::int32_t target_id = first.target_id;
    // The two participants alternate: the author of the last-replied-to
    // post responds to the newest post.
    const std::int32_t participants[2] = {
        thread.posts[static_cast<std::size_t>(target_id)].author_id, first.author_id};
    const Category categories[2] = {
        thread.posts[static_cast<std::size_t>(target_id)].category, first.category};
    std::int32_t newest = first_comment_id;
    std::size_t responses = 0;
    while (responses < kQuarrelCap) {
        const std::size_t side = responses % 2;
        const Category newest_cat = thread.posts[static_cast<std::size_t>(newest)].category;
        const double p = params.p_r * interaction_factor(categories[side], newest_cat, params.f_star);
        if (!rng.bernoulli(p)) break;
        newest = append_comment(thread, participants[side], categories[side], newest,
                                params.x_n, rng);
        thread.posts[static_cast<std::size_t>(newest)].in_quarrel = true;
        ++responses;
    }
    thread.quarrel_post_count += static_cast<std::int64_t>(responses);
    return responses;
}

Thread simulate_thread(const ModelParams& params, const Population& population,
                       const SelectionTable& selection, std::int64_t thread_id,
                       Rng& rng) {
    Thread thread;
    thread.thread_id = thread_id;
    thread.source_category = static_cast<Category>(rng.pick3(params.source_mix));
    Post source;
    source.category = thread.source_category;
    thread.posts.push_back(source);

    // Preferential-attachment pool: each comment appears indegree+1 times
    // (once on creation plus once per reply it has received). The source
    // is reachable only through the p_s branch.
    std::vector<std::int32_t> pool;
    std::size_t synced = 1;  // posts already folded into the pool

    for (;;) {
        const std::int32_t reader = selection.pick(rng);
        const Category reader_cat = population.category[static_cast<std::size_t>(reader)];
        std::int32_t target = 0;
        if (!pool.empty() && !rng.bernoulli(params.p_s))
            target = pool[rng.bounded(pool.size())];
        const Category target_cat = thread.posts[static_cast<std::size_t>(target)].category;
        if (!rng.bernoulli(params.p_c * interaction_factor(reader_cat, target_cat, params.f_star)))
            break;  // the selected reader declines: the thread ends
        const std::int32_t comment = append_comment(thread, reader, reader_cat, target,
                                                    params.x_n, rng);
        if (target != 0) quarrel(thread, comment, params, rng);
        for (; synced < thread.posts.size(); ++synced) {
            pool.push_back(static_cast<std::int32_t>(synced));
            const std::int32_t t = thread.posts[synced].target_id;
            if (t != 0) pool.push_back(t);
        }
    }
    return thread;
}

namespace {

struct ThreadDigest {
    std::vector<ForumRecord> records;
    std::int64_t quarrel_posts = 0;
};

ThreadDigest digest(const Thread& thread) {
    ThreadDigest d;
    d.records.reserve(thread.posts.size() - 1);
    for (std::size_t i = 1; i < thread.posts.size(); ++i) {
        const Post& p = thread.posts[i];
        d.records.push_back({thread.thread_id, p.post_id, p.author_id, p.valence});
    }
    d.quarrel_posts = thread.quarrel_post_count;
    return d;
}

}  // namespace

SimulationOutput run_simulation(const ModelParams& params, int n_workers) {
    params.validate();
    if (n_workers < 1)
        n_workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    Rng setup_rng(substream_seed(params.seed, 0));
    const Population population = make_population(params, setup_rng);

    std::vector<std::int64_t> activity(static_cast<std::size_t>(params.population), 0);
    SimulationOutput out;
    std::int64_t quarrel_posts = 0;

    for (std::int64_t batch_start = 0; batch_start < params.n_threads;
         batch_start += kSelectionBatch) {
        const std::int64_t batch_end = std::min(params.n_threads, batch_start + kSelectionBatch);
        const SelectionTable selection(activity);

        std::vector<ThreadDigest> digests(static_cast<std::size_t>(batch_end - batch_start));
        auto worker = [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t tid = lo; tid < hi; ++tid) {
                Rng rng(substream_seed(params.seed, static_cast<std::uint64_t>(tid) + 1));
                Thread t = simulate_thread(params, population, selection, tid, rng);
                digests[static_cast<std::size_t>(tid - batch_start)] = digest(t);
            }
        };
        const std::int64_t span = batch_end - batch_start;
        const int workers = static_cast<int>(std::min<std::int64_t>(n_workers, span));
        if (workers <= 1) {
            worker(batch_start, batch_end);
        } else {
            std::vector<std::thread> threads;
            threads.reserve(static_cast<std::size_t>(workers));
            const std::int64_t chunk = (span + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const std::int64_t lo = batch_start + w * chunk;
                const std::int64_t hi = std::min(batch_end, lo + chunk);
                if (lo < hi) threads.emplace_back(worker, lo, hi);
            }
            for (auto& t : threads) t.join();
        }

        // Deterministic order-independent merge: results are folded in
        // thread-id order whatever the worker layout was.
        for (auto& d : digests) {
            if (!d.records.empty()) out.n_active_threads++;
            for (const ForumRecord& r : d.records) activity[static_cast<std::size_t>(r.author_id)]++;
            quarrel_posts += d.quarrel_posts;
            out.records.insert(out.records.end(), d.records.begin(), d.records.end());
        }
    }

    out.total_posts = static_cast<std::int64_t>(out.records.size());
    out.quarrel_fraction =
        out.total_posts > 0 ? static_cast<double>(quarrel_posts) / static_cast<double>(out.total_posts)
                            : 0.0;
    out.n_active_agents = static_cast<std::int64_t>(
        std::count_if(activity.begin(), activity.end(), [](std::int64_t a) { return a > 0; }));
    return out;
}

}  // namespace forumsim
