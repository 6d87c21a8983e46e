#include "forumsim/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "forumsim/ingest.hpp"
#include "forumsim/rng.hpp"

namespace forumsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fold(std::uint64_t h, std::uint64_t v) { return mix64(h ^ mix64(v)); }

std::uint64_t fold(std::uint64_t h, double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    return fold(h, bits);
}

std::string hex16(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::string run_id_for_params(const ModelParams& p) {
    std::uint64_t h = 0x666f72756d73696dull;
    h = fold(h, static_cast<std::uint64_t>(p.population));
    for (double m : p.agent_mix) h = fold(h, m);
    for (double m : p.source_mix) h = fold(h, m);
    h = fold(h, static_cast<std::uint64_t>(p.n_threads));
    h = fold(h, p.p_s);
    h = fold(h, p.p_c);
    h = fold(h, p.p_r);
    h = fold(h, p.f_star);
    h = fold(h, p.x_n);
    h = fold(h, p.seed);
    return hex16(h);
}

std::string run_id_for_records(std::span<const ForumRecord> records,
                               const AnalysisOptions& options) {
    std::uint64_t h = 0x616e616c797a6572ull;
    h = fold(h, static_cast<std::uint64_t>(records.size()));
    for (const ForumRecord& r : records) {
        h = fold(h, static_cast<std::uint64_t>(r.thread_id));
        h = fold(h, static_cast<std::uint64_t>(r.post_index));
        h = fold(h, static_cast<std::uint64_t>(r.author_id));
        h = fold(h, static_cast<std::uint64_t>(to_int(r.valence) + 1));
    }
    h = fold(h, options.bin_ratio);
    h = fold(h, options.tail_threshold);
    h = fold(h, options.shuffle_seed);
    return hex16(h);
}

AnalysisResult analyze_records(std::span<const ForumRecord> records,
                               const AnalysisOptions& options) {
    AnalysisResult r;
    r.metrics = compute_metrics(records);
    const ForumMetrics& m = r.metrics;

    r.hist_a = log_binned_histogram(m.activity, options.bin_ratio);
    r.hist_d = log_binned_histogram(m.local_activity, options.bin_ratio);
    r.hist_n = log_binned_histogram(m.diversity, options.bin_ratio);
    r.hist_l = log_binned_histogram(m.thread_length, options.bin_ratio);
    r.hist_u = log_binned_histogram(m.unique_users, options.bin_ratio);
    r.hist_a_raw = raw_histogram(m.activity);

    auto try_fit = [](std::optional<FitResult>& slot, auto&& fn) {
        try {
            slot = fn();
        } catch (const StatsError&) {
            slot.reset();
        }
    };
    try_fit(r.fit_a, [&] { return fit_power_law(r.hist_a); });
    try_fit(r.fit_a_raw, [&] { return fit_power_law(r.hist_a_raw); });
    try_fit(r.fit_d, [&] { return fit_power_law(r.hist_d); });
    try_fit(r.fit_n, [&] { return fit_power_law(r.hist_n); });
    try_fit(r.fit_l, [&] { return fit_power_law(r.hist_l, options.tail_threshold); });
    try_fit(r.fit_u, [&] { return fit_power_law(r.hist_u, options.tail_threshold); });

    {
        std::vector<double> u(m.unique_users.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = static_cast<double>(m.unique_users[i]) /
                   static_cast<double>(m.thread_length[i]);
        r.u_of_l = log_binned_curve(m.thread_length, u, options.bin_ratio,
                                    options.curve_min_count);
    }
    try_fit(r.fit_u_of_l_result, [&] { return fit_u_of_l(r.u_of_l); });

    r.ed_vs_d = log_binned_curve(m.local_activity, m.local_mean_valence, options.bin_ratio,
                                 options.curve_min_count);
    r.el_vs_l = log_binned_curve(m.thread_length, m.thread_mean_valence, options.bin_ratio,
                                 options.curve_min_count);
    if (r.fit_u_of_l_result) {
        try {
            auto [ed, el] = fit_emotion_curves(m, r.fit_u_of_l_result->b, options.bin_ratio);
            r.fit_ed = ed;
            r.fit_el = el;
        } catch (const StatsError&) {
        }
    }

    if (m.activity.size() >= 2) r.bars = activity_vs_emotion(records, options.shuffle_seed);
    r.quarrel_share_abab = quarrel_share(records);
    return r;
}

std::vector<std::pair<std::string, double>> AnalysisResult::metric_rows() const {
    const ForumMetrics& m = metrics;
    return {
        {"total_posts", static_cast<double>(m.total_posts)},
        {"active_users", static_cast<double>(m.activity.size())},
        {"active_threads", static_cast<double>(m.thread_length.size())},
        {"ratio_positive", m.ratio_positive},
        {"ratio_neutral", m.ratio_neutral},
        {"ratio_negative", m.ratio_negative},
        {"mean_valence", m.mean_valence},
        {"a_max", static_cast<double>(m.a_max)},
        {"a_mean", m.a_mean},
        {"a_median", m.a_median},
        {"d_max", static_cast<double>(m.d_max)},
        {"d_mean", m.d_mean},
        {"quarrel_share_abab", quarrel_share_abab},
    };
}

std::vector<std::pair<std::string, double>> AnalysisResult::fit_rows() const {
    std::vector<std::pair<std::string, double>> rows;
    auto power = [&](const char* name, const std::optional<FitResult>& f) {
        rows.emplace_back(name, f ? f->gamma : kNaN);
        rows.emplace_back(std::string(name) + "_mle", f ? f->mle_gamma : kNaN);
        rows.emplace_back(std::string(name) + "_residual", f ? f->residual : kNaN);
    };
    power("beta", fit_a);          // user activity
    power("beta_raw", fit_a_raw);  // same, fitted on raw counts
    power("alpha", fit_d);         // in-thread activity
    power("tau", fit_n);           // diversity
    power("eta_L", fit_l);         // thread-length tail
    power("eta_U", fit_u);         // unique-user tail
    rows.emplace_back("uL_A", fit_u_of_l_result ? fit_u_of_l_result->A : kNaN);
    rows.emplace_back("uL_b", fit_u_of_l_result ? fit_u_of_l_result->b : kNaN);
    rows.emplace_back("uL_delta", fit_u_of_l_result ? fit_u_of_l_result->delta : kNaN);
    rows.emplace_back("uL_residual", fit_u_of_l_result ? fit_u_of_l_result->residual : kNaN);
    rows.emplace_back("ed_A1", fit_ed ? fit_ed->A : kNaN);
    rows.emplace_back("ed_B1", fit_ed ? fit_ed->B : kNaN);
    rows.emplace_back("ed_b", fit_ed ? fit_ed->b : kNaN);
    rows.emplace_back("eL_Aprime", fit_el ? fit_el->A : kNaN);
    rows.emplace_back("eL_Bprime", fit_el ? fit_el->B : kNaN);
    return rows;
}

void write_analysis(const std::string& dir, const RunStamp& stamp,
                    const AnalysisResult& analysis) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(fs::path(dir) / name);
        if (!out) throw TableError(std::string("cannot write ") + name + " in " + dir);
        return out;
    };
    {
        auto out = open("metrics.tsv");
        const auto rows = analysis.metric_rows();
        write_named_values(out, stamp, rows);
    }
    {
        auto out = open("fits.tsv");
        const auto rows = analysis.fit_rows();
        write_named_values(out, stamp, rows);
    }
    auto hist = [&](const char* name, const Histogram& h) {
        auto out = open(name);
        write_histogram(out, stamp, h);
    };
    hist("hist_a.tsv", analysis.hist_a);
    hist("hist_a_raw.tsv", analysis.hist_a_raw);
    hist("hist_d.tsv", analysis.hist_d);
    hist("hist_n.tsv", analysis.hist_n);
    hist("hist_L.tsv", analysis.hist_l);
    hist("hist_U.tsv", analysis.hist_u);
    {
        auto out = open("u_of_L.tsv");
        write_curve(out, stamp, analysis.u_of_l, "L", "u");
    }
    {
        auto out = open("ed_vs_d.tsv");
        write_curve(out, stamp, analysis.ed_vs_d, "d", "e_mean");
    }
    {
        auto out = open("eL_vs_L.tsv");
        write_curve(out, stamp, analysis.el_vs_l, "L", "e_mean");
    }
    {
        auto out = open("dist_ea.tsv");
        write_distribution(out, stamp, analysis.metrics.user_mean_valence);
    }
    {
        auto out = open("dist_eL.tsv");
        write_distribution(out, stamp, analysis.metrics.thread_mean_valence);
    }
    {
        auto out = open("dist_ed.tsv");
        write_distribution(out, stamp, analysis.metrics.local_mean_valence);
    }
    if (!analysis.bars.bin_center.empty()) {
        auto out = open("activity_vs_emotion.tsv");
        write_activity_emotion(out, stamp, analysis.bars);
    }
}

}  // namespace forumsim
