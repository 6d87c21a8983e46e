#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forumsim/record.hpp"
#include "forumsim/stats.hpp"
#include "forumsim/tables.hpp"

namespace forumsim {

// Knobs for the analysis product set; defaults mirror the headline
// figures (full-range fits for a/d/n, tail fits for U and L above 20).
struct AnalysisOptions {
    double bin_ratio = kDefaultBinRatio;
    double tail_threshold = 20.0;  // x_min for the L and U tail fits
    std::uint64_t shuffle_seed = 1;
    std::int64_t curve_min_count = 5;  // bin occupancy floor for mean curves
};

// Everything derived from one record log, ready to be written out.
struct AnalysisResult {
    ForumMetrics metrics;
    Histogram hist_a, hist_d, hist_n, hist_l, hist_u, hist_a_raw;
    std::vector<CurvePoint> u_of_l, ed_vs_d, el_vs_l;
    std::optional<FitResult> fit_a, fit_a_raw, fit_d, fit_n, fit_l, fit_u;
    std::optional<FitResult> fit_u_of_l_result, fit_ed, fit_el;
    ActivityEmotionBars bars;
    double quarrel_share_abab = 0.0;

    std::vector<std::pair<std::string, double>> metric_rows() const;
    std::vector<std::pair<std::string, double>> fit_rows() const;
};

// Computes the full product set. Fits that cannot be produced (too few
// bins and the like) are left empty rather than failing the run.
AnalysisResult analyze_records(std::span<const ForumRecord> records,
                               const AnalysisOptions& options);

// Writes the analysis tables into `dir` (created when absent).
// File names are fixed: metrics.tsv, fits.tsv, hist_*.tsv, u_of_L.tsv,
// dist_*.tsv, activity_vs_emotion.tsv, ed_vs_d.tsv, eL_vs_L.tsv.
void write_analysis(const std::string& dir, const RunStamp& stamp,
                    const AnalysisResult& analysis);

std::string run_id_for_params(const ModelParams& params);
std::string run_id_for_records(std::span<const ForumRecord> records,
                               const AnalysisOptions& options);

}  // namespace forumsim
