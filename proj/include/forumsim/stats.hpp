#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "forumsim/record.hpp"

namespace forumsim {

struct StatsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binned distribution. Logarithmic bins have edges at bin_ratio^k; for
// integer-valued data the density is the count divided by the number of
// integers the bin covers, so a pure power law stays a straight line in
// log-log space down to the smallest bins.
struct HistogramBin {
    double lo = 0.0, hi = 0.0;  // real-valued bin edges
    double center = 0.0;        // geometric center of the covered integers
    std::int64_t count = 0;
    double density = 0.0;
};

struct Histogram {
    enum class Kind { raw, logarithmic };
    Kind kind = Kind::raw;
    double bin_ratio = 0.0;  // > 1 for logarithmic bins
    std::int64_t total = 0;  // sum of counts
    std::vector<HistogramBin> bins;
};

inline constexpr double kDefaultBinRatio = 1.5;

// values must be >= 1; bin_ratio > 1. Only occupied bins are stored.
Histogram log_binned_histogram(std::span<const std::int64_t> values, double bin_ratio);

// Exact per-integer-value counts (bin width 1).
Histogram raw_histogram(std::span<const std::int64_t> values);

// A fitted functional form plus diagnostics. Evaluate with operator().
struct FitResult {
    enum class Model {
        power_law,     // h ~ x^-gamma           (params: gamma, amplitude)
        shifted_power, // u = A (x + b)^-delta   (params: A, b, delta)
        log_law,       // y = A + B ln x         (params: A, B)
        shifted_log    // y = A + B ln(x + b)    (params: A, B, b)
    };
    Model model = Model::power_law;
    double gamma = 0.0, amplitude = 0.0;
    double A = 0.0, B = 0.0, b = 0.0, delta = 0.0;
    double mle_gamma = 0.0;  // discrete power-law MLE cross-check (power_law only)
    double x_min = 0.0, x_max = 0.0;
    int n_points = 0;
    double residual = 0.0;  // rms residual in the fit's own space

    double operator()(double x) const;
};

// Least-squares line on (ln x, ln density) over occupied bins whose
// centers fall in [x_min, x_max] (pass 0 for an open end). Also fills
// mle_gamma from a binned discrete power-law likelihood over the same
// range. Throws StatsError with fewer than 3 usable bins.
FitResult fit_power_law(const Histogram& hist, double x_min = 0.0, double x_max = 0.0);

// A point of a binned curve: mean of y over samples whose x fell in the bin.
struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
    std::int64_t count = 0;
};

std::vector<CurvePoint> log_binned_curve(std::span<const std::int64_t> x,
                                         std::span<const double> y, double bin_ratio,
                                         std::int64_t min_count = 1);

// Nonlinear least squares for u = A (L+b)^-delta, done as a profile
// search over b with the inner (ln A, delta) pair solved linearly in
// log space. Throws StatsError on degenerate input.
FitResult fit_u_of_l(std::span<const CurvePoint> points);

// Every observable derived from one event log. Source rows never appear
// in a ForumRecord, so user posts are counted exactly.
struct ForumMetrics {
    // per user (aligned)
    std::vector<std::int64_t> activity;        // a_i
    std::vector<std::int64_t> diversity;       // n_i
    std::vector<double> user_mean_valence;     // <e>_a
    // per thread (aligned)
    std::vector<std::int64_t> thread_length;   // L_j
    std::vector<std::int64_t> unique_users;    // U_j
    std::vector<double> thread_mean_valence;   // <e>_L
    // per (user, thread) pair (aligned)
    std::vector<std::int64_t> local_activity;  // d_i^j
    std::vector<double> local_mean_valence;    // <e>_d

    std::int64_t total_posts = 0;
    std::int64_t n_positive = 0, n_neutral = 0, n_negative = 0;
    double mean_valence = 0.0;
    double ratio_positive = 0.0, ratio_neutral = 0.0, ratio_negative = 0.0;
    std::int64_t a_max = 0, d_max = 0;
    double a_mean = 0.0, d_mean = 0.0, a_median = 0.0;
};

// Throws StatsError on an empty log.
ForumMetrics compute_metrics(std::span<const ForumRecord> records);

// Shifted-log fit <e>_d = A1 + B1 ln(d + b) with b taken from the u(L)
// fit, and log fit <e>_L = A' + B' ln L. Curves are log-binned first.
std::pair<FitResult, FitResult> fit_emotion_curves(const ForumMetrics& metrics,
                                                   double b_from_u_fit,
                                                   double bin_ratio = kDefaultBinRatio);

// Mean user activity per bin of <e>_a (width 0.1 over [-1,1]), for the
// original log and for a baseline with all post valences permuted
// uniformly at random (user/thread structure untouched).
struct ActivityEmotionBars {
    std::vector<double> bin_center;           // 20 centers: -0.95 .. 0.95
    std::vector<double> mean_activity;        // original; NaN when bin empty
    std::vector<std::int64_t> n_users;
    std::vector<double> mean_activity_shuffled;
    std::vector<std::int64_t> n_users_shuffled;
};

ActivityEmotionBars activity_vs_emotion(std::span<const ForumRecord> records,
                                        std::uint64_t shuffle_seed);

}  // namespace forumsim
