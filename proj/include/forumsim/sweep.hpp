#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "forumsim/model.hpp"
#include "forumsim/stats.hpp"

namespace forumsim {

struct SweepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sets one scalar ModelParams field by name ("p_s", "p_c", "p_r",
// "f_star", "x_n", "population", "n_threads", "seed").
// Throws SweepError for unknown names.
void set_model_param(ModelParams& params, const std::string& name, double value);

struct SweepAxis {
    std::string param;
    std::vector<double> values;
};

struct SweepPlan {
    ModelParams baseline;
    std::vector<SweepAxis> axes;  // cells = Cartesian product, last axis fastest
    int replicates = 5;
    double bin_ratio = kDefaultBinRatio;

    void validate() const;  // every axis value must pass ModelParams::validate
};

// Plain-text plan: `key = value` lines for baseline fields and
// `replicates`, plus `axis <param> = v1, v2, ...` lines. '#' comments.
SweepPlan parse_sweep_plan(std::istream& in);
SweepPlan parse_sweep_plan_file(const std::string& path);

// Location and value of the curve's characteristic bump: among interior
// bins that are local extrema of the binned <e>_L(L) curve, the one
// deviating most from the fitted log-law trend (ties toward smaller L).
struct PeakResult {
    bool found = false;
    double l_peak = 0.0;
    double e_peak = 0.0;
};

PeakResult peak_of_curve(std::span<const CurvePoint> curve);

struct SweepValue {
    double mean = 0.0;
    double sd = 0.0;
};

struct SweepCurvePoint {
    double x = 0.0;
    SweepValue e;
    int replicates = 0;
};

struct SweepCell {
    std::vector<std::pair<std::string, double>> settings;
    SweepValue ratio_positive, ratio_neutral, ratio_negative;
    SweepValue total_posts, quarrel_fraction, mean_valence;
    SweepValue peak_location, peak_value;
    int peaks_found = 0;
    std::vector<SweepCurvePoint> curve;  // <e>_L(L), averaged over replicates
};

struct SweepReport {
    int replicates = 0;
    double bin_ratio = 0.0;
    std::vector<SweepCell> cells;
};

// One full simulation per (cell, replicate); replicate seeds derive
// deterministically from the baseline seed, so cells are independent of
// execution order and worker count.
SweepReport run_sweep(const SweepPlan& plan, int n_workers = 1);

std::uint64_t sweep_cell_seed(std::uint64_t base_seed, std::size_t cell, int replicate);

}  // namespace forumsim
