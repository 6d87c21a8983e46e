#include "forumsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "forumsim/engine.hpp"
#include "forumsim/rng.hpp"

namespace forumsim {

void set_model_param(ModelParams& params, const std::string& name, double value) {
    if (name == "p_s") params.p_s = value;
    else if (name == "p_c") params.p_c = value;
    else if (name == "p_r") params.p_r = value;
    else if (name == "f_star") params.f_star = value;
    else if (name == "x_n") params.x_n = value;
    else if (name == "population") params.population = static_cast<std::int64_t>(value);
    else if (name == "n_threads") params.n_threads = static_cast<std::int64_t>(value);
    else if (name == "seed") params.seed = static_cast<std::uint64_t>(value);
    else throw SweepError("unknown parameter '" + name + "'");
}

void SweepPlan::validate() const {
    if (replicates < 1) throw SweepError("replicates must be >= 1");
    baseline.validate();
    for (const SweepAxis& axis : axes) {
        if (axis.values.empty()) throw SweepError("axis '" + axis.param + "' has no values");
        for (double v : axis.values) {
            ModelParams p = baseline;
            set_model_param(p, axis.param, v);
            p.validate();
        }
    }
}

namespace {

std::string trim_copy(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SweepError("cannot parse number '" + s + "' in " + where);
    }
}

}  // namespace

SweepPlan parse_sweep_plan(std::istream& in) {
    SweepPlan plan;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim_copy(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw SweepError("plan line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim_copy(stripped.substr(0, eq));
        const std::string value = trim_copy(stripped.substr(eq + 1));
        if (key.rfind("axis ", 0) == 0 || key.rfind("axis\t", 0) == 0) {
            SweepAxis axis;
            axis.param = trim_copy(key.substr(5));
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ','))
                axis.values.push_back(parse_double(trim_copy(item), "axis " + axis.param));
            plan.axes.push_back(std::move(axis));
        } else if (key == "replicates") {
            plan.replicates = static_cast<int>(parse_double(value, key));
        } else if (key == "bin_ratio") {
            plan.bin_ratio = parse_double(value, key);
        } else if (key == "agent_mix" || key == "source_mix") {
            std::stringstream ss(value);
            std::string item;
            std::array<double, 3> mix{};
            for (int i = 0; i < 3; ++i) {
                if (!std::getline(ss, item, ','))
                    throw SweepError(key + " needs 3 comma-separated values");
                mix[static_cast<std::size_t>(i)] = parse_double(trim_copy(item), key);
            }
            (key == "agent_mix" ? plan.baseline.agent_mix : plan.baseline.source_mix) = mix;
        } else {
            set_model_param(plan.baseline, key, parse_double(value, key));
        }
    }
    plan.validate();
    return plan;
}

SweepPlan parse_sweep_plan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SweepError("cannot open plan file '" + path + "'");
    return parse_sweep_plan(in);
}

PeakResult peak_of_curve(std::span<const CurvePoint> curve) {
    PeakResult res;
    if (curve.size() < 3) return res;
    // trend: least-squares log law over the whole curve
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(curve.size());
    for (const CurvePoint& p : curve) {
        const double lx = std::log(p.x);
        sx += lx;
        sy += p.y;
        sxx += lx * lx;
        sxy += lx * p.y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;

    double best_dev = 0.0;
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const double y = curve[i].y;
        const bool local_max = y > curve[i - 1].y && y > curve[i + 1].y;
        const bool local_min = y < curve[i - 1].y && y < curve[i + 1].y;
        if (!local_max && !local_min) continue;
        const double dev = std::abs(y - (intercept + slope * std::log(curve[i].x)));
        if (!res.found || dev > best_dev) {
            res.found = true;
            best_dev = dev;
            res.l_peak = curve[i].x;
            res.e_peak = y;
        }
    }
    return res;
}

std::uint64_t sweep_cell_seed(std::uint64_t base_seed, std::size_t cell, int replicate) {
    return mix64(base_seed ^ mix64((static_cast<std::uint64_t>(cell) << 32) ^
                                   static_cast<std::uint64_t>(replicate)));
}

namespace {

SweepValue summarize(const std::vector<double>& xs) {
    SweepValue v;
    if (xs.empty()) return v;
    double sum = 0;
    for (double x : xs) sum += x;
    v.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - v.mean) * (x - v.mean);
        v.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return v;
}

}  // namespace

SweepReport run_sweep(const SweepPlan& plan, int n_workers) {
    plan.validate();
    SweepReport report;
    report.replicates = plan.replicates;
    report.bin_ratio = plan.bin_ratio;

    std::size_t n_cells = 1;
    for (const SweepAxis& axis : plan.axes) n_cells *= axis.values.size();

    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        SweepCell out;
        ModelParams params = plan.baseline;
        std::size_t rest = cell;
        for (std::size_t ax = plan.axes.size(); ax-- > 0;) {
            const SweepAxis& axis = plan.axes[ax];
            const double v = axis.values[rest % axis.values.size()];
            rest /= axis.values.size();
            set_model_param(params, axis.param, v);
            out.settings.emplace_back(axis.param, v);
        }
        std::reverse(out.settings.begin(), out.settings.end());

        std::vector<double> pos, neu, neg, posts, qfrac, mval, peak_l, peak_e;
        std::map<double, std::vector<double>> curve_acc;
        for (int rep = 0; rep < plan.replicates; ++rep) {
            ModelParams p = params;
            p.seed = sweep_cell_seed(plan.baseline.seed, cell, rep);
            const SimulationOutput sim = run_simulation(p, n_workers);
            if (sim.total_posts == 0) {
                posts.push_back(0.0);
                continue;
            }
            const ForumMetrics metrics = compute_metrics(sim.records);
            pos.push_back(metrics.ratio_positive);
            neu.push_back(metrics.ratio_neutral);
            neg.push_back(metrics.ratio_negative);
            posts.push_back(static_cast<double>(sim.total_posts));
            qfrac.push_back(sim.quarrel_fraction);
            mval.push_back(metrics.mean_valence);
            const auto curve = log_binned_curve(metrics.thread_length,
                                                metrics.thread_mean_valence, plan.bin_ratio,
                                                /*min_count=*/5);
            for (const CurvePoint& cp : curve) curve_acc[cp.x].push_back(cp.y);
            const PeakResult peak = peak_of_curve(curve);
            if (peak.found) {
                out.peaks_found++;
                peak_l.push_back(peak.l_peak);
                peak_e.push_back(peak.e_peak);
            }
        }
        out.ratio_positive = summarize(pos);
        out.ratio_neutral = summarize(neu);
        out.ratio_negative = summarize(neg);
        out.total_posts = summarize(posts);
        out.quarrel_fraction = summarize(qfrac);
        out.mean_valence = summarize(mval);
        out.peak_location = summarize(peak_l);
        out.peak_value = summarize(peak_e);
        for (const auto& [x, ys] : curve_acc) {
            const SweepValue v = summarize(ys);
            out.curve.push_back({x, v, static_cast<int>(ys.size())});
        }
        report.cells.push_back(std::move(out));
    }
    return report;
}

}  // namespace forumsim
