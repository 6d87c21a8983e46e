#include "forumsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "forumsim/rng.hpp"

namespace forumsim {

namespace {

// First / last integer covered by the real interval [lo, hi).
std::int64_t first_int(double lo) { return static_cast<std::int64_t>(std::ceil(lo - 1e-9)); }
std::int64_t last_int(double hi) { return static_cast<std::int64_t>(std::ceil(hi - 1e-9)) - 1; }

int bin_index(std::int64_t v, double log_ratio) {
    return static_cast<int>(std::floor(std::log(static_cast<double>(v)) / log_ratio + 1e-12));
}

struct LinearFit {
    double slope = 0.0, intercept = 0.0, rms = 0.0;
    int n = 0;
};

LinearFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    LinearFit f;
    f.n = n;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double sse = 0;
    for (int i = 0; i < n; ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        sse += r * r;
    }
    f.rms = std::sqrt(sse / n);
    return f;
}

// Hurwitz zeta for s > 1, q >= 1 (Euler-Maclaurin, ~1e-12 relative).
double hurwitz_zeta(double s, double q) {
    constexpr int kDirect = 16;
    double sum = 0.0;
    for (int k = 0; k < kDirect; ++k) sum += std::pow(q + k, -s);
    const double m = q + kDirect;
    sum += std::pow(m, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(m, -s);
    sum += s * std::pow(m, -s - 1.0) / 12.0;
    sum -= s * (s + 1.0) * (s + 2.0) * std::pow(m, -s - 3.0) / 720.0;
    return sum;
}

// Binned discrete power-law log-likelihood, open right tail.
double binned_mle_gamma(const std::vector<const HistogramBin*>& bins) {
    const double x0 = static_cast<double>(first_int(bins.front()->lo));
    auto neg_loglik = [&](double g) {
        double ll = 0.0;
        std::int64_t n = 0;
        for (const HistogramBin* b : bins) {
            if (b->count == 0) continue;
            const std::int64_t lo = first_int(b->lo);
            const std::int64_t hi = last_int(b->hi);
            const double mass = hurwitz_zeta(g, static_cast<double>(lo)) -
                                hurwitz_zeta(g, static_cast<double>(hi) + 1.0);
            ll += static_cast<double>(b->count) * std::log(std::max(mass, 1e-300));
            n += b->count;
        }
        ll -= static_cast<double>(n) * std::log(hurwitz_zeta(g, x0));
        return -ll;
    };
    // golden-section search on (1, 25)
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1.000001, b = 25.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = neg_loglik(c), fd = neg_loglik(d);
    for (int it = 0; it < 200 && (b - a) > 1e-7; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = neg_loglik(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = neg_loglik(d);
        }
    }
    return (a + b) / 2.0;
}

}  // namespace

Histogram log_binned_histogram(std::span<const std::int64_t> values, double bin_ratio) {
    if (values.empty()) throw StatsError("log_binned_histogram: empty input");
    if (!(bin_ratio > 1.0)) throw StatsError("log_binned_histogram: bin_ratio must be > 1");
    const double lr = std::log(bin_ratio);
    std::unordered_map<int, std::int64_t> counts;
    for (std::int64_t v : values) {
        if (v < 1) throw StatsError("log_binned_histogram: values must be >= 1");
        counts[bin_index(v, lr)]++;
    }
    std::vector<int> keys;
    keys.reserve(counts.size());
    for (const auto& [k, c] : counts) keys.push_back(k);
    std::sort(keys.begin(), keys.end());

    Histogram h;
    h.kind = Histogram::Kind::logarithmic;
    h.bin_ratio = bin_ratio;
    h.total = static_cast<std::int64_t>(values.size());
    for (int k : keys) {
        HistogramBin bin;
        bin.lo = std::pow(bin_ratio, k);
        bin.hi = std::pow(bin_ratio, k + 1);
        const std::int64_t fi = first_int(bin.lo);
        const std::int64_t li = last_int(bin.hi);
        const std::int64_t n_int = std::max<std::int64_t>(li - fi + 1, 1);
        bin.count = counts[k];
        bin.center = std::sqrt(static_cast<double>(fi) * static_cast<double>(std::max(li, fi)));
        bin.density = static_cast<double>(bin.count) / static_cast<double>(n_int);
        h.bins.push_back(bin);
    }
    return h;
}

Histogram raw_histogram(std::span<const std::int64_t> values) {
    if (values.empty()) throw StatsError("raw_histogram: empty input");
    std::unordered_map<std::int64_t, std::int64_t> counts;
    for (std::int64_t v : values) {
        if (v < 1) throw StatsError("raw_histogram: values must be >= 1");
        counts[v]++;
    }
    std::vector<std::int64_t> keys;
    keys.reserve(counts.size());
    for (const auto& [k, c] : counts) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    Histogram h;
    h.kind = Histogram::Kind::raw;
    h.total = static_cast<std::int64_t>(values.size());
    for (std::int64_t k : keys) {
        HistogramBin bin;
        bin.lo = static_cast<double>(k);
        bin.hi = static_cast<double>(k + 1);
        bin.center = static_cast<double>(k);
        bin.count = counts[k];
        bin.density = static_cast<double>(bin.count);
        h.bins.push_back(bin);
    }
    return h;
}

double FitResult::operator()(double x) const {
    switch (model) {
        case Model::power_law: return amplitude * std::pow(x, -gamma);
        case Model::shifted_power: return A * std::pow(x + b, -delta);
        case Model::log_law: return A + B * std::log(x);
        case Model::shifted_log: return A + B * std::log(x + b);
    }
    return 0.0;
}

FitResult fit_power_law(const Histogram& hist, double x_min, double x_max) {
    std::vector<const HistogramBin*> sel;
    for (const HistogramBin& b : hist.bins) {
        if (b.count == 0) continue;
        if (x_min > 0.0 && b.center < x_min) continue;
        if (x_max > 0.0 && b.center > x_max) continue;
        sel.push_back(&b);
    }
    if (sel.size() < 3)
        throw StatsError("fit_power_law: need at least 3 occupied bins in range");
    std::vector<double> xs, ys;
    xs.reserve(sel.size());
    ys.reserve(sel.size());
    for (const HistogramBin* b : sel) {
        xs.push_back(std::log(b->center));
        ys.push_back(std::log(b->density));
    }
    const LinearFit f = ols(xs, ys);
    FitResult r;
    r.model = FitResult::Model::power_law;
    r.gamma = std::max(0.0, -f.slope);
    r.amplitude = std::exp(f.intercept);
    r.residual = f.rms;
    r.n_points = f.n;
    r.x_min = sel.front()->center;
    r.x_max = sel.back()->center;
    r.mle_gamma = binned_mle_gamma(sel);
    return r;
}

std::vector<CurvePoint> log_binned_curve(std::span<const std::int64_t> x,
                                         std::span<const double> y, double bin_ratio,
                                         std::int64_t min_count) {
    if (x.size() != y.size()) throw StatsError("log_binned_curve: size mismatch");
    if (x.empty()) throw StatsError("log_binned_curve: empty input");
    if (!(bin_ratio > 1.0)) throw StatsError("log_binned_curve: bin_ratio must be > 1");
    const double lr = std::log(bin_ratio);
    std::unordered_map<int, std::pair<double, std::int64_t>> acc;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 1) throw StatsError("log_binned_curve: x must be >= 1");
        auto& [sum, n] = acc[bin_index(x[i], lr)];
        sum += y[i];
        n += 1;
    }
    std::vector<int> keys;
    for (const auto& [k, v] : acc) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    std::vector<CurvePoint> out;
    for (int k : keys) {
        const auto& [sum, n] = acc[k];
        if (n < min_count) continue;
        const double lo = std::pow(bin_ratio, k), hi = std::pow(bin_ratio, k + 1);
        const std::int64_t fi = first_int(lo);
        const std::int64_t li = std::max(last_int(hi), fi);
        out.push_back({std::sqrt(static_cast<double>(fi) * static_cast<double>(li)),
                       sum / static_cast<double>(n), n});
    }
    return out;
}

FitResult fit_u_of_l(std::span<const CurvePoint> points) {
    std::vector<double> ls, us;
    for (const CurvePoint& p : points) {
        if (p.y > 0.0) {
            ls.push_back(p.x);
            us.push_back(p.y);
        }
    }
    if (ls.size() < 3) throw StatsError("fit_u_of_l: need at least 3 points with u > 0");
    if (*std::max_element(ls.begin(), ls.end()) == *std::min_element(ls.begin(), ls.end()))
        throw StatsError("fit_u_of_l: degenerate data (single L)");

    auto sse_at = [&](double b, LinearFit* out) {
        std::vector<double> xs, ys;
        xs.reserve(ls.size());
        ys.reserve(ls.size());
        for (std::size_t i = 0; i < ls.size(); ++i) {
            xs.push_back(std::log(ls[i] + b));
            ys.push_back(std::log(us[i]));
        }
        const LinearFit f = ols(xs, ys);
        if (out) *out = f;
        return f.rms;
    };

    // profile over the shift b by golden section
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1000.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = sse_at(c, nullptr), fd = sse_at(d, nullptr);
    for (int it = 0; it < 200 && (b - a) > 1e-6; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = sse_at(c, nullptr);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = sse_at(d, nullptr);
        }
    }
    const double b_best = (a + b) / 2.0;
    LinearFit lin;
    sse_at(b_best, &lin);

    FitResult r;
    r.model = FitResult::Model::shifted_power;
    r.A = std::exp(lin.intercept);
    r.b = b_best;
    r.delta = -lin.slope;
    r.residual = lin.rms;
    r.n_points = lin.n;
    r.x_min = *std::min_element(ls.begin(), ls.end());
    r.x_max = *std::max_element(ls.begin(), ls.end());
    return r;
}

ForumMetrics compute_metrics(std::span<const ForumRecord> records) {
    if (records.empty()) throw StatsError("compute_metrics: empty record log");

    std::unordered_map<std::int64_t, std::int32_t> user_idx, thread_idx;
    user_idx.reserve(records.size() / 16);
    thread_idx.reserve(records.size() / 16);
    auto intern = [](std::unordered_map<std::int64_t, std::int32_t>& m, std::int64_t key) {
        return m.try_emplace(key, static_cast<std::int32_t>(m.size())).first->second;
    };

    // (user, thread, valence) triples; sorted once to group the pairs.
    struct Triple {
        std::int32_t u, t;
        std::int8_t e;
    };
    std::vector<Triple> triples;
    triples.reserve(records.size());

    ForumMetrics m;
    m.total_posts = static_cast<std::int64_t>(records.size());
    for (const ForumRecord& r : records) {
        const std::int32_t u = intern(user_idx, r.author_id);
        const std::int32_t t = intern(thread_idx, r.thread_id);
        triples.push_back({u, t, static_cast<std::int8_t>(to_int(r.valence))});
        switch (r.valence) {
            case Valence::positive: m.n_positive++; break;
            case Valence::neutral: m.n_neutral++; break;
            case Valence::negative: m.n_negative++; break;
        }
    }

    const std::size_t n_users = user_idx.size();
    const std::size_t n_threads = thread_idx.size();
    m.activity.assign(n_users, 0);
    m.diversity.assign(n_users, 0);
    std::vector<std::int64_t> user_val(n_users, 0);
    m.thread_length.assign(n_threads, 0);
    m.unique_users.assign(n_threads, 0);
    std::vector<std::int64_t> thread_val(n_threads, 0);

    for (const Triple& tr : triples) {
        m.activity[static_cast<std::size_t>(tr.u)]++;
        user_val[static_cast<std::size_t>(tr.u)] += tr.e;
        m.thread_length[static_cast<std::size_t>(tr.t)]++;
        thread_val[static_cast<std::size_t>(tr.t)] += tr.e;
    }

    std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
        return std::tie(a.u, a.t) < std::tie(b.u, b.t);
    });
    for (std::size_t i = 0; i < triples.size();) {
        std::size_t j = i;
        std::int64_t val = 0;
        while (j < triples.size() && triples[j].u == triples[i].u && triples[j].t == triples[i].t) {
            val += triples[j].e;
            ++j;
        }
        const auto d = static_cast<std::int64_t>(j - i);
        m.local_activity.push_back(d);
        m.local_mean_valence.push_back(static_cast<double>(val) / static_cast<double>(d));
        m.diversity[static_cast<std::size_t>(triples[i].u)]++;
        m.unique_users[static_cast<std::size_t>(triples[i].t)]++;
        i = j;
    }

    m.user_mean_valence.resize(n_users);
    for (std::size_t i = 0; i < n_users; ++i)
        m.user_mean_valence[i] =
            static_cast<double>(user_val[i]) / static_cast<double>(m.activity[i]);
    m.thread_mean_valence.resize(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i)
        m.thread_mean_valence[i] =
            static_cast<double>(thread_val[i]) / static_cast<double>(m.thread_length[i]);

    const double n = static_cast<double>(m.total_posts);
    m.mean_valence = static_cast<double>(m.n_positive - m.n_negative) / n;
    m.ratio_positive = static_cast<double>(m.n_positive) / n;
    m.ratio_neutral = static_cast<double>(m.n_neutral) / n;
    m.ratio_negative = static_cast<double>(m.n_negative) / n;

    m.a_max = *std::max_element(m.activity.begin(), m.activity.end());
    m.d_max = *std::max_element(m.local_activity.begin(), m.local_activity.end());
    m.a_mean = n / static_cast<double>(n_users);
    m.d_mean = n / static_cast<double>(m.local_activity.size());
    std::vector<std::int64_t> sorted_a(m.activity);
    std::sort(sorted_a.begin(), sorted_a.end());
    const std::size_t half = sorted_a.size() / 2;
    m.a_median = sorted_a.size() % 2 == 1
                     ? static_cast<double>(sorted_a[half])
                     : (static_cast<double>(sorted_a[half - 1]) +
                        static_cast<double>(sorted_a[half])) / 2.0;
    return m;
}

std::pair<FitResult, FitResult> fit_emotion_curves(const ForumMetrics& metrics,
                                                   double b_from_u_fit, double bin_ratio) {
    const auto d_curve = log_binned_curve(metrics.local_activity, metrics.local_mean_valence,
                                          bin_ratio);
    if (d_curve.size() < 3) throw StatsError("fit_emotion_curves: too few d bins");
    std::vector<double> xs, ys;
    for (const CurvePoint& p : d_curve) {
        xs.push_back(std::log(p.x + b_from_u_fit));
        ys.push_back(p.y);
    }
    const LinearFit fd = ols(xs, ys);
    FitResult rd;
    rd.model = FitResult::Model::shifted_log;
    rd.A = fd.intercept;
    rd.B = fd.slope;
    rd.b = b_from_u_fit;
    rd.residual = fd.rms;
    rd.n_points = fd.n;
    rd.x_min = d_curve.front().x;
    rd.x_max = d_curve.back().x;

    const auto l_curve = log_binned_curve(metrics.thread_length, metrics.thread_mean_valence,
                                          bin_ratio);
    if (l_curve.size() < 3) throw StatsError("fit_emotion_curves: too few L bins");
    xs.clear();
    ys.clear();
    for (const CurvePoint& p : l_curve) {
        xs.push_back(std::log(p.x));
        ys.push_back(p.y);
    }
    const LinearFit fl = ols(xs, ys);
    FitResult rl;
    rl.model = FitResult::Model::log_law;
    rl.A = fl.intercept;
    rl.B = fl.slope;
    rl.residual = fl.rms;
    rl.n_points = fl.n;
    rl.x_min = l_curve.front().x;
    rl.x_max = l_curve.back().x;
    return {rd, rl};
}

namespace {

std::vector<double> bars_from(const std::vector<std::int64_t>& activity,
                              const std::vector<double>& mean_e,
                              std::vector<std::int64_t>& n_users) {
    std::vector<double> sums(20, 0.0);
    n_users.assign(20, 0);
    for (std::size_t i = 0; i < activity.size(); ++i) {
        int idx = static_cast<int>(std::floor((mean_e[i] + 1.0) / 0.1));
        idx = std::clamp(idx, 0, 19);
        sums[static_cast<std::size_t>(idx)] += static_cast<double>(activity[i]);
        n_users[static_cast<std::size_t>(idx)]++;
    }
    for (std::size_t k = 0; k < 20; ++k)
        sums[k] = n_users[k] > 0 ? sums[k] / static_cast<double>(n_users[k])
                                 : std::numeric_limits<double>::quiet_NaN();
    return sums;
}

}  // namespace

ActivityEmotionBars activity_vs_emotion(std::span<const ForumRecord> records,
                                        std::uint64_t shuffle_seed) {
    const ForumMetrics base = compute_metrics(records);
    if (base.activity.size() < 2)
        throw StatsError("activity_vs_emotion: need at least 2 users");

    ActivityEmotionBars out;
    out.bin_center.resize(20);
    for (int k = 0; k < 20; ++k) out.bin_center[static_cast<std::size_t>(k)] = -0.95 + 0.1 * k;
    out.mean_activity = bars_from(base.activity, base.user_mean_valence, out.n_users);

    // Permute all post valences uniformly; user/thread structure untouched.
    std::vector<ForumRecord> shuffled(records.begin(), records.end());
    Rng rng(shuffle_seed);
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
        const std::size_t j = rng.bounded(i + 1);
        std::swap(shuffled[i].valence, shuffled[j].valence);
    }
    const ForumMetrics sh = compute_metrics(shuffled);
    out.mean_activity_shuffled =
        bars_from(sh.activity, sh.user_mean_valence, out.n_users_shuffled);
    return out;
}

}  // namespace forumsim
