// Test-only oracles, independent of the library's implementation paths.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "forumsim/rng.hpp"

namespace forumsim::testing {

// Devroye's rejection sampler for the (unbounded) Zipf distribution,
// P(X = k) ~ k^-gamma with gamma > 1.
inline std::int64_t zipf_sample(Rng& rng, double gamma) {
    const double b = std::pow(2.0, gamma - 1.0);
    for (;;) {
        const double u = rng.u01();
        const double v = rng.u01();
        const double xf = std::floor(std::pow(u, -1.0 / (gamma - 1.0)));
        if (xf < 1.0 || xf > 9e18) continue;
        const double t = std::pow(1.0 + 1.0 / xf, gamma - 1.0);
        if (v * xf * (t - 1.0) / (b - 1.0) <= t / b) return static_cast<std::int64_t>(xf);
    }
}

// Brute-force quarrel-run oracle: enumerate every window that alternates
// strictly between exactly two distinct authors, keep those of length
// >= 4, then select left-to-right greedily (earliest start, then longest)
// without overlap.
struct OracleRun {
    std::int64_t start = 0;
    std::int64_t length = 0;
};

inline bool window_alternates(const std::vector<int>& authors, std::int64_t s, std::int64_t e) {
    const int a = authors[static_cast<std::size_t>(s)];
    if (s + 1 > e) return false;
    const int b = authors[static_cast<std::size_t>(s + 1)];
    if (a == b) return false;
    for (std::int64_t k = s; k <= e; ++k)
        if (authors[static_cast<std::size_t>(k)] != ((k - s) % 2 == 0 ? a : b)) return false;
    return true;
}

inline std::vector<OracleRun> quarrel_oracle(const std::vector<int>& authors) {
    const std::int64_t n = static_cast<std::int64_t>(authors.size());
    std::vector<OracleRun> qualifying;
    for (std::int64_t s = 0; s < n; ++s)
        for (std::int64_t e = s + 3; e < n; ++e)
            if (window_alternates(authors, s, e)) qualifying.push_back({s, e - s + 1});
    std::vector<OracleRun> chosen;
    std::int64_t cursor = 0;
    for (;;) {
        const OracleRun* best = nullptr;
        for (const OracleRun& r : qualifying) {
            if (r.start < cursor) continue;
            if (!best || r.start < best->start ||
                (r.start == best->start && r.length > best->length))
                best = &r;
        }
        if (!best) break;
        chosen.push_back(*best);
        cursor = best->start + best->length;
    }
    return chosen;
}

}  // namespace forumsim::testing
