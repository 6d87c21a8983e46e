#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace forumsim {

// Opinion camp of an agent or of a message. A and B are the two opposed
// camps, N is the neutral class.
enum class Category : std::uint8_t { A = 0, B = 1, N = 2 };

constexpr const char* to_string(Category c) {
    switch (c) {
        case Category::A: return "A";
        case Category::B: return "B";
        default: return "N";
    }
}

// Discrete emotion label of a post: -1 negative, 0 neutral, +1 positive.
enum class Valence : std::int8_t { negative = -1, neutral = 0, positive = 1 };

constexpr int to_int(Valence v) { return static_cast<int>(v); }

// Throws std::invalid_argument for anything outside {-1, 0, +1}.
Valence valence_from_int(long long value);

// All simulation controls. Defaults are the baseline parameter set used
// throughout; run_simulation() validates before running.
struct ModelParams {
    std::int64_t population = 25000;
    std::array<double, 3> agent_mix{0.32, 0.32, 0.36};   // A, B, N
    std::array<double, 3> source_mix{0.25, 0.25, 0.50};  // A, B, N
    std::int64_t n_threads = 110000;
    double p_s = 0.5;    // probability of reading the source
    double p_c = 0.93;   // base comment probability
    double p_r = 0.89;   // base quarrel-response probability
    double f_star = 0.86;
    double x_n = 0.91;   // P(negative) for an A/B comment on a neutral target
    std::uint64_t seed = 1;

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

inline constexpr int kSourceAuthor = -1;  // author_id sentinel for post 0
inline constexpr int kNoTarget = -1;      // target_id sentinel for post 0

// One node of a thread's reply graph. Post 0 is the source message; its
// valence field is meaningless by convention and never enters statistics.
struct Post {
    std::int32_t post_id = 0;
    std::int32_t author_id = kSourceAuthor;
    std::int32_t target_id = kNoTarget;
    std::int32_t indegree = 0;
    Category category = Category::N;
    Valence valence = Valence::neutral;
    bool in_quarrel = false;  // created inside the quarrel subroutine
};

// Interaction factor f(reader, target): 1 for the opposed A-B / B-A
// pairs, f_star for every other combination (neutral posts included).
inline double interaction_factor(Category reader, Category target, double f_star) {
    const bool opposed = (reader == Category::A && target == Category::B) ||
                         (reader == Category::B && target == Category::A);
    return opposed ? 1.0 : f_star;
}

// Valence of a comment given the author's and the target post's categories.
// `draw` is a uniform [0,1) variate consumed only on the A/B-on-N branch.
inline Valence comment_valence(Category author, Category target, double x_n, double draw) {
    if (author == Category::N) return Valence::neutral;
    if (target == Category::N) return draw < x_n ? Valence::negative : Valence::neutral;
    return author == target ? Valence::positive : Valence::negative;
}

}  // namespace forumsim
