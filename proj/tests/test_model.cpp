#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "forumsim/model.hpp"
#include "forumsim/rng.hpp"

using namespace forumsim;

TEST_CASE("interaction_factor is 1 only for opposed A/B pairs") {
    CHECK(interaction_factor(Category::A, Category::B, 0.86) == 1.0);
    CHECK(interaction_factor(Category::B, Category::A, 0.86) == 1.0);
    CHECK(interaction_factor(Category::A, Category::A, 0.86) == 0.86);
    CHECK(interaction_factor(Category::B, Category::B, 0.86) == 0.86);
    CHECK(interaction_factor(Category::N, Category::B, 1.0) == 1.0);
    for (Category r : {Category::A, Category::B, Category::N}) {
        CHECK(interaction_factor(r, Category::N, 0.5) == 0.5);
        CHECK(interaction_factor(Category::N, r, 0.5) == 0.5);
    }
}

TEST_CASE("comment_valence category rules") {
    // A-B / B-A is always negative, regardless of the draw
    for (double draw : {0.0, 0.5, 0.999}) {
        CHECK(comment_valence(Category::A, Category::B, 0.91, draw) == Valence::negative);
        CHECK(comment_valence(Category::B, Category::A, 0.91, draw) == Valence::negative);
    }
    // neutral authors are always neutral
    for (Category t : {Category::A, Category::B, Category::N})
        for (double draw : {0.0, 0.9})
            CHECK(comment_valence(Category::N, t, 0.91, draw) == Valence::neutral);
    // same non-neutral category is positive
    CHECK(comment_valence(Category::A, Category::A, 0.91, 0.2) == Valence::positive);
    CHECK(comment_valence(Category::B, Category::B, 0.91, 0.2) == Valence::positive);
    // A/B on N: x_n = 1 forces negative, x_n = 0 forces neutral
    CHECK(comment_valence(Category::A, Category::N, 1.0, 0.9999) == Valence::negative);
    CHECK(comment_valence(Category::B, Category::N, 0.0, 0.0) == Valence::neutral);
}

TEST_CASE("comment_valence never yields +1 on neutral targets nor -1 on same category") {
    for (double draw = 0.0; draw < 1.0; draw += 0.01) {
        for (Category a : {Category::A, Category::B})
            CHECK(comment_valence(a, Category::N, 0.91, draw) != Valence::positive);
        CHECK(comment_valence(Category::A, Category::A, 0.91, draw) != Valence::negative);
        CHECK(comment_valence(Category::B, Category::B, 0.91, draw) != Valence::negative);
    }
}

TEST_CASE("A-on-N negative frequency converges to x_n (binomial 3-sigma)") {
    const double x_n = 0.91;
    const int m = 100000;
    Rng rng(2024);
    int negatives = 0;
    for (int i = 0; i < m; ++i)
        if (comment_valence(Category::A, Category::N, x_n, rng.u01()) == Valence::negative)
            ++negatives;
    const double phat = static_cast<double>(negatives) / m;
    const double sigma = std::sqrt(x_n * (1 - x_n) / m);
    CHECK(std::abs(phat - x_n) < 3 * sigma);
}

TEST_CASE("valence_from_int accepts exactly -1, 0, 1") {
    CHECK(valence_from_int(-1) == Valence::negative);
    CHECK(valence_from_int(0) == Valence::neutral);
    CHECK(valence_from_int(1) == Valence::positive);
    CHECK_THROWS_AS(valence_from_int(2), std::invalid_argument);
    CHECK_THROWS_AS(valence_from_int(-2), std::invalid_argument);
}

TEST_CASE("ModelParams validation") {
    ModelParams p;  // defaults are valid
    CHECK_NOTHROW(p.validate());

    ModelParams bad = p;
    bad.population = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.agent_mix = {0.5, 0.5, 0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.p_c = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.f_star = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = p;
    bad.x_n = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
