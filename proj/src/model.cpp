#include "forumsim/model.hpp"

#include <cmath>

namespace forumsim {

Valence valence_from_int(long long value) {
    switch (value) {
        case -1: return Valence::negative;
        case 0: return Valence::neutral;
        case 1: return Valence::positive;
        default:
            throw std::invalid_argument("valence must be -1, 0 or 1, got " +
                                        std::to_string(value));
    }
}

namespace {

void check_prob(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

void check_mix(const std::array<double, 3>& mix, const char* name) {
    double sum = 0.0;
    for (double p : mix) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument(std::string(name) + " entries must lie in [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(name) + " must sum to 1 within 1e-9");
}

}  // namespace

void ModelParams::validate() const {
    if (population < 2)
        throw std::invalid_argument("population must be >= 2");
    if (n_threads < 0)
        throw std::invalid_argument("n_threads must be >= 0");
    check_mix(agent_mix, "agent_mix");
    check_mix(source_mix, "source_mix");
    check_prob(p_s, "p_s");
    check_prob(p_c, "p_c");
    check_prob(p_r, "p_r");
    check_prob(x_n, "x_n");
    if (!(f_star > 0.0 && f_star <= 1.0))
        throw std::invalid_argument("f_star must lie in (0,1]");
}

}  // namespace forumsim
