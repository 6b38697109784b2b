#pragma once

#include <cstdint>
#include <string>

namespace amdrelay {

// Outcome of one Monte Carlo security-game run. `bound` is the analytic
// upper bound on the win rate (for indistinguishability games the bound is
// 1/2 + advantage and deviation is judged two-sided around 1/2).
struct GameReport {
    std::string game;
    std::string adversary;
    uint64_t trials = 0;
    uint64_t wins = 0;
    uint64_t flagged = 0; // adversary protocol violations, counted as losses
    double rate = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    double bound = 0.0;
    bool two_sided = false;
    bool bound_exact = true; // false when the delta part is conjectured
    std::string params;
    uint64_t seed = 0;

    // Binomial sigma at the bound (at the 1/2 center for two-sided games).
    double sigma() const;
    bool exceeds_bound(double k_sigma = 3.0) const;
    std::string human_line() const;
};

// Wilson score interval at 95% (z = 1.96).
void wilson_interval(uint64_t wins, uint64_t trials, double& lo, double& hi);

} // namespace amdrelay
