#pragma once

#include "amdrelay/games/adversaries.hpp"
#include "amdrelay/games/report.hpp"
#include "amdrelay/rng.hpp"

namespace amdrelay {

struct GameOptions {
    uint64_t trials = 10000;
    uint64_t seed = 0;
    int jobs = 1;
    // The "T is unqualified" return gate. Disabling it is a harness
    // discriminative-power check, not a security estimate.
    bool enforce_unqualified_gate = true;
};

struct TrialOutcome {
    bool win = false;
    bool flagged = false;
};

// Single-trial entry points. `game_rand` supplies the challenger's
// randomness (challenge bit first for indistinguishability games, then the
// sharing); `adv_rand` is the adversary's. Tests drive these with scripted
// tapes for exhaustive enumeration.
TrialOutcome ind_sss_trial(const Scheme& scheme, IndSssAdversary& adv, RandomSource& game_rand,
                           RandomSource& adv_rand, bool gate = true);
TrialOutcome shift_robust_trial(const Scheme& scheme, ShiftAdversary& adv, RandomSource& game_rand,
                                RandomSource& adv_rand, bool gate = true);

// Relay-game trials over the eager protocol machinery (keys sampled at
// session setup, exactly as the games prescribe).
TrialOutcome ind_relay_trial(const Scheme& scheme, const RelayNetwork& net, IndRelayAdversary& adv,
                             const Rng& trial_rng, bool gate = true);
TrialOutcome forge_relay_trial(const Scheme& scheme, const RelayNetwork& net, ForgeRelayAdversary& adv,
                               const Rng& trial_rng, bool gate = true);

// Monte Carlo runners. Trials are independently seeded from the master
// seed, so reports are byte-identical for any `jobs` value.
GameReport run_ind_sss(const Scheme& scheme, const AdversaryFactory<IndSssAdversary>& factory,
                       const std::string& adversary_name, const GameOptions& opts);
GameReport run_shift_robust(const Scheme& scheme, const AdversaryFactory<ShiftAdversary>& factory,
                            const std::string& adversary_name, const GameOptions& opts);
GameReport run_ind_relay(const Scheme& scheme, const RelayNetwork& net,
                         const AdversaryFactory<IndRelayAdversary>& factory,
                         const std::string& adversary_name, const GameOptions& opts);
GameReport run_forge_relay(const Scheme& scheme, const RelayNetwork& net,
                           const AdversaryFactory<ForgeRelayAdversary>& factory,
                           const std::string& adversary_name, const GameOptions& opts);

// Analytic rate bounds for the four games (ind bounds are 1/2 + advantage).
double ind_sss_bound();
double shift_robust_bound(const Scheme& scheme, bool* exact);
double ind_relay_bound(const RelayNetwork& net);
double forge_relay_bound(const Scheme& scheme, const RelayNetwork& net, bool* exact);

} // namespace amdrelay
