#pragma once

#include <map>
#include <memory>
#include <set>

#include "amdrelay/games/games.hpp"

namespace amdrelay {

// Paired-seed executable form of the two game-hop reductions.
//
// The direct relay games here sample lazily: the adversary-visible
// ciphertexts are drawn as fresh uniforms from named per-edge streams and
// the one-time-pad keys are back-solved only when something (corruption,
// final decryption) pins them. That is a change of variables on the key
// randomness, so the game is distributed exactly like the eager-key game
// (the test suite checks this against the RelaySession machinery), while
// consuming the identical named streams as the reduction adversaries below.
// Under a shared trial seed, the direct game and the reduction-wrapped
// secret-sharing game then agree trial by trial, which is the executable
// statement of the two proof equalities.

// Per-edge uniform draws shared by the lazy games and the reductions.
FieldVec stream_vec(const Rng& root, uint64_t a, uint64_t b, const FieldSpec& spec, size_t len);

struct LazyTrialTranscript {
    ShareVector shares;
    ShareVector decrypted; // forge game only
    std::vector<FieldVec> initial_ciphertexts;
    std::set<int> corrupted;
};

TrialOutcome lazy_forge_relay_trial(const Scheme& scheme, const RelayNetwork& net,
                                    ForgeRelayAdversary& adv, const Rng& trial_rng, bool gate = true,
                                    LazyTrialTranscript* transcript = nullptr);
TrialOutcome lazy_ind_relay_trial(const Scheme& scheme, const RelayNetwork& net, IndRelayAdversary& adv,
                                  const Rng& trial_rng, bool gate = true,
                                  LazyTrialTranscript* transcript = nullptr);

// How the reduction classified each path when translating the adversary's
// final ciphertexts into shifts.
struct ReductionPathRecord {
    enum class Kind { missing, corrupted, not_fully_relayed, fully_relayed };
    Kind kind;
    std::optional<FieldVec> shift;
};

// Shift-robustness adversary built from a relay-integrity adversary: it
// simulates the relay game (random ciphertexts on uncorrupted paths, keys
// derived consistently with the view at corruption time) and translates the
// delivered ciphertexts into a shift vector, summing per-hop ciphertext
// differences on fully relayed paths.
class ForgeToShiftReduction final : public ShiftAdversary {
public:
    ForgeToShiftReduction(std::unique_ptr<ForgeRelayAdversary> inner, const RelayNetwork& net,
                          const Rng& trial_rng);
    ~ForgeToShiftReduction() override;

    FieldVec choose_secret(const Scheme& scheme, RandomSource& adv) override;
    std::vector<std::optional<FieldVec>> choose_shifts(const Scheme& scheme, const FieldVec& s,
                                                       SssCorruptOracle& oracle,
                                                       RandomSource& adv) override;

    const std::vector<ReductionPathRecord>& transcript() const { return records_; }
    std::map<std::pair<int, int>, FieldVec> derived_keys() const;
    std::vector<FieldVec> simulated_initial_ciphertexts() const;

private:
    struct Impl;
    std::unique_ptr<ForgeRelayAdversary> inner_;
    std::unique_ptr<Impl> impl_;
    std::vector<ReductionPathRecord> records_;
};

// Confidentiality counterpart: wraps a relay-indistinguishability adversary
// into a plain secret-sharing indistinguishability adversary via the same
// oracle simulation, forwarding the final guess.
class IndToSssReduction final : public IndSssAdversary {
public:
    IndToSssReduction(std::unique_ptr<IndRelayAdversary> inner, const RelayNetwork& net,
                      const Rng& trial_rng);
    ~IndToSssReduction() override;

    std::pair<FieldVec, FieldVec> choose_secrets(const Scheme& scheme, RandomSource& adv) override;
    int guess(const Scheme& scheme, const FieldVec& s0, const FieldVec& s1, SssCorruptOracle& oracle,
              RandomSource& adv) override;

    std::map<std::pair<int, int>, FieldVec> derived_keys() const;
    std::vector<FieldVec> simulated_initial_ciphertexts() const;

private:
    struct Impl;
    std::unique_ptr<IndRelayAdversary> inner_;
    std::unique_ptr<Impl> impl_;
};

// Convenience constructors mirroring the reduction direction.
std::unique_ptr<ShiftAdversary> reduce_forge_to_shift(std::unique_ptr<ForgeRelayAdversary> inner,
                                                      const RelayNetwork& net, const Rng& trial_rng);
std::unique_ptr<IndSssAdversary> reduce_ind_to_sss(std::unique_ptr<IndRelayAdversary> inner,
                                                   const RelayNetwork& net, const Rng& trial_rng);

// Coupled execution: one trial of the lazy direct game and one trial of the
// wrapped secret-sharing game from the same trial seed.
struct CoupledOutcome {
    TrialOutcome direct;
    TrialOutcome reduced;
    bool agree() const { return direct.win == reduced.win && direct.flagged == reduced.flagged; }
};

CoupledOutcome coupled_forge_trial(const Scheme& scheme, const RelayNetwork& net,
                                   const AdversaryFactory<ForgeRelayAdversary>& factory,
                                   const Rng& trial_rng, bool gate = true,
                                   LazyTrialTranscript* direct_transcript = nullptr,
                                   std::vector<ReductionPathRecord>* reduction_transcript = nullptr);
CoupledOutcome coupled_ind_trial(const Scheme& scheme, const RelayNetwork& net,
                                 const AdversaryFactory<IndRelayAdversary>& factory, const Rng& trial_rng,
                                 bool gate = true);

struct CoupledReport {
    uint64_t trials = 0;
    uint64_t mismatches = 0;
    uint64_t direct_wins = 0;
    uint64_t reduced_wins = 0;
};

CoupledReport run_coupled_forge(const Scheme& scheme, const RelayNetwork& net,
                                const AdversaryFactory<ForgeRelayAdversary>& factory,
                                const GameOptions& opts);
CoupledReport run_coupled_ind(const Scheme& scheme, const RelayNetwork& net,
                              const AdversaryFactory<IndRelayAdversary>& factory,
                              const GameOptions& opts);

} // namespace amdrelay
