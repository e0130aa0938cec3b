#pragma once

// Monte-Carlo trajectory sampling of the swap protocol: damping and reversal
// Kraus branches and the BSM outcome are drawn per trial on a pure 4-qubit
// state.  Randomness is counter-based (every draw is a pure function of seed,
// trial index and draw slot), so sharded runs reproduce the serial stream
// bit for bit and aggregation is plain integer addition.

#include <array>
#include <cstdint>

#include "entrev/optimize.hpp"
#include "entrev/swap.hpp"

namespace entrev {

struct McConfig {
    RepeaterModel model = RepeaterModel::TwoWay;
    double damping = 0.0;
    double reversing = 0.0;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    PairAmplitudes pair1 = PairAmplitudes::bell();
    PairAmplitudes pair2 = PairAmplitudes::bell();
    int shards = 1;  // sharding changes scheduling only, never the stats
};

struct McStats {
    std::uint64_t trials = 0;
    // counts[s][o]: s = 1 when both reversals heralded success, o indexes
    // {PhiPlus, PhiMinus, PsiPlus, PsiMinus}.  Failed-reversal trials keep
    // their sampled outcome; the cost accounting needs them in the
    // denominator.
    std::array<std::array<std::uint64_t, 4>, 2> counts{};
    // Per-pair reversal successes, pooled over both pairs (2 per trial).
    std::uint64_t pair_successes = 0;

    std::uint64_t success_total() const;

    double pair_success_freq() const;          // estimates P
    double joint_success_freq() const;         // estimates P_AB * P_CD
    double outcome_freq_given_success(BsmOutcome o) const;  // estimates 2B per family half
    double cell_freq(bool success, BsmOutcome o) const;
    double cell_stderr(double p) const;        // binomial sigma at trial count

    // Empirical Bell-pair cost of the policy: pairs are retried until their
    // reversal heralds success (1/P each, two per trial) and a +/- pair of
    // outcomes counts as one usable result, giving 2 / (P * freq(family)).
    double empirical_cost(OutcomePolicy policy) const;
};

McStats run_trajectories(const McConfig& cfg);

// Uniform draw in [0, 1) as a pure function of (seed, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

}  // namespace entrev
