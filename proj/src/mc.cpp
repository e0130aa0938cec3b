#include "entrev/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace entrev {

namespace {

constexpr std::uint64_t kDrawsPerTrial = 8;  // 5 used, headroom reserved

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

using State16 = std::array<cplx, 16>;

// K acting on qubit `target` (big-endian) of a 4-qubit pure state.
void apply_op_vec(State16& psi, const CMatrix& k, int target) {
    const int mask = 1 << (3 - target);
    const cplx k00 = k.at(0, 0), k01 = k.at(0, 1);
    const cplx k10 = k.at(1, 0), k11 = k.at(1, 1);
    for (int i = 0; i < 16; ++i) {
        if (i & mask) continue;
        const cplx lo = psi[i];
        const cplx hi = psi[i | mask];
        psi[i] = k00 * lo + k01 * hi;
        psi[i | mask] = k10 * lo + k11 * hi;
    }
}

double norm_sq(const State16& psi) {
    double s = 0.0;
    for (const cplx& c : psi) s += std::norm(c);
    return s;
}

void renormalize(State16& psi) {
    const double scale = 1.0 / std::sqrt(norm_sq(psi));
    for (cplx& c : psi) c *= scale;
}

// Samples one Kraus branch; returns the branch index and collapses psi.
int sample_branch(State16& psi, const KrausChannel& ch, int target, double u) {
    State16 b0 = psi;
    apply_op_vec(b0, ch.ops[0], target);
    const double p0 = norm_sq(b0);
    if (u < p0) {
        psi = b0;
        renormalize(psi);
        return 0;
    }
    apply_op_vec(psi, ch.ops[1], target);
    renormalize(psi);
    return 1;
}

struct Shard {
    std::array<std::array<std::uint64_t, 4>, 2> counts{};
    std::uint64_t pair_successes = 0;
};

const std::array<BsmOutcome, 4> kOutcomes = {BsmOutcome::PhiPlus, BsmOutcome::PhiMinus,
                                             BsmOutcome::PsiPlus, BsmOutcome::PsiMinus};

Shard run_range(const McConfig& cfg, std::uint64_t lo, std::uint64_t hi) {
    const auto [nq1, nq2] =
        cfg.model == RepeaterModel::TwoWay ? std::pair{1, 2} : std::pair{1, 3};
    const KrausChannel damp = amplitude_damping(DampingStrength(cfg.damping));
    const KrausChannel rev = reversal(ReversingStrength(cfg.reversing));

    State16 initial{};
    initial[0b0000] = cfg.pair1.a * cfg.pair2.a;
    initial[0b0011] = cfg.pair1.a * cfg.pair2.b;
    initial[0b1100] = cfg.pair1.b * cfg.pair2.a;
    initial[0b1111] = cfg.pair1.b * cfg.pair2.b;

    std::array<std::vector<cplx>, 4> bells;
    for (int o = 0; o < 4; ++o) bells[o] = bell_vector(kOutcomes[o]);

    Shard shard;
    for (std::uint64_t t = lo; t < hi; ++t) {
        auto draw = [&](std::uint64_t slot) {
            return counter_uniform(cfg.seed, t * kDrawsPerTrial + slot);
        };
        State16 psi = initial;
        sample_branch(psi, damp, nq1, draw(0));
        sample_branch(psi, damp, nq2, draw(1));
        const bool ok1 = sample_branch(psi, rev, nq1, draw(2)) == 0;
        const bool ok2 = sample_branch(psi, rev, nq2, draw(3)) == 0;
        shard.pair_successes += static_cast<std::uint64_t>(ok1) + ok2;

        // Bell weights on qubits (B, C): contract the projector amplitude
        // <chi|psi> over the middle two bits for each (a, d).
        std::array<double, 4> w{};
        for (int o = 0; o < 4; ++o) {
            const std::vector<cplx>& chi = bells[o];
            double total = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int d = 0; d < 2; ++d) {
                    cplx amp = 0.0;
                    for (int bc = 0; bc < 4; ++bc) {
                        if (chi[bc] == cplx{}) continue;
                        amp += std::conj(chi[bc]) * psi[a * 8 + bc * 2 + d];
                    }
                    total += std::norm(amp);
                }
            w[o] = total;
        }
        const double u = draw(4);
        double acc = 0.0;
        int picked = 3;
        for (int o = 0; o < 4; ++o) {
            acc += w[o];
            if (u < acc) {
                picked = o;
                break;
            }
        }
        shard.counts[ok1 && ok2 ? 1 : 0][picked] += 1;
    }
    return shard;
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t z = mix64(seed + 0x9E3779B97F4A7C15ull * (counter + 1));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::uint64_t McStats::success_total() const {
    return counts[1][0] + counts[1][1] + counts[1][2] + counts[1][3];
}

double McStats::pair_success_freq() const {
    return trials == 0 ? 0.0
                       : static_cast<double>(pair_successes) / (2.0 * static_cast<double>(trials));
}

double McStats::joint_success_freq() const {
    return trials == 0 ? 0.0
                       : static_cast<double>(success_total()) / static_cast<double>(trials);
}

double McStats::outcome_freq_given_success(BsmOutcome o) const {
    const std::uint64_t n = success_total();
    return n == 0 ? 0.0
                  : static_cast<double>(counts[1][static_cast<int>(o)]) /
                        static_cast<double>(n);
}

double McStats::cell_freq(bool success, BsmOutcome o) const {
    return trials == 0 ? 0.0
                       : static_cast<double>(counts[success ? 1 : 0][static_cast<int>(o)]) /
                             static_cast<double>(trials);
}

double McStats::cell_stderr(double p) const {
    return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double McStats::empirical_cost(OutcomePolicy policy) const {
    const double p = pair_success_freq();
    if (p <= 0.0) return std::numeric_limits<double>::infinity();
    if (policy == OutcomePolicy::KeepAll) return 2.0 / p;
    const double family =
        policy == OutcomePolicy::PhiOnly
            ? outcome_freq_given_success(BsmOutcome::PhiPlus) +
                  outcome_freq_given_success(BsmOutcome::PhiMinus)
            : outcome_freq_given_success(BsmOutcome::PsiPlus) +
                  outcome_freq_given_success(BsmOutcome::PsiMinus);
    if (family <= 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 / (p * family);
}

McStats run_trajectories(const McConfig& cfg) {
    if (cfg.trials < 1) {
        throw ArgumentError("run_trajectories: at least one trial required");
    }
    const int shards = cfg.shards < 1 ? 1 : cfg.shards;

    std::vector<Shard> results(shards);
    if (shards == 1) {
        results[0] = run_range(cfg, 0, cfg.trials);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (cfg.trials + shards - 1) / shards;
        for (int s = 0; s < shards; ++s) {
            const std::uint64_t lo = std::min<std::uint64_t>(s * chunk, cfg.trials);
            const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, cfg.trials);
            pool.emplace_back([&, s, lo, hi] { results[s] = run_range(cfg, lo, hi); });
        }
        for (std::thread& th : pool) th.join();
    }

    McStats stats;
    stats.trials = cfg.trials;
    for (const Shard& s : results) {
        stats.pair_successes += s.pair_successes;
        for (int i = 0; i < 2; ++i)
            for (int o = 0; o < 4; ++o) stats.counts[i][o] += s.counts[i][o];
    }
    return stats;
}

}  // namespace entrev
