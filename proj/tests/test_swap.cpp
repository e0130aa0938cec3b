#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entrev/measures.hpp"
#include "entrev/optimize.hpp"
#include "entrev/swap.hpp"
#include "test_support.hpp"

using namespace entrev;
using entrev::testing::TestRng;

namespace {

const std::array<BsmOutcome, 4> kAllOutcomes = {BsmOutcome::PhiPlus, BsmOutcome::PhiMinus,
                                                BsmOutcome::PsiPlus, BsmOutcome::PsiMinus};

SwapResult numeric(const PairAmplitudes& p1, const PairAmplitudes& p2, RepeaterModel model,
                   double d, double r, BsmOutcome o) {
    return swap_numeric(p1, p2, model, DampingStrength(d), DampingStrength(d),
                        ReversingStrength(r), ReversingStrength(r), o);
}

}  // namespace

TEST_CASE("noiseless swapping distributes the measured Bell state") {
    const PairAmplitudes bell = PairAmplitudes::bell();
    for (RepeaterModel model : {RepeaterModel::TwoWay, RepeaterModel::OneWay}) {
        for (BsmOutcome o : kAllOutcomes) {
            const SwapResult res = numeric(bell, bell, model, 0.0, 0.0, o);
            CHECK(res.branch_prob == doctest::Approx(0.25).epsilon(1e-12));
            CHECK(res.reversal_prob == doctest::Approx(1.0));
            const std::vector<cplx> chi = bell_vector(o);
            CHECK(max_abs_diff(res.state.mat, outer(chi, chi)) < 1e-12);
        }
    }
}

TEST_CASE("two-way damped state at D = 0.3 matches the explicit matrix") {
    // Hand-evaluated conditioned state for Bell inputs, outcome Phi+:
    // diagonal (1, D, D, Dbar^2 + D^2)/4 and corners Dbar/4, all divided by
    // the trace (2 + 2 D^2)/4.
    const double d = 0.3, db = 0.7;
    const double norm = (2.0 + 2.0 * d * d) / 4.0;
    CMatrix expected(4);
    expected.at(0, 0) = 0.25 / norm;
    expected.at(1, 1) = 0.25 * d / norm;
    expected.at(2, 2) = 0.25 * d / norm;
    expected.at(3, 3) = 0.25 * (db * db + d * d) / norm;
    expected.at(0, 3) = 0.25 * db / norm;
    expected.at(3, 0) = expected.at(0, 3);

    const PairAmplitudes bell = PairAmplitudes::bell();
    const SwapResult res =
        numeric(bell, bell, RepeaterModel::TwoWay, d, 0.0, BsmOutcome::PhiPlus);
    CHECK(max_abs_diff(res.state.mat, expected) < 1e-12);
    CHECK(res.branch_prob == doctest::Approx((1.0 + d * d) / 4.0).epsilon(1e-12));

    const SwapResult closed = twoway_phi_closed(bell, bell, DampingStrength(d),
                                                ReversingStrength(0.0));
    CHECK(max_abs_diff(closed.state.mat, expected) < 1e-12);
}

TEST_CASE("explicit projector route reduces to the conditioned pair state") {
    // Same pipeline spelled out with a tensor-built projector and a partial
    // trace over the measured qubits, at one grid point.
    const double d = 0.3;
    const PairAmplitudes bell = PairAmplitudes::bell();
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<cplx> psi(16);
    psi[0b0000] = 0.5;
    psi[0b0011] = 0.5;
    psi[0b1100] = 0.5;
    psi[0b1111] = 0.5;
    DensityMatrix rho{outer(psi, psi), NormKind::Normalized};
    rho = apply_channel(rho, amplitude_damping(DampingStrength(d)), 1);
    rho = apply_channel(rho, amplitude_damping(DampingStrength(d)), 2);

    const std::vector<cplx> chi = {s, 0.0, 0.0, s};
    const CMatrix projector =
        tensor(tensor(CMatrix::identity(2), outer(chi, chi)), CMatrix::identity(2));
    const CMatrix projected = projector * rho.mat * projector;
    DensityMatrix reduced =
        partial_trace(DensityMatrix{projected, NormKind::Heralded}, {0, 3});
    const double weight = reduced.mat.trace().real();
    reduced.mat = cplx(1.0 / weight) * reduced.mat;
    reduced.norm_kind = NormKind::Normalized;

    const SwapResult direct =
        numeric(bell, bell, RepeaterModel::TwoWay, d, 0.0, BsmOutcome::PhiPlus);
    CHECK(max_abs_diff(reduced.mat, direct.state.mat) < 1e-12);
    CHECK(weight == doctest::Approx(direct.branch_prob).epsilon(1e-12));
}

TEST_CASE("one-way psi branch at D = 0.4 without reversal") {
    const PairAmplitudes bell = PairAmplitudes::bell();
    const SwapResult res =
        numeric(bell, bell, RepeaterModel::OneWay, 0.4, 0.0, BsmOutcome::PsiPlus);
    const double expected = 0.6 - 0.4 * std::sqrt(0.6);  // = 0.2901613...
    CHECK(concurrence(res.state).value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(concurrence(res.state).value == doctest::Approx(0.29016133).epsilon(1e-6));
}

TEST_CASE("closed forms agree with the numeric pipeline") {
    TestRng rng;
    std::vector<std::pair<PairAmplitudes, PairAmplitudes>> inputs;
    inputs.emplace_back(PairAmplitudes::bell(), PairAmplitudes::bell());
    for (int i = 0; i < 10; ++i) {
        inputs.emplace_back(entrev::testing::random_pair(rng),
                            entrev::testing::random_pair(rng));
    }
    for (RepeaterModel model : {RepeaterModel::TwoWay, RepeaterModel::OneWay}) {
        for (const auto& [p1, p2] : inputs) {
            for (double d : {0.0, 0.25, 0.55, 0.85}) {
                for (double r : {0.0, 0.3, 0.7, 0.95}) {
                    for (BsmOutcome o : kAllOutcomes) {
                        const SwapResult n = numeric(p1, p2, model, d, r, o);
                        const SwapResult c = swap_closed(p1, p2, model, DampingStrength(d),
                                                         ReversingStrength(r), o);
                        CHECK(max_abs_diff(n.state.mat, c.state.mat) < 1e-10);
                        CHECK(std::abs(n.branch_prob - c.branch_prob) < 1e-10);
                        CHECK(std::abs(n.reversal_prob - c.reversal_prob) < 1e-10);
                    }
                }
            }
        }
    }
}

TEST_CASE("branch probabilities over the four outcomes sum to one") {
    TestRng rng;
    for (RepeaterModel model : {RepeaterModel::TwoWay, RepeaterModel::OneWay}) {
        for (int it = 0; it < 8; ++it) {
            const PairAmplitudes p1 = entrev::testing::random_pair(rng);
            const PairAmplitudes p2 = entrev::testing::random_pair(rng);
            const double d = rng.uniform(0.0, 0.9), r = rng.uniform(0.0, 0.9);
            double total = 0.0;
            for (BsmOutcome o : kAllOutcomes) {
                const SwapResult res = numeric(p1, p2, model, d, r, o);
                res.state.validate();
                total += res.branch_prob;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("plus and minus outcomes of a family share their concurrence") {
    TestRng rng;
    for (RepeaterModel model : {RepeaterModel::TwoWay, RepeaterModel::OneWay}) {
        for (int it = 0; it < 6; ++it) {
            const PairAmplitudes p1 = entrev::testing::random_pair(rng);
            const PairAmplitudes p2 = entrev::testing::random_pair(rng);
            const double d = rng.uniform(0.0, 0.9), r = rng.uniform(0.0, 0.9);
            const double c_plus =
                concurrence(numeric(p1, p2, model, d, r, BsmOutcome::PhiPlus).state).value;
            const double c_minus =
                concurrence(numeric(p1, p2, model, d, r, BsmOutcome::PhiMinus).state).value;
            CHECK(c_plus == doctest::Approx(c_minus).epsilon(1e-11));
            const double s_plus =
                concurrence(numeric(p1, p2, model, d, r, BsmOutcome::PsiPlus).state).value;
            const double s_minus =
                concurrence(numeric(p1, p2, model, d, r, BsmOutcome::PsiMinus).state).value;
            CHECK(s_plus == doctest::Approx(s_minus).epsilon(1e-11));
        }
    }
}

TEST_CASE("two-way psi concurrence does not depend on the reversing strength") {
    const PairAmplitudes bell = PairAmplitudes::bell();
    for (double d : {0.1, 0.4, 0.7}) {
        double lo = 2.0, hi = -1.0;
        for (int i = 0; i <= 9; ++i) {
            const double r = i * 0.1;
            const SwapResult res = twoway_psi_closed(bell, bell, DampingStrength(d),
                                                     ReversingStrength(r));
            const double c = concurrence(res.state).value;
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        CHECK(hi - lo < 1e-10);
        CHECK(hi == doctest::Approx(1.0 / (1.0 + d)).epsilon(1e-10));
    }
}

TEST_CASE("one-way psi concurrence is non-decreasing in the reversing strength") {
    const PairAmplitudes bell = PairAmplitudes::bell();
    for (double d : {0.2, 0.5, 0.62, 0.8}) {
        double prev = -1.0;
        for (int i = 0; i <= 19; ++i) {
            const double r = i * 0.05;
            const SwapResult res = oneway_psi_closed(bell, bell, DampingStrength(d),
                                                     ReversingStrength(r));
            const double c = concurrence(res.state).value;
            CHECK(c >= prev - 1e-12);
            prev = c;
        }
    }
}

TEST_CASE("bell-input concurrences match the reversing closed forms") {
    const PairAmplitudes bell = PairAmplitudes::bell();
    for (double d : {0.0, 0.2, 0.45, 0.62, 0.8}) {
        // One-way phi without reversal decays linearly.
        const SwapResult plain = oneway_phi_closed(bell, bell, DampingStrength(d),
                                                   ReversingStrength(0.0));
        CHECK(concurrence(plain.state).value == doctest::Approx(1.0 - d).epsilon(1e-10));
        for (double r : {0.0, 0.3, 0.7}) {
            const double db = 1.0 - d, rb = 1.0 - r;
            const SwapResult phi2 = twoway_phi_closed(bell, bell, DampingStrength(d),
                                                      ReversingStrength(r));
            const double expected2 = std::max(
                0.0, 2.0 * rb * (db - d * rb) /
                         (rb * rb * (1.0 + d) * (1.0 + d) + db * db));
            CHECK(concurrence(phi2.state).value ==
                  doctest::Approx(expected2).epsilon(1e-10));

            const SwapResult phi1 = oneway_phi_closed(bell, bell, DampingStrength(d),
                                                      ReversingStrength(r));
            const double expected1 =
                2.0 * db * rb / (rb * rb * (1.0 + d) + d * db * rb + db * db);
            CHECK(concurrence(phi1.state).value ==
                  doctest::Approx(expected1).epsilon(1e-10));
        }
    }
}

TEST_CASE("two-way phi branch hits sudden death at D = 0.5 without reversal") {
    const PairAmplitudes bell = PairAmplitudes::bell();
    const SwapResult at_half = twoway_phi_closed(bell, bell, DampingStrength(0.5),
                                                 ReversingStrength(0.0));
    CHECK(concurrence(at_half.state).value == doctest::Approx(0.0).epsilon(1e-12));

    for (double d : {0.1, 0.3, 0.45}) {
        const SwapResult res = twoway_phi_closed(bell, bell, DampingStrength(d),
                                                 ReversingStrength(0.0));
        CHECK(concurrence(res.state).value ==
              doctest::Approx(std::max(0.0, (1.0 - 2.0 * d) / (1.0 + d * d)))
                  .epsilon(1e-10));
    }
}

TEST_CASE("bell-input branch probabilities match the scalar closed forms") {
    const PairAmplitudes bell = PairAmplitudes::bell();
    TestRng rng;
    for (int it = 0; it < 12; ++it) {
        const double d = rng.uniform(0.0, 0.95), r = rng.uniform(0.0, 0.95);
        CHECK(twoway_phi_closed(bell, bell, DampingStrength(d), ReversingStrength(r))
                  .branch_prob == doctest::Approx(twoway_phi_branch_prob(d, r)).epsilon(1e-12));
        CHECK(twoway_psi_closed(bell, bell, DampingStrength(d), ReversingStrength(r))
                  .branch_prob == doctest::Approx(twoway_psi_branch_prob(d, r)).epsilon(1e-12));
        CHECK(oneway_phi_closed(bell, bell, DampingStrength(d), ReversingStrength(r))
                  .branch_prob == doctest::Approx(oneway_phi_branch_prob(d, r)).epsilon(1e-12));
        CHECK(oneway_psi_closed(bell, bell, DampingStrength(d), ReversingStrength(r))
                  .branch_prob == doctest::Approx(oneway_psi_branch_prob(d, r)).epsilon(1e-12));
    }
}

TEST_CASE("asymmetric strengths run through the numeric pipeline") {
    const PairAmplitudes bell = PairAmplitudes::bell();
    const SwapResult res =
        swap_numeric(bell, bell, RepeaterModel::TwoWay, DampingStrength(0.2),
                     DampingStrength(0.6), ReversingStrength(0.1), ReversingStrength(0.4),
                     BsmOutcome::PhiPlus);
    const double p1 = 1.0 - 0.5 * 0.1 * 1.2;
    const double p2 = 1.0 - 0.5 * 0.4 * 1.6;
    CHECK(res.reversal_prob == doctest::Approx(p1 * p2).epsilon(1e-12));
    res.state.validate();
}

TEST_CASE("impossible branches and family mismatches are rejected") {
    const PairAmplitudes bell = PairAmplitudes::bell();
    // Full reversal annihilates the psi branch of the two-way model.
    CHECK_THROWS_AS(twoway_psi_closed(bell, bell, DampingStrength(0.3),
                                      ReversingStrength(1.0)),
                    ZeroProbabilityBranchError);
    CHECK_THROWS_AS(numeric(bell, bell, RepeaterModel::TwoWay, 0.3, 1.0,
                            BsmOutcome::PsiPlus),
                    ZeroProbabilityBranchError);
    CHECK_THROWS_AS(twoway_phi_closed(bell, bell, DampingStrength(0.3),
                                      ReversingStrength(0.0), BsmOutcome::PsiPlus),
                    ArgumentError);
    CHECK_THROWS_AS(PairAmplitudes(1.0, 1.0), ArgumentError);
}
