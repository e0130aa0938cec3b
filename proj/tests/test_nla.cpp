#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entrev/channels.hpp"
#include "entrev/nla.hpp"
#include "test_support.hpp"

using namespace entrev;
using entrev::testing::TestRng;

TEST_CASE("transmissivity to reversing strength") {
    CHECK(reversing_strength_from_eta(0.5).r == doctest::Approx(0.0));
    CHECK(reversing_strength_from_eta(0.8).r == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(reversing_strength_from_eta(0.999).r == doctest::Approx(2.0 - 1.0 / 0.999));
    CHECK_THROWS_AS(reversing_strength_from_eta(0.4), ArgumentError);
    CHECK_THROWS_AS(reversing_strength_from_eta(1.0), ArgumentError);

    const ScissorsConfig cfg(0.8);
    CHECK(cfg.gain == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cfg.gain * cfg.gain == doctest::Approx(cfg.eta / (1.0 - cfg.eta)).epsilon(1e-12));
}

TEST_CASE("loss maps one-to-one onto damping") {
    CHECK(loss_as_damping(0.0).d == 0.0);
    CHECK(loss_as_damping(0.52).d == 0.52);
    // Two sequential lossy segments compose like damping strengths.
    const double t1 = 0.3, t2 = 0.25;
    const double composed = 1.0 - (1.0 - t1) * (1.0 - t2);
    CHECK(loss_as_damping(composed).d == doctest::Approx(1.0 - 0.7 * 0.75).epsilon(1e-15));
}

TEST_CASE("beam splitters conserve photon number and norm") {
    TestRng rng;
    for (int it = 0; it < 20; ++it) {
        FockState psi;
        // Random state with at most two photons spread over the three modes.
        psi.at(0, 0, 0) = rng.phase() * rng.uniform();
        psi.at(1, 0, 0) = rng.phase() * rng.uniform();
        psi.at(0, 1, 0) = rng.phase() * rng.uniform();
        psi.at(0, 0, 1) = rng.phase() * rng.uniform();
        psi.at(1, 0, 1) = rng.phase() * rng.uniform();
        psi.at(0, 1, 1) = rng.phase() * rng.uniform();
        psi.at(2, 0, 0) = rng.phase() * rng.uniform();
        const double scale = 1.0 / psi.norm();
        for (cplx& c : psi.amps) c *= scale;

        const FockState out = beam_splitter(psi, 0, 1, rng.uniform(0.0, M_PI / 2.0));
        CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));

        // Total photon number distribution is untouched.
        for (int n = 0; n <= 2; ++n) {
            double before = 0.0, after = 0.0;
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; b <= 2; ++b)
                    for (int c = 0; c <= 2; ++c) {
                        if (a + b + c != n) continue;
                        before += std::norm(psi.at(a, b, c));
                        after += std::norm(out.at(a, b, c));
                    }
            CHECK(after == doctest::Approx(before).epsilon(1e-12));
        }
    }
}

TEST_CASE("scissors at eta = 0.5 is the identity truncation") {
    TestRng rng;
    for (int it = 0; it < 10; ++it) {
        const double theta = rng.uniform(0.1, M_PI / 2.0 - 0.1);
        const cplx c0 = std::cos(theta), c1 = std::sin(theta) * rng.phase();
        const ScissorsResult res = scissors_truncate(c0, c1, 0.5);
        CHECK(std::abs(res.out0 - c0) < 1e-12);
        CHECK(std::abs(res.out1 - c1) < 1e-12);
        CHECK(res.herald_prob == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("scissors gain ratio at eta = 0.8 is two") {
    const double s = 1.0 / std::sqrt(2.0);
    const ScissorsResult res = scissors_truncate(s, s, 0.8);
    CHECK(std::abs(res.out1 / res.out0 - cplx(2.0)) < 1e-12);
}

TEST_CASE("scissors equals the heralded reversal branch on the qubit span") {
    TestRng rng;
    for (double eta : {0.5, 0.55, 0.65, 0.75, 0.85, 0.95}) {
        const double r = reversing_strength_from_eta(eta).r;
        const CMatrix success = reversal(ReversingStrength(r)).ops[0];
        for (int it = 0; it < 6; ++it) {
            const double theta = rng.uniform(0.05, M_PI / 2.0 - 0.05);
            const cplx c0 = std::cos(theta) * rng.phase();
            const cplx c1 = std::sin(theta) * rng.phase();
            const ScissorsResult sc = scissors_truncate(c0, c1, eta);

            cplx r0 = success.at(0, 0) * c0;
            cplx r1 = success.at(1, 1) * c1;
            const double n = std::sqrt(std::norm(r0) + std::norm(r1));
            CHECK(std::abs(sc.out0 - r0 / n) < 1e-10);
            CHECK(std::abs(sc.out1 - r1 / n) < 1e-10);

            // Herald probability is proportional to the reversal success
            // probability, with the fixed scissors factor eta/2.
            const double p_rev = std::norm(r0) + std::norm(r1);
            CHECK(sc.herald_prob == doctest::Approx(0.5 * eta * p_rev).epsilon(1e-10));
        }
    }
}

TEST_CASE("scissors after loss reproduces the reversed damped qubit") {
    // Send the |1>-leaning leg of an entangled pair through a lossy channel,
    // then undo it with the scissors tuned to the optimal reversing
    // strength; the resulting single-qubit state must match the heralded
    // reversal applied to the same damped state.
    const double s = 1.0 / std::sqrt(2.0);
    for (double d : {0.2, 0.5, 0.75}) {
        const double r = 2.0 * d / (1.0 + d);  // optimal single-pair strength
        const double eta = 1.0 / (2.0 - r);    // inverse of R = 2 - 1/eta
        CHECK(reversing_strength_from_eta(eta).r == doctest::Approx(r).epsilon(1e-12));

        DensityMatrix pair{outer({s, 0.0, 0.0, s}, {s, 0.0, 0.0, s}), NormKind::Normalized};
        pair = apply_channel(pair, amplitude_damping(loss_as_damping(d)), 1);
        const DensityMatrix reversed =
            apply_heralded(pair, reversal(ReversingStrength(r)), 0, 1).state;
        const DensityMatrix marginal = partial_trace(reversed, {1});

        // Scissors acts linearly, so apply its induced operator to the
        // damped marginal via the channel machinery.
        const ScissorsResult on0 = scissors_truncate(1.0, 0.0, eta);
        const ScissorsResult on1 = scissors_truncate(0.0, 1.0, eta);
        CMatrix k(2);
        k.at(0, 0) = on0.out0 * std::sqrt(on0.herald_prob);
        k.at(1, 1) = on1.out1 * std::sqrt(on1.herald_prob);
        const DensityMatrix damped_marginal =
            partial_trace(apply_channel(DensityMatrix{outer({s, 0.0, 0.0, s},
                                                            {s, 0.0, 0.0, s}),
                                                      NormKind::Normalized},
                                        amplitude_damping(loss_as_damping(d)), 1),
                          {1});
        CMatrix raw = k * damped_marginal.mat * k.adjoint();
        const double tr = raw.trace().real();
        raw = cplx(1.0 / tr) * raw;
        CHECK(max_abs_diff(raw, marginal.mat) < 1e-10);
    }
}

TEST_CASE("herald probability decreases toward unit transmissivity") {
    // For a ground-state-leaning input the gain costs heralding rate.
    const cplx c0 = std::sqrt(0.7), c1 = std::sqrt(0.3);
    double prev = 1.0;
    for (double eta : {0.5, 0.6, 0.7, 0.8, 0.9, 0.99}) {
        const double h = scissors_truncate(c0, c1, eta).herald_prob;
        CHECK(h > 0.0);
        CHECK(h < prev);
        prev = h;
    }
}
