#include "entrev/swap.hpp"

#include <cmath>
#include <utility>

namespace entrev {

namespace {

constexpr double kZeroBranchCutoff = 1e-15;

bool is_phi(BsmOutcome o) {
    return o == BsmOutcome::PhiPlus || o == BsmOutcome::PhiMinus;
}

double outcome_sign(BsmOutcome o) {
    return (o == BsmOutcome::PhiPlus || o == BsmOutcome::PsiPlus) ? 1.0 : -1.0;
}

// Initial 4-qubit product state (a1|00> + b1|11>)_AB (x) (a2|00> + b2|11>)_CD.
std::vector<cplx> initial_vector(const PairAmplitudes& p1, const PairAmplitudes& p2) {
    std::vector<cplx> psi(16);
    // |abcd> -> index a*8 + b*4 + c*2 + d
    psi[0b0000] = p1.a * p2.a;
    psi[0b0011] = p1.a * p2.b;
    psi[0b1100] = p1.b * p2.a;
    psi[0b1111] = p1.b * p2.b;
    return psi;
}

std::pair<int, int> noisy_qubits(RepeaterModel model) {
    // TwoWay: intermediate qubits B, C.  OneWay: transmitted qubits B, D.
    return model == RepeaterModel::TwoWay ? std::pair{1, 2} : std::pair{1, 3};
}

struct ClosedFormParts {
    CMatrix unnormalized;  // trace equals 2 * B * P_AB * P_CD bookkeeping aside
    double p1;
    double p2;
};

SwapResult finish_closed(BsmOutcome outcome, ClosedFormParts parts) {
    const double tr = parts.unnormalized.trace().real();
    if (tr < kZeroBranchCutoff) {
        throw ZeroProbabilityBranchError("closed-form branch has vanishing probability");
    }
    const double branch = tr / (2.0 * parts.p1 * parts.p2);
    CMatrix normalized = cplx(1.0 / tr) * parts.unnormalized;
    return SwapResult{outcome, DensityMatrix{std::move(normalized), NormKind::Normalized},
                      branch, parts.p1 * parts.p2};
}

void require_family(BsmOutcome outcome, bool phi_family, const char* what) {
    if (is_phi(outcome) != phi_family) {
        throw ArgumentError(std::string(what) + ": outcome not in this branch family");
    }
}

}  // namespace

PairAmplitudes::PairAmplitudes(cplx a_in, cplx b_in) : a(a_in), b(b_in) {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12) {
        throw ArgumentError("pair amplitudes must satisfy |a|^2 + |b|^2 = 1");
    }
}

PairAmplitudes PairAmplitudes::bell() {
    const double s = 1.0 / std::sqrt(2.0);
    return PairAmplitudes(s, s);
}

double reversal_success_prob(const PairAmplitudes& pair, DampingStrength d,
                             ReversingStrength r) {
    const double a2 = std::norm(pair.a);
    const double b2 = std::norm(pair.b);
    const double rb = 1.0 - r.r;
    return rb * a2 + d.d * rb * b2 + (1.0 - d.d) * b2;
}

namespace {

struct Evolved {
    DensityMatrix state;  // normalized 4-qubit state after damping + reversal
    double reversal_prob;
};

Evolved evolve_pipeline(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                        RepeaterModel model, DampingStrength d1, DampingStrength d2,
                        ReversingStrength r1, ReversingStrength r2) {
    const auto [q1, q2] = noisy_qubits(model);

    DensityMatrix rho{outer(initial_vector(pair1, pair2), initial_vector(pair1, pair2)),
                      NormKind::Normalized};

    rho = apply_channel(rho, amplitude_damping(d1), q1);
    rho = apply_channel(rho, amplitude_damping(d2), q2);

    // Heralded success branches of the reversal; their probabilities multiply
    // because the pairs start in a product state.
    const HeraldedResult h1 = apply_heralded(rho, reversal(r1), 0, q1);
    HeraldedResult h2 = apply_heralded(h1.state, reversal(r2), 0, q2);
    return Evolved{std::move(h2.state), h1.probability * h2.probability};
}

// P rho P for the projector P = I (x) |chi><chi| (x) I on qubits (B, C).
// P rho P is supported on span{|a chi d>}, so its entries factor through the
// 4x4 contraction <a chi d| rho |a' chi d'>.
CMatrix bell_project(const CMatrix& rho16, BsmOutcome outcome) {
    const std::vector<cplx> chi = bell_vector(outcome);
    CMatrix block(4);
    for (int ad = 0; ad < 4; ++ad) {
        const int a = ad >> 1, d = ad & 1;
        for (int ad2 = 0; ad2 < 4; ++ad2) {
            const int a2 = ad2 >> 1, d2 = ad2 & 1;
            cplx sum = 0.0;
            for (int bc = 0; bc < 4; ++bc) {
                if (chi[bc] == cplx{}) continue;
                for (int bc2 = 0; bc2 < 4; ++bc2) {
                    if (chi[bc2] == cplx{}) continue;
                    sum += std::conj(chi[bc]) * chi[bc2] *
                           rho16.at(a * 8 + bc * 2 + d, a2 * 8 + bc2 * 2 + d2);
                }
            }
            block.at(ad, ad2) = sum;
        }
    }
    CMatrix projected(16);
    for (int ad = 0; ad < 4; ++ad) {
        const int a = ad >> 1, d = ad & 1;
        for (int ad2 = 0; ad2 < 4; ++ad2) {
            const int a2 = ad2 >> 1, d2 = ad2 & 1;
            const cplx value = block.at(ad, ad2);
            if (value == cplx{}) continue;
            for (int bc = 0; bc < 4; ++bc) {
                if (chi[bc] == cplx{}) continue;
                for (int bc2 = 0; bc2 < 4; ++bc2) {
                    if (chi[bc2] == cplx{}) continue;
                    projected.at(a * 8 + bc * 2 + d, a2 * 8 + bc2 * 2 + d2) =
                        chi[bc] * value * std::conj(chi[bc2]);
                }
            }
        }
    }
    return projected;
}

SwapResult project_outcome(const Evolved& evolved, BsmOutcome outcome) {
    const CMatrix projected = bell_project(evolved.state.mat, outcome);
    DensityMatrix reduced =
        partial_trace(DensityMatrix{projected, NormKind::Heralded}, {0, 3});
    const double branch = reduced.mat.trace().real();
    if (branch < kZeroBranchCutoff) {
        throw ZeroProbabilityBranchError("BSM branch has vanishing probability");
    }
    reduced.mat = cplx(1.0 / branch) * reduced.mat;
    reduced.norm_kind = NormKind::Normalized;
    return SwapResult{outcome, std::move(reduced), branch, evolved.reversal_prob};
}

}  // namespace

SwapResult swap_numeric(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                        RepeaterModel model, DampingStrength d1, DampingStrength d2,
                        ReversingStrength r1, ReversingStrength r2, BsmOutcome outcome) {
    return project_outcome(evolve_pipeline(pair1, pair2, model, d1, d2, r1, r2), outcome);
}

std::array<SwapResult, 4> swap_numeric_all(const PairAmplitudes& pair1,
                                           const PairAmplitudes& pair2, RepeaterModel model,
                                           DampingStrength d1, DampingStrength d2,
                                           ReversingStrength r1, ReversingStrength r2) {
    const Evolved evolved = evolve_pipeline(pair1, pair2, model, d1, d2, r1, r2);
    return {project_outcome(evolved, BsmOutcome::PhiPlus),
            project_outcome(evolved, BsmOutcome::PhiMinus),
            project_outcome(evolved, BsmOutcome::PsiPlus),
            project_outcome(evolved, BsmOutcome::PsiMinus)};
}

SwapResult twoway_phi_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                             DampingStrength d, ReversingStrength r, BsmOutcome outcome) {
    require_family(outcome, true, "twoway_phi_closed");
    const double D = d.d, Db = 1.0 - d.d, Rb = 1.0 - r.r;
    const cplx a = pair1.a, b = pair1.b, g = pair2.a, e = pair2.b;
    const double sign = outcome_sign(outcome);

    CMatrix m(4);
    m.at(0, 0) = Rb * Rb * std::norm(a) * std::norm(g);
    m.at(1, 1) = D * Rb * Rb * std::norm(a) * std::norm(e);
    m.at(2, 2) = D * Rb * Rb * std::norm(b) * std::norm(g);
    m.at(3, 3) = (D * D * Rb * Rb + Db * Db) * std::norm(b) * std::norm(e);
    m.at(0, 3) = sign * Db * Rb * a * std::conj(b) * g * std::conj(e);
    m.at(3, 0) = std::conj(m.at(0, 3));

    return finish_closed(outcome, {std::move(m), reversal_success_prob(pair1, d, r),
                                   reversal_success_prob(pair2, d, r)});
}

SwapResult twoway_psi_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                             DampingStrength d, ReversingStrength r, BsmOutcome outcome) {
    require_family(outcome, false, "twoway_psi_closed");
    const double D = d.d, Db = 1.0 - d.d, Rb = 1.0 - r.r;
    const cplx a = pair1.a, b = pair1.b, g = pair2.a, e = pair2.b;
    const double sign = outcome_sign(outcome);

    CMatrix m(4);
    m.at(1, 1) = Db * Rb * std::norm(a) * std::norm(e);
    m.at(2, 2) = Db * Rb * std::norm(b) * std::norm(g);
    m.at(3, 3) = 2.0 * D * Db * Rb * std::norm(b) * std::norm(e);
    m.at(1, 2) = sign * Db * Rb * a * std::conj(b) * std::conj(g) * e;
    m.at(2, 1) = std::conj(m.at(1, 2));

    return finish_closed(outcome, {std::move(m), reversal_success_prob(pair1, d, r),
                                   reversal_success_prob(pair2, d, r)});
}

SwapResult oneway_phi_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                             DampingStrength d, ReversingStrength r, BsmOutcome outcome) {
    require_family(outcome, true, "oneway_phi_closed");
    const double D = d.d, Db = 1.0 - d.d, Rb = 1.0 - r.r;
    const cplx a = pair1.a, b = pair1.b, g = pair2.a, e = pair2.b;
    const double sign = outcome_sign(outcome);

    CMatrix m(4);
    m.at(0, 0) = Rb * Rb * std::norm(a) * std::norm(g);
    m.at(2, 2) = D * Rb * Rb * std::norm(b) * std::norm(g) +
                 D * Db * Rb * std::norm(b) * std::norm(e);
    m.at(3, 3) = Db * Db * std::norm(b) * std::norm(e);
    m.at(0, 3) = sign * Db * Rb * a * std::conj(b) * g * std::conj(e);
    m.at(3, 0) = std::conj(m.at(0, 3));

    return finish_closed(outcome, {std::move(m), reversal_success_prob(pair1, d, r),
                                   reversal_success_prob(pair2, d, r)});
}

SwapResult oneway_psi_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                             DampingStrength d, ReversingStrength r, BsmOutcome outcome) {
    require_family(outcome, false, "oneway_psi_closed");
    const double D = d.d, Db = 1.0 - d.d, Rb = 1.0 - r.r;
    const cplx a = pair1.a, b = pair1.b, g = pair2.a, e = pair2.b;
    const double sign = outcome_sign(outcome);

    CMatrix m(4);
    m.at(0, 0) = D * Rb * Rb * std::norm(a) * std::norm(e);
    m.at(1, 1) = Db * Rb * std::norm(a) * std::norm(e);
    m.at(2, 2) = Db * Rb * std::norm(b) * std::norm(g) +
                 D * D * Rb * Rb * std::norm(b) * std::norm(e);
    m.at(3, 3) = D * Db * Rb * std::norm(b) * std::norm(e);
    m.at(1, 2) = sign * Db * Rb * a * std::conj(b) * std::conj(g) * e;
    m.at(2, 1) = std::conj(m.at(1, 2));

    return finish_closed(outcome, {std::move(m), reversal_success_prob(pair1, d, r),
                                   reversal_success_prob(pair2, d, r)});
}

SwapResult swap_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                       RepeaterModel model, DampingStrength d, ReversingStrength r,
                       BsmOutcome outcome) {
    if (model == RepeaterModel::TwoWay) {
        return is_phi(outcome) ? twoway_phi_closed(pair1, pair2, d, r, outcome)
                               : twoway_psi_closed(pair1, pair2, d, r, outcome);
    }
    return is_phi(outcome) ? oneway_phi_closed(pair1, pair2, d, r, outcome)
                           : oneway_psi_closed(pair1, pair2, d, r, outcome);
}

}  // namespace entrev
