#pragma once

// Entanglement swapping over two damped (and optionally reversed) pairs in
// two repeater layouts.  Two routes to the same answer are kept deliberately
// separate: swap_numeric runs the full 4-qubit pipeline (initial pairs,
// per-qubit channels, Bell projection, partial trace), while the *_closed
// functions build the outcome-conditioned pair state directly from closed
// forms.  Either layout places the Bell measurement on qubits B and C.
//
// Qubit layout (big-endian): A = 0, B = 1, C = 2, D = 3.  Pair (A,B) carries
// amplitudes (a, b) on |00>, |11>; pair (C,D) carries (a, b) likewise.
// TwoWay damps/reverses the measured qubits B and C; OneWay damps/reverses
// the transmitted qubits B and D.

#include <array>

#include "entrev/channels.hpp"
#include "entrev/measures.hpp"
#include "entrev/qmat.hpp"

namespace entrev {

// (a, b) amplitudes of a|00> + b|11>, |a|^2 + |b|^2 = 1 within 1e-12.
struct PairAmplitudes {
    cplx a;
    cplx b;
    PairAmplitudes(cplx a_in, cplx b_in);
    static PairAmplitudes bell();  // a = b = 1/sqrt(2)
};

enum class RepeaterModel { TwoWay, OneWay };

struct SwapResult {
    BsmOutcome outcome;
    DensityMatrix state;  // normalized state of the surviving pair (A,D)
    double branch_prob;   // probability of this outcome, given reversal success
    double reversal_prob; // product of the two heralding probabilities (1 if R = 0)
};

// Brute-force pipeline; supports asymmetric strengths.  Throws
// ZeroProbabilityBranchError when the requested outcome has probability
// below 1e-15.
SwapResult swap_numeric(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                        RepeaterModel model, DampingStrength d1, DampingStrength d2,
                        ReversingStrength r1, ReversingStrength r2, BsmOutcome outcome);

// Same pipeline, all four outcomes from one evolution, ordered
// {PhiPlus, PhiMinus, PsiPlus, PsiMinus}.
std::array<SwapResult, 4> swap_numeric_all(const PairAmplitudes& pair1,
                                           const PairAmplitudes& pair2, RepeaterModel model,
                                           DampingStrength d1, DampingStrength d2,
                                           ReversingStrength r1, ReversingStrength r2);

// Closed-form constructors for the symmetric case (equal strengths on both
// noisy qubits).  Each accepts only the outcomes of its own family.
SwapResult twoway_phi_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                             DampingStrength d, ReversingStrength r,
                             BsmOutcome outcome = BsmOutcome::PhiPlus);
SwapResult twoway_psi_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                             DampingStrength d, ReversingStrength r,
                             BsmOutcome outcome = BsmOutcome::PsiPlus);
SwapResult oneway_phi_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                             DampingStrength d, ReversingStrength r,
                             BsmOutcome outcome = BsmOutcome::PhiPlus);
SwapResult oneway_psi_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                             DampingStrength d, ReversingStrength r,
                             BsmOutcome outcome = BsmOutcome::PsiPlus);

// Dispatch helper covering all (model, outcome) combinations.
SwapResult swap_closed(const PairAmplitudes& pair1, const PairAmplitudes& pair2,
                       RepeaterModel model, DampingStrength d, ReversingStrength r,
                       BsmOutcome outcome);

// Per-pair reversal success probability P = (1-R)|a|^2 + D(1-R)|b|^2 + (1-D)|b|^2.
double reversal_success_prob(const PairAmplitudes& pair, DampingStrength d,
                             ReversingStrength r);

}  // namespace entrev
