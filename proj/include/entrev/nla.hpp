#pragma once

// Noiseless linear amplification via quantum scissors, simulated in a
// three-mode Fock space, and the transmissivity <-> gain <-> reversing
// strength dictionary that lets the amplifier act as a reversal against
// photon loss on vacuum/single-photon qubits.
//
// Setup: mode 0 carries the input c0|0> + c1|1>; a single ancilla photon
// enters mode 2 and meets a beam splitter of transmissivity eta across
// modes (1, 2); mode 0 then mixes with mode 1 on a 50:50 beam splitter and
// both are photon-counted.  Heralding on exactly one photon at the mode-0
// detector and none at mode 1 leaves mode 2 in N(c0|0> + g c1|1>) with
// g = sqrt(eta/(1-eta)).

#include "entrev/channels.hpp"
#include "entrev/qmat.hpp"

namespace entrev {

// Beam-splitter transmissivity eta in [0.5, 1) and the derived gain
// g = sqrt(eta/(1-eta)) >= 1.
struct ScissorsConfig {
    double eta;
    double gain;
    explicit ScissorsConfig(double eta_in);
};

// R = 1 - 1/g^2 = 2 - 1/eta; eta below one half would mean R < 0.
ReversingStrength reversing_strength_from_eta(double eta);

// Photon loss on the vacuum/single-photon basis is amplitude damping with
// the same rate.
DampingStrength loss_as_damping(double loss_rate);

// Three bosonic modes, occupation 0..2 each (two photons total suffice for
// one input photon plus one ancilla photon).
struct FockState {
    static constexpr int kModes = 3;
    static constexpr int kCutoff = 2;
    std::vector<cplx> amps;  // index n0*9 + n1*3 + n2

    FockState() : amps(27) {}
    cplx& at(int n0, int n1, int n2) { return amps[n0 * 9 + n1 * 3 + n2]; }
    const cplx& at(int n0, int n1, int n2) const { return amps[n0 * 9 + n1 * 3 + n2]; }
    double norm() const;
};

// Real-amplitude beam splitter of transmissivity cos^2(theta) across modes
// (mode_i, mode_j): a_i -> cos(theta) a_i + sin(theta) a_j,
// a_j -> -sin(theta) a_i + cos(theta) a_j.  Photon number is conserved;
// states with more than two photons in the affected pair are rejected.
FockState beam_splitter(const FockState& in, int mode_i, int mode_j, double theta);

struct ScissorsResult {
    cplx out0;           // normalized output amplitudes
    cplx out1;
    double herald_prob;  // probability of the heralding pattern
};

// Full three-mode simulation; throws ZeroProbabilityBranchError if the
// heralding pattern has probability below 1e-15.
ScissorsResult scissors_truncate(cplx c0, cplx c1, double eta);

}  // namespace entrev
