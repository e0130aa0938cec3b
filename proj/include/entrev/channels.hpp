#pragma once

// Kraus-operator channels on single qubits of a multi-qubit state: amplitude
// damping and its probabilistic weak-measurement reversal, applied either
// deterministically (summed over branches) or heralded (one branch, with the
// branch probability reported).

#include <string>
#include <vector>

#include "entrev/qmat.hpp"

namespace entrev {

// Damping strength D in [0, 1]; D = 0 is the noiseless channel, D = 1 fully
// relaxes |1> to |0>.
struct DampingStrength {
    double d;
    explicit DampingStrength(double value);
};

// Reversing strength R in [0, 1].
struct ReversingStrength {
    double r;
    explicit ReversingStrength(double value);
};

struct KrausChannel {
    std::vector<CMatrix> ops;  // 2x2 each
    std::string label;

    // Sum_i K_i^dag K_i == I within tol; throws ContractViolationError.
    void check_completeness(double tol = 1e-12) const;
};

// Branch 0 is the no-jump operator |0><0| + sqrt(1-D)|1><1|, branch 1 the
// jump sqrt(D)|0><1|.
KrausChannel amplitude_damping(DampingStrength d);

// Branch 0 is the heralded-success operator sqrt(1-R)|0><0| + |1><1|, branch
// 1 the failure sqrt(R)|1><0|.
KrausChannel reversal(ReversingStrength r);

// rho' = sum_i K_i rho K_i^dag with each K_i acting on `target` and identity
// elsewhere.  Trace is preserved.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, int target);

struct HeraldedResult {
    DensityMatrix state;  // normalized
    double probability;   // tr(K rho K^dag)
};

// Applies one Kraus branch and renormalizes; throws
// ZeroProbabilityBranchError when the branch probability is below 1e-15.
HeraldedResult apply_heralded(const DensityMatrix& rho, const KrausChannel& ch, int branch,
                              int target);

// K rho K^dag for a 2x2 operator acting on one qubit; shared kernel for the
// channel routines and the swap pipeline.
CMatrix apply_qubit_op(const CMatrix& rho, const CMatrix& op, int target, int qubit_count);

}  // namespace entrev
