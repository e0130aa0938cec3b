#pragma once

// Two-qubit entanglement and quality measures: Wootters concurrence (general
// spin-flip construction plus a closed-form fast path for X-shaped states)
// and Bell-state fidelity.

#include <vector>

#include "entrev/qmat.hpp"

namespace entrev {

enum class BsmOutcome { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

// Coefficient vector of the Bell state in the computational basis
// {|00>, |01>, |10>, |11>}.
std::vector<cplx> bell_vector(BsmOutcome which);

struct Concurrence {
    double value;  // in [0, 1]
};

struct Fidelity {
    double value;  // in [0, 1]
};

// Wootters concurrence of a normalized two-qubit state:
// C = max(0, l1 - l2 - l3 - l4) where the l_i are the descending square
// roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).  Computed via
// the Hermitian similar form sqrt(rho) S rho* S sqrt(rho) so the eigensolver
// only ever sees Hermitian input.
Concurrence concurrence(const DensityMatrix& rho);

// Closed form for states whose only nonzero entries sit on the diagonal and
// anti-diagonal: C = 2 max(0, |r14| - sqrt(r22 r33), |r23| - sqrt(r11 r44)).
// Throws ArgumentError when any non-X entry exceeds 1e-12.
Concurrence concurrence_xstate(const DensityMatrix& rho);

// <target| rho |target>.
Fidelity bell_fidelity(const DensityMatrix& rho, BsmOutcome target);

}  // namespace entrev
