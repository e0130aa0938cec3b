#include "entrev/measures.hpp"

#include <algorithm>
#include <cmath>

namespace entrev {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// sy x sy is real: the anti-diagonal (-1, 1, 1, -1).
CMatrix spin_flip_matrix() {
    CMatrix s(4);
    s.at(0, 3) = -1.0;
    s.at(1, 2) = 1.0;
    s.at(2, 1) = 1.0;
    s.at(3, 0) = -1.0;
    return s;
}

CMatrix matrix_sqrt_psd(const CMatrix& m) {
    HermitianEig eig = hermitian_eig(m);
    const int d = m.dim;
    CMatrix out(d);
    for (int k = 0; k < d; ++k) {
        // Structural zeros come back as +-1e-16 noise; taking their square
        // root would smear 1e-8 into the null space, so clamp below the
        // eigensolver's resolution.
        const double ev = eig.values[k] < 1e-13 ? 0.0 : eig.values[k];
        const double root = std::sqrt(ev);
        for (int i = 0; i < d; ++i) {
            const cplx vik = eig.vectors.at(i, k);
            if (vik == cplx{}) continue;
            for (int j = 0; j < d; ++j) {
                out.at(i, j) += root * vik * std::conj(eig.vectors.at(j, k));
            }
        }
    }
    return out;
}

void require_two_qubit_normalized(const DensityMatrix& rho, const char* what) {
    if (rho.dim() != 4) {
        throw ArgumentError(std::string(what) + ": expected a 4x4 density matrix");
    }
    if (rho.norm_kind != NormKind::Normalized ||
        std::abs(rho.mat.trace().real() - 1.0) > 1e-9) {
        throw ArgumentError(std::string(what) + ": state must be normalized");
    }
}

}  // namespace

std::vector<cplx> bell_vector(BsmOutcome which) {
    switch (which) {
        case BsmOutcome::PhiPlus:
            return {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
        case BsmOutcome::PhiMinus:
            return {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};
        case BsmOutcome::PsiPlus:
            return {0.0, kInvSqrt2, kInvSqrt2, 0.0};
        case BsmOutcome::PsiMinus:
            return {0.0, kInvSqrt2, -kInvSqrt2, 0.0};
    }
    throw ArgumentError("bell_vector: unknown outcome");
}

Concurrence concurrence(const DensityMatrix& rho) {
    require_two_qubit_normalized(rho, "concurrence");
    const CMatrix s = spin_flip_matrix();
    const CMatrix root = matrix_sqrt_psd(rho.mat);

    // The l_i are the eigenvalue square roots of the Hermitian form
    // sqrt(rho) S rho* S sqrt(rho) = B B^dag with B = sqrt(rho) S sqrt(rho)*,
    // i.e. the singular values of B.  Reading them off the augmented
    // Hermitian matrix [[0, B], [B^dag, 0]] (spectrum {+-sigma_i}) avoids
    // squaring, which would cost half the digits on the rank-deficient
    // states entanglement swapping produces.
    const CMatrix b = root * s * root.conjugate();
    CMatrix aug(8);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            aug.at(i, 4 + j) = b.at(i, j);
            aug.at(4 + j, i) = std::conj(b.at(i, j));
        }
    }
    const std::vector<double> spectrum = hermitian_eigenvalues(aug);
    const double c = spectrum[0] - spectrum[1] - spectrum[2] - spectrum[3];
    return Concurrence{std::max(c, 0.0)};
}

Concurrence concurrence_xstate(const DensityMatrix& rho) {
    require_two_qubit_normalized(rho, "concurrence_xstate");
    const CMatrix& m = rho.mat;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j || i + j == 3) continue;
            if (std::abs(m.at(i, j)) >= 1e-12) {
                throw ArgumentError("concurrence_xstate: state is not X-shaped");
            }
        }
    }
    const double r00 = m.at(0, 0).real();
    const double r11 = m.at(1, 1).real();
    const double r22 = m.at(2, 2).real();
    const double r33 = m.at(3, 3).real();
    const double outer = std::abs(m.at(0, 3)) - std::sqrt(std::max(r11 * r22, 0.0));
    const double inner = std::abs(m.at(1, 2)) - std::sqrt(std::max(r00 * r33, 0.0));
    return Concurrence{2.0 * std::max({0.0, outer, inner})};
}

Fidelity bell_fidelity(const DensityMatrix& rho, BsmOutcome target) {
    require_two_qubit_normalized(rho, "bell_fidelity");
    const std::vector<cplx> v = bell_vector(target);
    cplx f = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            f += std::conj(v[i]) * rho.mat.at(i, j) * v[j];
        }
    }
    return Fidelity{f.real()};
}

}  // namespace entrev
