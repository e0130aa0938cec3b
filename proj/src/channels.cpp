#include "entrev/channels.hpp"

#include <cmath>
#include <utility>

namespace entrev {

namespace {

constexpr double kZeroBranchCutoff = 1e-15;

CMatrix zero2() { return CMatrix(2); }

}  // namespace

DampingStrength::DampingStrength(double value) : d(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ArgumentError("damping strength must lie in [0, 1]");
    }
}

ReversingStrength::ReversingStrength(double value) : r(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ArgumentError("reversing strength must lie in [0, 1]");
    }
}

void KrausChannel::check_completeness(double tol) const {
    if (ops.empty()) {
        throw ContractViolationError("channel has no Kraus operators");
    }
    CMatrix sum(ops.front().dim);
    for (const CMatrix& k : ops) sum = sum + k.adjoint() * k;
    if (max_abs_diff(sum, CMatrix::identity(sum.dim)) > tol) {
        throw ContractViolationError("Kraus completeness sum differs from identity");
    }
}

KrausChannel amplitude_damping(DampingStrength d) {
    CMatrix no_jump = zero2();
    no_jump.at(0, 0) = 1.0;
    no_jump.at(1, 1) = std::sqrt(1.0 - d.d);
    CMatrix jump = zero2();
    jump.at(0, 1) = std::sqrt(d.d);
    KrausChannel ch{{no_jump, jump}, "amplitude_damping"};
    ch.check_completeness();
    return ch;
}

KrausChannel reversal(ReversingStrength r) {
    CMatrix success = zero2();
    success.at(0, 0) = std::sqrt(1.0 - r.r);
    success.at(1, 1) = 1.0;
    CMatrix failure = zero2();
    failure.at(1, 0) = std::sqrt(r.r);
    KrausChannel ch{{success, failure}, "reversal"};
    ch.check_completeness();
    return ch;
}

CMatrix apply_qubit_op(const CMatrix& rho, const CMatrix& op, int target, int qubit_count) {
    if (op.dim != 2) {
        throw ArgumentError("apply_qubit_op: operator must be 2x2");
    }
    if (target < 0 || target >= qubit_count) {
        throw ArgumentError("apply_qubit_op: target qubit out of range");
    }
    const int d = rho.dim;
    const int mask = 1 << (qubit_count - 1 - target);  // big-endian
    const cplx k00 = op.at(0, 0), k01 = op.at(0, 1);
    const cplx k10 = op.at(1, 0), k11 = op.at(1, 1);

    // Row transform K rho, then column transform (.) K^dag.
    CMatrix tmp(d);
    for (int r = 0; r < d; ++r) {
        const int r0 = r & ~mask;
        const int r1 = r0 | mask;
        const bool hi = (r & mask) != 0;
        const cplx ka = hi ? k10 : k00;
        const cplx kb = hi ? k11 : k01;
        for (int c = 0; c < d; ++c) {
            tmp.at(r, c) = ka * rho.at(r0, c) + kb * rho.at(r1, c);
        }
    }
    CMatrix out(d);
    const cplx k00c = std::conj(k00), k01c = std::conj(k01);
    const cplx k10c = std::conj(k10), k11c = std::conj(k11);
    for (int c = 0; c < d; ++c) {
        const int c0 = c & ~mask;
        const int c1 = c0 | mask;
        const bool hi = (c & mask) != 0;
        const cplx ka = hi ? k10c : k00c;
        const cplx kb = hi ? k11c : k01c;
        for (int r = 0; r < d; ++r) {
            out.at(r, c) = tmp.at(r, c0) * ka + tmp.at(r, c1) * kb;
        }
    }
    return out;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch, int target) {
    const int n = rho.qubit_count();
    if (target < 0 || target >= n) {
        throw ArgumentError("apply_channel: target qubit out of range");
    }
    CMatrix out(rho.dim());
    for (const CMatrix& k : ch.ops) {
        out = out + apply_qubit_op(rho.mat, k, target, n);
    }
    return DensityMatrix{std::move(out), rho.norm_kind};
}

HeraldedResult apply_heralded(const DensityMatrix& rho, const KrausChannel& ch, int branch,
                              int target) {
    if (branch < 0 || branch >= static_cast<int>(ch.ops.size())) {
        throw ArgumentError("apply_heralded: branch index out of range");
    }
    const int n = rho.qubit_count();
    if (target < 0 || target >= n) {
        throw ArgumentError("apply_heralded: target qubit out of range");
    }
    CMatrix raw = apply_qubit_op(rho.mat, ch.ops[branch], target, n);
    const double total = rho.mat.trace().real();
    const double p = raw.trace().real() / total;
    if (p < kZeroBranchCutoff) {
        throw ZeroProbabilityBranchError("heralded branch has vanishing probability");
    }
    CMatrix normalized = cplx(1.0 / raw.trace().real()) * raw;
    return HeraldedResult{DensityMatrix{std::move(normalized), NormKind::Normalized}, p};
}

}  // namespace entrev
