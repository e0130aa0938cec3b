#include "entrev/nla.hpp"

#include <cmath>

namespace entrev {

namespace {

constexpr double kZeroBranchCutoff = 1e-15;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

ScissorsConfig::ScissorsConfig(double eta_in) : eta(eta_in) {
    if (!(eta_in >= 0.5 && eta_in < 1.0)) {
        throw ArgumentError("scissors transmissivity must lie in [0.5, 1)");
    }
    gain = std::sqrt(eta_in / (1.0 - eta_in));
}

ReversingStrength reversing_strength_from_eta(double eta) {
    ScissorsConfig cfg(eta);  // validates the range
    return ReversingStrength(2.0 - 1.0 / cfg.eta);
}

DampingStrength loss_as_damping(double loss_rate) { return DampingStrength(loss_rate); }

double FockState::norm() const {
    double s = 0.0;
    for (const cplx& c : amps) s += std::norm(c);
    return std::sqrt(s);
}

FockState beam_splitter(const FockState& in, int mode_i, int mode_j, double theta) {
    if (mode_i < 0 || mode_i >= FockState::kModes || mode_j < 0 ||
        mode_j >= FockState::kModes || mode_i == mode_j) {
        throw ArgumentError("beam_splitter: invalid mode pair");
    }
    const double ct = std::cos(theta);
    const double st = std::sin(theta);

    FockState out;
    int occ[3];
    for (occ[0] = 0; occ[0] <= FockState::kCutoff; ++occ[0])
        for (occ[1] = 0; occ[1] <= FockState::kCutoff; ++occ[1])
            for (occ[2] = 0; occ[2] <= FockState::kCutoff; ++occ[2]) {
                const cplx amp = in.at(occ[0], occ[1], occ[2]);
                if (amp == cplx{}) continue;
                const int m = occ[mode_i];
                const int n = occ[mode_j];
                if (m + n > FockState::kCutoff) {
                    throw ArgumentError(
                        "beam_splitter: photon number exceeds the mode cutoff");
                }
                // |m, n> = (a_i^+)^m (a_j^+)^n / sqrt(m! n!) |0, 0>; expand
                // both transformed creation operators binomially.
                for (int p = 0; p <= m; ++p) {
                    for (int q = 0; q <= n; ++q) {
                        // a_i^+ contributes ct^p st^(m-p); a_j^+ contributes
                        // (-st)^q ct^(n-q).  Resulting occupation:
                        // i gets p+q, j gets (m-p)+(n-q).
                        const double coeff =
                            std::pow(ct, p) * std::pow(st, m - p) *
                            std::pow(-st, q) * std::pow(ct, n - q) *
                            (factorial(m) / (factorial(p) * factorial(m - p))) *
                            (factorial(n) / (factorial(q) * factorial(n - q)));
                        const int ni = p + q;
                        const int nj = (m - p) + (n - q);
                        const double weight =
                            coeff * std::sqrt(factorial(ni) * factorial(nj) /
                                              (factorial(m) * factorial(n)));
                        int res[3] = {occ[0], occ[1], occ[2]};
                        res[mode_i] = ni;
                        res[mode_j] = nj;
                        out.at(res[0], res[1], res[2]) += weight * amp;
                    }
                }
            }
    return out;
}

ScissorsResult scissors_truncate(cplx c0, cplx c1, double eta) {
    if (std::abs(std::norm(c0) + std::norm(c1) - 1.0) > 1e-12) {
        throw ArgumentError("scissors_truncate: input must be normalized");
    }
    ScissorsConfig cfg(eta);

    FockState psi;
    psi.at(0, 0, 1) = c0;  // ancilla photon waits in mode 2
    psi.at(1, 0, 1) = c1;

    // Transmitted ancilla amplitude cos(theta) = sqrt(eta) stays in the
    // output mode 2; the reflected part feeds the 50:50 comparison.
    psi = beam_splitter(psi, 1, 2, std::acos(std::sqrt(cfg.eta)));
    psi = beam_splitter(psi, 0, 1, std::acos(std::sqrt(0.5)));

    // Herald: exactly one photon at the mode-0 detector, none at mode 1.
    const cplx out0 = psi.at(1, 0, 0);
    const cplx out1 = psi.at(1, 0, 1);
    const double herald = std::norm(out0) + std::norm(out1);
    if (herald < kZeroBranchCutoff) {
        throw ZeroProbabilityBranchError("scissors heralding pattern has zero probability");
    }
    const double scale = 1.0 / std::sqrt(herald);
    return ScissorsResult{out0 * scale, out1 * scale, herald};
}

}  // namespace entrev
