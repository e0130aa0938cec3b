#include "entrev/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace entrev {

namespace {

constexpr int kMaxDim = 16;

void require_same_dim(const CMatrix& x, const CMatrix& y, const char* what) {
    if (x.dim != y.dim) {
        throw ArgumentError(std::string(what) + ": dimension mismatch");
    }
}

}  // namespace

CMatrix CMatrix::identity(int d) {
    CMatrix m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::from_rows(int d, std::initializer_list<cplx> entries) {
    if (static_cast<int>(entries.size()) != d * d) {
        throw ArgumentError("from_rows: entry count does not match dimension");
    }
    CMatrix m(d);
    std::copy(entries.begin(), entries.end(), m.a.begin());
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m.at(i, j) = std::conj(at(j, i));
    return m;
}

CMatrix CMatrix::conjugate() const {
    CMatrix m(dim);
    for (std::size_t k = 0; k < a.size(); ++k) m.a[k] = std::conj(a[k]);
    return m;
}

cplx CMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim; ++i) t += at(i, i);
    return t;
}

CMatrix operator+(const CMatrix& x, const CMatrix& y) {
    require_same_dim(x, y, "operator+");
    CMatrix m(x.dim);
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] = x.a[k] + y.a[k];
    return m;
}

CMatrix operator-(const CMatrix& x, const CMatrix& y) {
    require_same_dim(x, y, "operator-");
    CMatrix m(x.dim);
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] = x.a[k] - y.a[k];
    return m;
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
    require_same_dim(x, y, "operator*");
    const int d = x.dim;
    CMatrix m(d);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            const cplx xik = x.at(i, k);
            if (xik == cplx{}) continue;
            for (int j = 0; j < d; ++j) m.at(i, j) += xik * y.at(k, j);
        }
    }
    return m;
}

CMatrix operator*(cplx s, const CMatrix& x) {
    CMatrix m(x.dim);
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] = s * x.a[k];
    return m;
}

double max_abs_diff(const CMatrix& x, const CMatrix& y) {
    require_same_dim(x, y, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t k = 0; k < x.a.size(); ++k) {
        worst = std::max(worst, std::abs(x.a[k] - y.a[k]));
    }
    return worst;
}

bool is_hermitian(const CMatrix& m, double tol) {
    for (int i = 0; i < m.dim; ++i) {
        for (int j = i; j < m.dim; ++j) {
            if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > tol) return false;
        }
    }
    return true;
}

CMatrix tensor(const CMatrix& x, const CMatrix& y) {
    if (x.dim <= 0 || y.dim <= 0) {
        throw ArgumentError("tensor: empty operand");
    }
    if (x.dim * y.dim > kMaxDim) {
        throw DimensionOverflowError("tensor: result dimension exceeds 16");
    }
    CMatrix m(x.dim * y.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j) {
            const cplx xij = x.at(i, j);
            for (int k = 0; k < y.dim; ++k)
                for (int l = 0; l < y.dim; ++l) {
                    m.at(i * y.dim + k, j * y.dim + l) = xij * y.at(k, l);
                }
        }
    return m;
}

CMatrix outer(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    if (u.size() != v.size() || u.empty()) {
        throw ArgumentError("outer: vector size mismatch");
    }
    CMatrix m(static_cast<int>(u.size()));
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) m.at(i, j) = u[i] * std::conj(v[j]);
    return m;
}

int DensityMatrix::qubit_count() const {
    int n = 0;
    while ((1 << n) < mat.dim) ++n;
    if ((1 << n) != mat.dim) {
        throw ContractViolationError("density matrix dimension is not a power of two");
    }
    return n;
}

void DensityMatrix::validate() const {
    if (mat.dim != 2 && mat.dim != 4 && mat.dim != 16) {
        throw ContractViolationError("density matrix dimension must be 2, 4 or 16");
    }
    if (!is_hermitian(mat, 1e-12)) {
        throw ContractViolationError("density matrix is not Hermitian");
    }
    const double tr = mat.trace().real();
    if (norm_kind == NormKind::Normalized) {
        if (std::abs(tr - 1.0) > 1e-10) {
            throw ContractViolationError("normalized density matrix has trace != 1");
        }
    } else {
        if (tr <= 0.0 || tr > 1.0 + 1e-10) {
            throw ContractViolationError("heralded density matrix trace outside (0, 1]");
        }
    }
    for (double ev : hermitian_eigenvalues(mat)) {
        if (ev < -1e-10) {
            throw ContractViolationError("density matrix has a negative eigenvalue");
        }
    }
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    if (keep.empty()) {
        throw ArgumentError("partial_trace: keep set is empty");
    }
    const int n = rho.qubit_count();
    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (kept.front() < 0 || kept.back() >= n) {
        throw ArgumentError("partial_trace: qubit index out of range");
    }
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
    }

    const int mk = static_cast<int>(kept.size());
    const int mt = static_cast<int>(traced.size());
    // Big-endian: qubit q occupies bit (n-1-q) of a full index; kept qubit r
    // occupies bit (mk-1-r) of a reduced index.
    auto embed = [&](int reduced, int env) {
        int full = 0;
        for (int r = 0; r < mk; ++r) {
            if (reduced & (1 << (mk - 1 - r))) full |= 1 << (n - 1 - kept[r]);
        }
        for (int t = 0; t < mt; ++t) {
            if (env & (1 << (mt - 1 - t))) full |= 1 << (n - 1 - traced[t]);
        }
        return full;
    };

    CMatrix out(1 << mk);
    for (int i = 0; i < out.dim; ++i) {
        for (int j = 0; j < out.dim; ++j) {
            cplx sum = 0.0;
            for (int e = 0; e < (1 << mt); ++e) {
                sum += rho.mat.at(embed(i, e), embed(j, e));
            }
            out.at(i, j) = sum;
        }
    }
    return DensityMatrix{out, rho.norm_kind};
}

namespace {

double off_diagonal_norm(const CMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) {
            if (i != j) s += std::norm(m.at(i, j));
        }
    return std::sqrt(s);
}

}  // namespace

HermitianEig hermitian_eig(const CMatrix& m) {
    if (!is_hermitian(m, 1e-10)) {
        throw ContractViolationError("hermitian_eig: input is not Hermitian");
    }
    const int d = m.dim;
    CMatrix a = m;
    CMatrix v = CMatrix::identity(d);

    // One cyclic sweep zeroes every off-diagonal pair once; quadratic
    // convergence sets in after a couple of sweeps at these dimensions.
    constexpr double kOffTol = 1e-13;
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) >= kOffTol; ++sweep) {
        for (int p = 0; p < d - 1; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const cplx h = a.at(p, q);
                const double habs = std::abs(h);
                if (habs < 1e-300) {
                    a.at(p, q) = 0.0;
                    a.at(q, p) = 0.0;
                    continue;
                }
                // Factor out the phase of a[p][q], then the remaining 2x2
                // block is real symmetric and a Givens rotation applies.
                const cplx phase = h / habs;
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double tau = (aqq - app) / (2.0 * habs);
                double t;
                if (tau >= 0.0) {
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                } else {
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * std::conj(phase);  // rotates column q

                for (int i = 0; i < d; ++i) {
                    const cplx aip = a.at(i, p);
                    const cplx aiq = a.at(i, q);
                    a.at(i, p) = c * aip - sp * aiq;
                    a.at(i, q) = std::conj(sp) * aip + c * aiq;
                }
                for (int j = 0; j < d; ++j) {
                    const cplx apj = a.at(p, j);
                    const cplx aqj = a.at(q, j);
                    a.at(p, j) = c * apj - std::conj(sp) * aqj;
                    a.at(q, j) = sp * apj + c * aqj;
                }
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                a.at(p, p) = app - t * habs;
                a.at(q, q) = aqq + t * habs;

                for (int i = 0; i < d; ++i) {
                    const cplx vip = v.at(i, p);
                    const cplx viq = v.at(i, q);
                    v.at(i, p) = c * vip - sp * viq;
                    v.at(i, q) = std::conj(sp) * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return a.at(x, x).real() > a.at(y, y).real(); });

    HermitianEig out;
    out.values.resize(d);
    out.vectors = CMatrix(d);
    for (int k = 0; k < d; ++k) {
        out.values[k] = a.at(order[k], order[k]).real();
        for (int i = 0; i < d; ++i) out.vectors.at(i, k) = v.at(i, order[k]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
    return hermitian_eig(m).values;
}

}  // namespace entrev
