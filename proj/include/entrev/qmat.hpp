#pragma once

// Dense complex linear algebra for the tiny dimensions used throughout this
// library (2, 4 and 16): products, tensor products, partial trace and a
// cyclic-Jacobi Hermitian eigensolver.  Everything is value-semantic and
// allocation-light; no external math library is involved.

#include <complex>
#include <initializer_list>
#include <vector>

#include "entrev/errors.hpp"

namespace entrev {

using cplx = std::complex<double>;

// Row-major complex matrix.  Qubit convention is big-endian: qubit 0 is the
// leftmost tensor factor, so basis index of |q0 q1 ... q(n-1)> has q0 in the
// most significant bit.
struct CMatrix {
    int dim = 0;
    std::vector<cplx> a;  // dim*dim entries, row-major

    CMatrix() = default;
    explicit CMatrix(int d) : dim(d), a(static_cast<std::size_t>(d) * d) {}

    static CMatrix identity(int d);
    // Entries listed row by row; size must equal d*d.
    static CMatrix from_rows(int d, std::initializer_list<cplx> entries);

    cplx& at(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }
    const cplx& at(int i, int j) const { return a[static_cast<std::size_t>(i) * dim + j]; }

    CMatrix adjoint() const;
    CMatrix conjugate() const;
    cplx trace() const;
};

CMatrix operator+(const CMatrix& x, const CMatrix& y);
CMatrix operator-(const CMatrix& x, const CMatrix& y);
CMatrix operator*(const CMatrix& x, const CMatrix& y);
CMatrix operator*(cplx s, const CMatrix& x);

// Largest entrywise absolute difference.
double max_abs_diff(const CMatrix& x, const CMatrix& y);
bool is_hermitian(const CMatrix& m, double tol = 1e-12);

// Kronecker product; throws DimensionOverflowError if the result would
// exceed dimension 16.
CMatrix tensor(const CMatrix& x, const CMatrix& y);

// Outer product |u><v| of two coefficient vectors.
CMatrix outer(const std::vector<cplx>& u, const std::vector<cplx>& v);

enum class NormKind { Normalized, Heralded };

// Hermitian positive-semidefinite matrix with a trace contract: Normalized
// means trace 1, Heralded means the trace carries a branch weight in (0, 1].
struct DensityMatrix {
    CMatrix mat;
    NormKind norm_kind = NormKind::Normalized;

    int dim() const { return mat.dim; }
    int qubit_count() const;

    // Checks Hermiticity (1e-12), eigenvalue floor (-1e-10) and the trace
    // contract (1e-10); throws ContractViolationError on failure.
    void validate() const;
};

// Reduce an n-qubit state to the qubits listed in `keep` (ascending original
// order is preserved).  Trace and Hermiticity are preserved.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

struct HermitianEig {
    std::vector<double> values;  // descending
    CMatrix vectors;             // column k pairs with values[k]
};

// Cyclic Jacobi rotations, iterated until the off-diagonal Frobenius norm
// drops below 1e-13 (at most 100 sweeps).  Input must be Hermitian within
// 1e-10 or ContractViolationError is thrown.
HermitianEig hermitian_eig(const CMatrix& m);
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

}  // namespace entrev
