#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entrev/qmat.hpp"
#include "test_support.hpp"

using namespace entrev;
using entrev::testing::TestRng;

namespace {

CMatrix diag4(double a, double b, double c, double d) {
    CMatrix m(4);
    m.at(0, 0) = a;
    m.at(1, 1) = b;
    m.at(2, 2) = c;
    m.at(3, 3) = d;
    return m;
}

CMatrix pauli_x() {
    CMatrix m(2);
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("tensor of identities is the identity") {
    CHECK(max_abs_diff(tensor(CMatrix::identity(2), CMatrix::identity(2)),
                       CMatrix::identity(4)) == 0.0);
}

TEST_CASE("tensor of basis projectors places the single nonzero entry") {
    CMatrix p0(2), p1(2);
    p0.at(0, 0) = 1.0;
    p1.at(1, 1) = 1.0;
    CHECK(max_abs_diff(tensor(p0, p1), diag4(0.0, 1.0, 0.0, 0.0)) == 0.0);
}

TEST_CASE("tensor rebuilds the projector onto a|00> + b|11>") {
    // Hand-expanded outer product for a = 3/5, b = 4/5: the only nonzero
    // entries are the four corners a^2, ab, ab, b^2.
    const double a = 0.6, b = 0.8;
    CMatrix expected(4);
    expected.at(0, 0) = a * a;
    expected.at(0, 3) = a * b;
    expected.at(3, 0) = a * b;
    expected.at(3, 3) = b * b;

    CMatrix e00(2), e01(2), e10(2), e11(2);
    e00.at(0, 0) = 1.0;
    e01.at(0, 1) = 1.0;
    e10.at(1, 0) = 1.0;
    e11.at(1, 1) = 1.0;
    const CMatrix built = cplx(a * a) * tensor(e00, e00) + cplx(a * b) * tensor(e01, e01) +
                          cplx(a * b) * tensor(e10, e10) + cplx(b * b) * tensor(e11, e11);
    CHECK(max_abs_diff(built, expected) < 1e-15);

    const CMatrix direct = outer({a, 0.0, 0.0, b}, {a, 0.0, 0.0, b});
    CHECK(max_abs_diff(direct, expected) < 1e-15);
}

TEST_CASE("tensor is associative on random triples") {
    TestRng rng;
    for (int it = 0; it < 50; ++it) {
        const CMatrix a = entrev::testing::random_hermitian(rng, 2);
        const CMatrix b = entrev::testing::random_hermitian(rng, 2);
        const CMatrix c = entrev::testing::random_hermitian(rng, 2);
        CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) < 1e-12);
    }
}

TEST_CASE("tensor past dimension 16 overflows") {
    const CMatrix big = tensor(CMatrix::identity(4), CMatrix::identity(4));
    CHECK(big.dim == 16);
    CHECK_THROWS_AS(tensor(big, CMatrix::identity(2)), DimensionOverflowError);
}

TEST_CASE("partial trace of a Bell projector is maximally mixed") {
    const double s = 1.0 / std::sqrt(2.0);
    DensityMatrix bell{outer({s, 0.0, 0.0, s}, {s, 0.0, 0.0, s}), NormKind::Normalized};
    const DensityMatrix left = partial_trace(bell, {0});
    CHECK(max_abs_diff(left.mat, cplx(0.5) * CMatrix::identity(2)) < 1e-15);
}

TEST_CASE("partial trace splits product states") {
    TestRng rng;
    for (int it = 0; it < 20; ++it) {
        const DensityMatrix rho = entrev::testing::random_density(rng, 2);
        const DensityMatrix sigma = entrev::testing::random_density(rng, 2);
        DensityMatrix joint{tensor(rho.mat, sigma.mat), NormKind::Normalized};
        const DensityMatrix back = partial_trace(joint, {0});
        CHECK(max_abs_diff(back.mat, cplx(sigma.mat.trace()) * rho.mat) < 1e-12);
        // Trace and Hermiticity survive the reduction.
        CHECK(std::abs(back.mat.trace().real() - 1.0) < 1e-12);
        CHECK(is_hermitian(back.mat));
    }
}

TEST_CASE("partial trace rejects an empty keep set") {
    DensityMatrix rho{cplx(0.25) * CMatrix::identity(4), NormKind::Normalized};
    CHECK_THROWS_AS(partial_trace(rho, {}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(rho, {2}), ArgumentError);
}

TEST_CASE("eigenvalues of diagonal and identity matrices") {
    const std::vector<double> diag = hermitian_eigenvalues(diag4(0.7, 0.3, 0.0, 0.0));
    CHECK(diag[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(diag[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::abs(diag[2]) < 1e-12);
    CHECK(std::abs(diag[3]) < 1e-12);

    for (double ev : hermitian_eigenvalues(CMatrix::identity(4))) {
        CHECK(ev == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("eigenvalues of X (x) X are +1, +1, -1, -1") {
    const std::vector<double> evs = hermitian_eigenvalues(tensor(pauli_x(), pauli_x()));
    CHECK(evs[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(evs[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(evs[2] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(evs[3] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("eigendecomposition reconstructs random Hermitian matrices") {
    TestRng rng;
    for (int dim : {2, 4, 16}) {
        for (int it = 0; it < 8; ++it) {
            const CMatrix m = entrev::testing::random_hermitian(rng, dim);
            const HermitianEig eig = hermitian_eig(m);

            double sum = 0.0;
            for (double ev : eig.values) sum += ev;
            CHECK(std::abs(sum - m.trace().real()) < 1e-9);
            for (std::size_t k = 1; k < eig.values.size(); ++k) {
                CHECK(eig.values[k - 1] >= eig.values[k]);
            }

            CMatrix lambda(dim);
            for (int k = 0; k < dim; ++k) lambda.at(k, k) = eig.values[k];
            const CMatrix rebuilt = eig.vectors * lambda * eig.vectors.adjoint();
            CHECK(max_abs_diff(rebuilt, m) < 1e-11);
        }
    }
}

TEST_CASE("eigensolver rejects non-Hermitian input") {
    CMatrix bad(2);
    bad.at(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigenvalues(bad), ContractViolationError);
}

TEST_CASE("density matrix validation") {
    TestRng rng;
    const DensityMatrix rho = entrev::testing::random_density(rng, 4);
    rho.validate();
    for (double ev : hermitian_eigenvalues(rho.mat)) {
        CHECK(ev > -1e-10);
        CHECK(ev < 1.0 + 1e-10);
    }

    CMatrix sig(2);
    sig.at(0, 0) = 1.5;
    sig.at(1, 1) = -0.5;
    CHECK_THROWS_AS((DensityMatrix{sig, NormKind::Normalized}.validate()),
                    ContractViolationError);

    DensityMatrix heralded{cplx(0.3) * CMatrix::identity(2), NormKind::Heralded};
    heralded.validate();
    CHECK_THROWS_AS((DensityMatrix{cplx(0.3) * CMatrix::identity(2), NormKind::Normalized}
                         .validate()),
                    ContractViolationError);
}
