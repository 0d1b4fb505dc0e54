#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flab/geometry.hpp"
#include "random.hpp"

using namespace flab;
using flab::test::Rng;

namespace {

Covector random_covector(Rng& rng, std::size_t n) {
    auto a = flab::test::random_point(rng, n);
    auto b = flab::test::random_point(rng, n);
    return Covector(a, b);
}

// Real action of a covector on a tangent vector in (x, y) coordinates.
cplx apply(const Covector& c, const RealVector& v) {
    std::size_t n = c.n();
    cplx s = 0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx w(v(static_cast<Eigen::Index>(k)), v(static_cast<Eigen::Index>(n + k)));
        s += c.a[k] * w + c.b[k] * std::conj(w);
    }
    return s;
}

RealMatrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    RealMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = flab::test::uniform(rng, -1, 1);
    return m;
}

}  // namespace

TEST_CASE("frames satisfy the compatibility invariants") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::size_t n = 1 + seed % 3;
        auto F = seed == 0 ? SymplecticFrame::standard(n) : SymplecticFrame::perturbed(n, 0.3, seed);
        const auto& J = F.J();
        const auto& W = F.omega();
        auto dim = static_cast<Eigen::Index>(2 * n);
        CHECK((J * J + RealMatrix::Identity(dim, dim)).norm() < 1e-12);
        CHECK((J.transpose() * W * J - W).norm() < 1e-12);
        CHECK((F.metric() - F.metric().transpose()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(F.metric());
        CHECK(es.eigenvalues().minCoeff() > 0);
    }
    RealMatrix bad = RealMatrix::Identity(2, 2);
    CHECK_THROWS(SymplecticFrame::with_complex_structure(1, bad));
}

TEST_CASE("split examples") {
    auto F = SymplecticFrame::standard(1);
    Covector dzbar({0.0}, {1.0});
    auto s = split_covector(dzbar, F);
    CHECK(s.c10.norm() < 1e-15);
    CHECK((s.c01 - dzbar).norm() < 1e-15);
    Covector dx({0.5}, {0.5});
    auto t = split_covector(dx, F);
    CHECK(std::abs(t.c10.norm() - t.c01.norm()) < 1e-15);
}

TEST_CASE("split reassembles and has the right J-type") {
    Rng rng(41);
    for (int it = 0; it < 200; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 4));
        auto F = SymplecticFrame::perturbed(n, flab::test::uniform(rng, 0, 0.5), static_cast<std::uint64_t>(it));
        auto c = random_covector(rng, n);
        auto s = split_covector(c, F);
        CHECK(((s.c10 + s.c01) - c).norm() < 1e-12);
        ComplexRow r10 = covector_row(s.c10);
        ComplexRow r01 = covector_row(s.c01);
        ComplexRow j10 = r10 * F.J().cast<cplx>();
        ComplexRow j01 = r01 * F.J().cast<cplx>();
        CHECK((j10 - cplx(0, 1) * r10).norm() < 1e-12);
        CHECK((j01 + cplx(0, 1) * r01).norm() < 1e-12);
        // Idempotence of the (1,0)-projector.
        auto twice = split_covector(s.c10, F);
        CHECK((twice.c10 - s.c10).norm() < 1e-12);
        ComplexMatrix P = split_projector(F);
        CHECK((P * P - P).norm() < 1e-12);
    }
}

TEST_CASE("covector rows match the real action") {
    Rng rng(42);
    auto c = random_covector(rng, 3);
    ComplexRow row = covector_row(c);
    for (Eigen::Index j = 0; j < 6; ++j) {
        RealVector e = RealVector::Unit(6, j);
        CHECK(std::abs(row(j) - apply(c, e)) < 1e-15);
    }
    CHECK((covector_from_row(row) - c).norm() < 1e-14);
}

TEST_CASE("kernel check examples") {
    auto F1 = SymplecticFrame::standard(1);
    auto a = kernel_symplectic_check(Covector({1.0}, {0.0}), F1);
    CHECK(a.criterion);
    CHECK(a.symplectic);
    auto b = kernel_symplectic_check(Covector({0.0}, {1.0}), F1);
    CHECK(!b.criterion);
    auto F2 = SymplecticFrame::standard(2);
    auto c = kernel_symplectic_check(Covector({0.5, 0.0}, {0.5, 0.0}), F2);
    CHECK(!c.criterion);
    CHECK(!c.symplectic);
    CHECK(c.kernel_dim == 3);
    CHECK_THROWS_AS(kernel_symplectic_check(Covector(2), F2), std::invalid_argument);
}

TEST_CASE("real kernel is annihilated") {
    Rng rng(43);
    for (int it = 0; it < 50; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 4));
        auto c = random_covector(rng, n);
        auto K = real_kernel(c);
        CHECK(K.dim() == 2 * n - 2);
        for (Eigen::Index j = 0; j < K.basis().cols(); ++j) CHECK(std::abs(apply(c, K.basis().col(j))) < 1e-12);
        CHECK((K.basis().transpose() * K.basis() - RealMatrix::Identity(K.basis().cols(), K.basis().cols())).norm() <
              1e-12);
    }
}

TEST_CASE("criterion implies symplectic kernel on random covectors") {
    Rng rng(44);
    std::size_t crit = 0;
    for (int it = 0; it < 100000; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 3));
        auto c = random_covector(rng, n);
        auto r = kernel_symplectic_check(c, SymplecticFrame::standard(n));
        if (r.criterion) {
            ++crit;
            if (!r.symplectic) FAIL("criterion held without a symplectic kernel");
        }
    }
    CHECK(crit > 1000);
}

TEST_CASE("angle examples") {
    auto e1 = Subspace(RealVector::Unit(2, 0));
    auto e2 = Subspace(RealVector::Unit(2, 1));
    RealVector diag(2);
    diag << 1, 1;
    auto d = Subspace(diag);
    CHECK(subspace_angle(e1, e1, AngleMode::Max) == doctest::Approx(0).epsilon(1e-12));
    CHECK(subspace_angle(e1, e2, AngleMode::Max) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(subspace_angle(e1, e2, AngleMode::MinTransversal) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(subspace_angle(d, e2, AngleMode::MinTransversal) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
    auto e3 = Subspace(RealVector::Unit(3, 0));
    CHECK_THROWS(subspace_angle(e1, e3, AngleMode::Max));
}

TEST_CASE("min transversal angle is monotone under enlarging V") {
    Rng rng(45);
    for (int it = 0; it < 1000; ++it) {
        auto m = static_cast<Eigen::Index>(flab::test::uniform_int(rng, 2, 6));
        auto du = flab::test::uniform_int(rng, 1, m);
        auto dv = flab::test::uniform_int(rng, 1, m);
        auto dw = flab::test::uniform_int(rng, dv, m);
        RealMatrix W = random_matrix(rng, m, dw);
        RealMatrix V = W.leftCols(dv) * random_matrix(rng, dv, dv);
        Subspace U(random_matrix(rng, m, du));
        double a = subspace_angle(U, Subspace(V), AngleMode::MinTransversal);
        double b = subspace_angle(U, Subspace(W), AngleMode::MinTransversal);
        CHECK(a <= b + 1e-9);
    }
}

TEST_CASE("max angle vanishes exactly for contained subspaces") {
    Rng rng(46);
    for (int it = 0; it < 300; ++it) {
        auto m = static_cast<Eigen::Index>(flab::test::uniform_int(rng, 2, 6));
        auto dv = flab::test::uniform_int(rng, 1, m - 1);
        auto du = flab::test::uniform_int(rng, 1, dv);
        RealMatrix V = random_matrix(rng, m, dv);
        Subspace SV(V);
        Subspace inside(V * random_matrix(rng, dv, du));
        CHECK(subspace_angle(inside, SV, AngleMode::Max) < 1e-9);
        RealMatrix out = V * random_matrix(rng, dv, du);
        out.col(0) += random_matrix(rng, m, 1);
        Subspace outside(out);
        if (outside.dim() == static_cast<std::size_t>(du) &&
            SV.orthogonal_complement().basis().transpose().cast<double>().norm() > 0) {
            bool contained = (SV.orthogonal_complement().basis().transpose() * outside.basis()).norm() < 1e-9;
            if (!contained) CHECK(subspace_angle(outside, SV, AngleMode::Max) > 1e-9);
        }
    }
}

TEST_CASE("rank helpers") {
    RealMatrix m(2, 2);
    m << 1, 2, 2, 4;
    CHECK(numerical_rank(m) == 1);
    CHECK(sigma_min(m) < 1e-12);
    CHECK(sigma_min(RealMatrix::Identity(3, 3)) == doctest::Approx(1.0));
}
