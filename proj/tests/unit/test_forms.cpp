#include <doctest.h>

#include "flab/forms.hpp"
#include "random.hpp"

using namespace flab;
using flab::test::Rng;

namespace {

// Holomorphic polys are written in n variables and lifted to 2n.
Poly H(const std::string& s, std::size_t n) { return parse_poly(s, n, false).embed(2 * n); }
Poly C(const std::string& s, std::size_t n) { return parse_poly(s, n, true); }

PolyForm dz(std::size_t n, std::size_t k) { return PolyForm::basis_one_form(n, k); }
PolyForm dzbar(std::size_t n, std::size_t k) { return PolyForm::basis_one_form(n, n + k); }

PolyForm one_form(std::size_t n, std::vector<std::string> a, std::vector<std::string> b = {}) {
    std::vector<Poly> pa, pb;
    for (auto& s : a) pa.push_back(C(s, n));
    for (auto& s : b) pb.push_back(C(s, n));
    return PolyForm::one_form(n, pa, pb);
}

int sign_power(std::size_t p, std::size_t q) { return (p * q) % 2 ? -1 : 1; }

}  // namespace

TEST_CASE("wedge examples") {
    PolyForm w = wedge(dz(2, 0), dz(2, 1));
    CHECK(w.degree() == 2);
    CHECK(w.terms().size() == 1);
    CHECK(w.coefficient({0, 1}) == Poly::constant(4, 1));
    CHECK(wedge(dz(2, 0), dz(2, 0)).is_zero());
    CHECK(wedge(dz(2, 1), dz(2, 0)) == -w);
    CHECK_THROWS_AS(wedge(dz(2, 0), dz(3, 0)), DimensionMismatch);
}

TEST_CASE("wedge is graded commutative") {
    Rng rng(21);
    for (int it = 0; it < 100; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 3));
        std::size_t p = static_cast<std::size_t>(flab::test::uniform_int(rng, 0, 2));
        std::size_t q = static_cast<std::size_t>(flab::test::uniform_int(rng, 0, 2));
        if (p > 2 * n || q > 2 * n) continue;
        auto u = flab::test::random_form(rng, n, p, 2, true);
        auto v = flab::test::random_form(rng, n, q, 2, true);
        if (p + q > 2 * n) {
            CHECK_THROWS(wedge(u, v));
            continue;
        }
        CHECK(wedge(u, v) == wedge(v, u).scaled(RationalComplex(sign_power(p, q))));
    }
}

TEST_CASE("exterior derivative examples") {
    PolyForm u(2, 1);
    u.add_term({1}, H("z1", 2));
    CHECK(exterior_derivative(u) == wedge(dz(2, 0), dz(2, 1)));
    CHECK(exterior_derivative(one_form(2, {"z1", "z2"})).is_zero());
    PolyForm rot = one_form(2, {"z2", "-z1"});
    CHECK(exterior_derivative(rot) == wedge(dz(2, 0), dz(2, 1)).scaled(RationalComplex(-2)));
    // zbar dependence is differentiated too: d(zbar1 dz1) = dzbar1 ^ dz1.
    CHECK(exterior_derivative(one_form(1, {"zbar1"})) == wedge(dzbar(1, 0), dz(1, 0)));
    CHECK_THROWS(exterior_derivative(PolyForm(1, 2)));
}

TEST_CASE("d o d = 0 on random forms") {
    Rng rng(22);
    for (int it = 0; it < 200; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 2));
        std::size_t deg = static_cast<std::size_t>(flab::test::uniform_int(rng, 0, 1));
        bool conj = flab::test::uniform_int(rng, 0, 1) == 1;
        auto u = flab::test::random_form(rng, n, deg, 3, conj);
        if (deg + 2 > 2 * n) continue;
        CHECK(exterior_derivative(exterior_derivative(u)).is_zero());
    }
    for (int it = 0; it < 100; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 3, 4));
        std::size_t deg = static_cast<std::size_t>(flab::test::uniform_int(rng, 0, 1));
        auto u = flab::test::random_form(rng, n, deg, 3, false);
        CHECK(exterior_derivative(exterior_derivative(u)).is_zero());
    }
}

TEST_CASE("Leibniz rule for d") {
    Rng rng(23);
    for (int it = 0; it < 100; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 2, 3));
        std::size_t p = static_cast<std::size_t>(flab::test::uniform_int(rng, 0, 1));
        std::size_t q = static_cast<std::size_t>(flab::test::uniform_int(rng, 0, 1));
        auto u = flab::test::random_form(rng, n, p, 2, n == 2);
        auto v = flab::test::random_form(rng, n, q, 2, n == 2);
        auto lhs = exterior_derivative(wedge(u, v));
        auto rhs = wedge(exterior_derivative(u), v) +
                   wedge(u, exterior_derivative(v)).scaled(RationalComplex(p % 2 ? -1 : 1));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("pullback examples") {
    // F(u) = (u, u^2); F^* dz2 = 2u du.
    std::vector<Poly> F = {parse_poly("z1", 1, false), parse_poly("z1^2", 1, false)};
    PolyForm expect(1, 1);
    expect.add_term({0}, H("2*z1", 1));
    CHECK(pullback(F, dz(2, 1)) == expect);

    Rng rng(24);
    auto u = flab::test::random_form(rng, 3, 1, 3, true);
    std::vector<Poly> id = {parse_poly("z1", 3, false), parse_poly("z2", 3, false), parse_poly("z3", 3, false)};
    CHECK(pullback(id, u) == u);

    std::vector<Poly> short_map = {parse_poly("z1", 1, false)};
    CHECK_THROWS_AS(pullback(short_map, u), DimensionMismatch);
}

TEST_CASE("pullback of zbar terms uses the conjugate chain rule") {
    // F(u) = u^2 on C^1; F^*(zbar1 dzbar1) = conj(u)^2 * 2 conj(u) dzbar.
    std::vector<Poly> F = {parse_poly("z1^2", 1, false)};
    PolyForm expect(1, 1);
    expect.add_term({1}, C("2*zbar1^3", 1));
    CHECK(pullback(F, one_form(1, {"0"}, {"zbar1"})) == expect);
}

TEST_CASE("pullback commutes with d") {
    Rng rng(25);
    for (int it = 0; it < 40; ++it) {
        std::size_t m = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 3));
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 3));
        std::vector<Poly> F;
        for (std::size_t j = 0; j < n; ++j) F.push_back(flab::test::random_poly(rng, m, 2, 3));
        Poly f = flab::test::random_poly(rng, n, 3, 4);
        auto pf = PolyForm::function(m, f.compose(F));
        CHECK(pullback(F, PolyForm::differential(n, f)) == exterior_derivative(pf));
        CHECK(pullback(F, PolyForm::function(n, f)) == pf);
        if (n >= 1 && 2 <= 2 * m) {
            auto u = flab::test::random_form(rng, n, 1, 2, true);
            if (2 * n >= 2) CHECK(pullback(F, exterior_derivative(u)) == exterior_derivative(pullback(F, u)));
        }
    }
}

TEST_CASE("eval_form examples") {
    std::vector<cplx> p = {3.0};
    Covector c = eval_form(one_form(1, {"z1"}), p);
    CHECK(c.a[0] == cplx(3.0));
    CHECK(c.b[0] == cplx(0.0));
    std::vector<cplx> q = {cplx(0.3, -2)};
    Covector d = eval_form(dzbar(1, 0), q);
    CHECK(d.a[0] == cplx(0.0));
    CHECK(d.b[0] == cplx(1.0));
    std::vector<cplx> r = {1.0, 2.0};
    Covector e = eval_form(one_form(2, {"z2", "-z1"}), r);
    CHECK(e.a == std::vector<cplx>{2.0, -1.0});
    CHECK(e.b == std::vector<cplx>{0.0, 0.0});
    std::vector<cplx> s = {cplx(0, 1)};
    CHECK(eval_form(one_form(1, {"zbar1"}), s).a[0] == cplx(0, -1));
    CHECK_THROWS_AS(eval_form(one_form(2, {"z1", "z2"}), s), DimensionMismatch);
    CHECK_THROWS(eval_form(wedge(dz(2, 0), dz(2, 1)), r));
}

TEST_CASE("eval_form is additive") {
    Rng rng(26);
    for (int it = 0; it < 100; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 4));
        auto u = flab::test::random_form(rng, n, 1, 3, true);
        auto v = flab::test::random_form(rng, n, 1, 3, true);
        auto p = flab::test::random_point(rng, n);
        auto lhs = eval_form(u + v, p);
        auto rhs = eval_form(u, p) + eval_form(v, p);
        CHECK((lhs - rhs).norm() <= 1e-12 * (1 + lhs.norm()));
        FloatOneForm fu(u);
        CHECK((fu(p) - eval_form(u, p)).norm() <= 1e-12 * (1 + lhs.norm()));
    }
}

TEST_CASE("radial contraction examples") {
    CHECK(radial_contraction(one_form(2, {"z2", "-z1"})).is_zero());
    Poly f = H("z1^3 + 2*z1*z2^2 - i*z2^3", 2);
    CHECK(radial_contraction(PolyForm::differential(2, H("z1^3 + 2*z1*z2^2 - i*z2^3", 2))) ==
          f.scaled(RationalComplex(3)));
    CHECK_THROWS_AS(radial_contraction(one_form(2, {"z1^2", "z2"})), std::invalid_argument);
    CHECK_THROWS_AS(radial_contraction(one_form(1, {"zbar1"})), std::invalid_argument);
}

TEST_CASE("Euler identity on random homogeneous polynomials") {
    Rng rng(27);
    for (int it = 0; it < 50; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 4));
        int d = static_cast<int>(flab::test::uniform_int(rng, 1, 4));
        Poly f = flab::test::random_nonzero_poly(rng, n, d, 5, d);
        CHECK(radial_contraction(PolyForm::differential(n, f)) == f.embed(2 * n).scaled(RationalComplex(d)));
    }
}

TEST_CASE("canonical basis ordering with signs") {
    PolyForm u(2, 2);
    u.add_term({3, 0}, Poly::constant(4, 1));
    CHECK(u.coefficient({0, 3}) == Poly::constant(4, -1));
    CHECK(u.symbol_name(3) == "dzbar2");
    CHECK(u.symbol_name(0) == "dz1");
    PolyForm v(2, 2);
    v.add_term({1, 1}, Poly::constant(4, 1));
    CHECK(v.is_zero());
}
