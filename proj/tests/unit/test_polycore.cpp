#include <doctest.h>

#include "flab/poly.hpp"
#include "random.hpp"

using namespace flab;
using flab::test::Rng;

namespace {

Poly P(const std::string& s, std::size_t n = 2) { return parse_poly(s, n, false); }

}  // namespace

TEST_CASE("rational complex arithmetic is exact") {
    RationalComplex a(mpq_class(1, 3), mpq_class(2));
    RationalComplex b(mpq_class(-1, 2), mpq_class(1, 5));
    CHECK((a + b) - b == a);
    CHECK((a * b) / b == a);
    CHECK(a * a.inverse() == RationalComplex(1));
    CHECK(RationalComplex::i() * RationalComplex::i() == RationalComplex(-1));
    CHECK(RationalComplex::parse_rational("-0.125") == mpq_class(-1, 8));
    CHECK(RationalComplex::parse_rational("6/4") == mpq_class(3, 2));
    CHECK_THROWS_AS(RationalComplex().inverse(), std::domain_error);
    CHECK(RationalComplex::from_double(0.1).re() != mpq_class(1, 10));
    CHECK(RationalComplex::from_double(0.1).to_complex().real() == 0.1);
}

TEST_CASE("poly arithmetic examples") {
    CHECK(P("z1^2 + 1") + P("-1") == P("z1^2"));
    CHECK(P("z1 + z2") * P("z1 - z2") == P("z1^2 - z2^2"));
    CHECK(P("3*z1*z2 + i*z2^4").scaled(RationalComplex(0)).is_zero());
    CHECK_THROWS_AS(P("z1", 1) + P("z1", 2), DimensionMismatch);
    CHECK_THROWS_AS(P("z1", 1) * P("z1", 2), DimensionMismatch);
}

TEST_CASE("no zero coefficients are stored") {
    Poly p = P("z1*z2 + 2*z1") - P("z1*z2");
    CHECK(p.size() == 1);
    for (const auto& [e, c] : p.terms()) CHECK(!c.is_zero());
}

TEST_CASE("differentiate examples") {
    CHECK(P("z1^2*z2").differentiate(0) == P("2*z1*z2"));
    CHECK(P("7/3 + i").differentiate(0).is_zero());
    CHECK(P("z1^2 + z2^2").differentiate(1) == P("2*z2"));
    CHECK_THROWS_AS(P("z1").differentiate(2), std::out_of_range);
}

TEST_CASE("evaluate examples") {
    std::vector<cplx> p1 = {1.0, cplx(0, 1)};
    CHECK(std::abs(P("z1^2 + z2^2").evaluate(p1)) == 0.0);
    std::vector<cplx> p2 = {3.0};
    CHECK(P("z1", 1).evaluate(p2) == cplx(3.0));
    std::vector<cplx> p3 = {2.0, 5.0};
    CHECK(P("z1*z2").evaluate(p3) == cplx(10.0));
    std::vector<cplx> bad = {1.0};
    CHECK_THROWS_AS(P("z1*z2").evaluate(bad), DimensionMismatch);
    std::vector<RationalComplex> q = {RationalComplex(1), RationalComplex::i()};
    CHECK(P("z1^2 + z2^2").evaluate(q).is_zero());
}

TEST_CASE("parser accepts the documented syntax") {
    CHECK(P("2 z1 z2") == P("2*z1*z2"));
    CHECK(P("x1 + x2") == P("z1 + z2"));
    CHECK(P("(z1 + 1)^2") == P("z1^2 + 2*z1 + 1"));
    CHECK(P("z1/2 + 0.25*z2") == P("1/2*z1 + 1/4*z2"));
    CHECK(P("-z1^2") == P("z1^2").scaled(RationalComplex(-1)));
    Poly c = parse_poly("z1*zbar1", 1, true);
    CHECK(c.n_vars() == 2);
    CHECK(c.depends_on(1));
    CHECK_THROWS_AS(parse_poly("zbar1", 1, false), std::invalid_argument);
    CHECK_THROWS_AS(P("z3"), std::invalid_argument);
    CHECK_THROWS_AS(P("z1 +"), std::invalid_argument);
    CHECK_THROWS_AS(P("z1 / z2"), std::invalid_argument);
}

TEST_CASE("degree cap is enforced") {
    CHECK(degree_cap() == 16);
    CHECK_NOTHROW(P("z1^16"));
    CHECK_THROWS_AS(P("z1^17"), DegreeCapExceeded);
    CHECK_THROWS_AS(P("z1^9") * P("z2^8"), DegreeCapExceeded);
    set_degree_cap(20);
    CHECK_NOTHROW(P("z1^9") * P("z2^8"));
    set_degree_cap(16);
}

TEST_CASE("homogeneity and degree queries") {
    CHECK(P("z1^2 + z1*z2").homogeneous_degree() == 2);
    CHECK(!P("z1^2 + z2").homogeneous_degree());
    CHECK(P("0").total_degree() == -1);
    CHECK(P("z1^3*z2 + 1").total_degree() == 4);
}

TEST_CASE("ring axioms hold exactly on random polynomials") {
    Rng rng(11);
    for (int it = 0; it < 60; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 5));
        Poly a = flab::test::random_poly(rng, n, 4, 20);
        Poly b = flab::test::random_poly(rng, n, 4, 20);
        Poly c = flab::test::random_poly(rng, n, 4, 20);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("Leibniz rule and evaluation homomorphism") {
    Rng rng(12);
    for (int it = 0; it < 60; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 5));
        Poly a = flab::test::random_poly(rng, n, 4, 10);
        Poly b = flab::test::random_poly(rng, n, 4, 10);
        for (std::size_t v = 0; v < n; ++v)
            CHECK((a * b).differentiate(v) == a.differentiate(v) * b + a * b.differentiate(v));
        auto p = flab::test::random_rational_point(rng, n);
        CHECK((a * b).evaluate(p) == a.evaluate(p) * b.evaluate(p));
        CHECK((a + b).evaluate(p) == a.evaluate(p) + b.evaluate(p));
    }
}

TEST_CASE("float evaluation agrees with exact evaluation") {
    Rng rng(13);
    for (int it = 0; it < 50; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 1, 4));
        Poly a = flab::test::random_poly(rng, n, 5, 10);
        auto q = flab::test::random_rational_point(rng, n);
        std::vector<cplx> z;
        for (const auto& x : q) z.push_back(x.to_complex());
        cplx exact = a.evaluate(q).to_complex();
        CHECK(std::abs(a.evaluate(z) - exact) <= 1e-9 * (1 + std::abs(exact)));
        CHECK(std::abs(FloatPoly(a)(z) - exact) <= 1e-9 * (1 + std::abs(exact)));
    }
}

TEST_CASE("compose substitutes variables") {
    Poly f = P("z1^2 + z2");
    std::vector<Poly> subs = {P("z1 + z2"), P("z1*z2")};
    CHECK(f.compose(subs) == P("z1^2 + 3*z1*z2 + z2^2"));
    CHECK(P("z1").embed(3).n_vars() == 3);
    CHECK_THROWS_AS(P("z1").embed(1), DimensionMismatch);
}
