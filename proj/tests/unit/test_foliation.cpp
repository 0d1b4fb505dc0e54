#include <doctest.h>

#include <algorithm>

#include "flab/foliation.hpp"
#include "random.hpp"

using namespace flab;
using flab::test::Rng;

namespace {

Poly P(const std::string& s, std::size_t n) { return parse_poly(s, n, false); }

PolyForm holo_one_form(std::size_t n, const std::vector<std::string>& a) {
    std::vector<Poly> pa;
    for (const auto& s : a) pa.push_back(P(s, n).embed(2 * n));
    return PolyForm::one_form(n, pa);
}

// Oracle: sum_i lambda_i n_i times the product of all factors.
Poly log_euler_oracle(const std::vector<RationalComplex>& lambda, const std::vector<Poly>& f) {
    RationalComplex s;
    Poly prod = Poly::constant(f[0].n_vars(), 1);
    for (std::size_t i = 0; i < f.size(); ++i) {
        s += lambda[i] * RationalComplex(*f[i].homogeneous_degree());
        prod = prod * f[i];
    }
    return prod.scaled(s).embed(2 * f[0].n_vars());
}

}  // namespace

TEST_CASE("pencil examples") {
    auto F = make_pencil(1, 1, P("z1", 2), P("z2", 2));
    CHECK(F.alpha == holo_one_form(2, {"-z2", "z1"}));
    CHECK(radial_contraction(F.alpha).is_zero());
    CHECK(check_integrability(F).integrable);
    CHECK(F.projectivizable == true);
    CHECK(provenance_kind(F.provenance) == "pencil");

    auto G = make_pencil(2, 1, P("z1", 2), P("z2^2 + z1*z2", 2));
    Poly expect = (P("z1", 2) * P("z2^2 + z1*z2", 2)).scaled(RationalComplex(3)).embed(4);
    CHECK(radial_contraction(G.alpha) == expect);
    CHECK(G.projectivizable == false);

    CHECK_THROWS(make_pencil(1, 1, Poly(2), P("z1", 2)));
    CHECK_THROWS(make_pencil(1, 1, P("z1", 1), P("z1", 2)));
}

TEST_CASE("logarithmic examples") {
    std::vector<RationalComplex> lam = {RationalComplex(1), RationalComplex(-1)};
    std::vector<Poly> f = {P("z1", 2), P("z2", 2)};
    auto F = make_logarithmic(lam, f);
    CHECK(F.alpha == holo_one_form(2, {"z2", "-z1"}));
    CHECK(F.projectivizable == true);

    std::vector<RationalComplex> same = {RationalComplex(1), RationalComplex(1)};
    auto G = make_logarithmic(same, f);
    CHECK(G.projectivizable == false);
    CHECK(radial_contraction(G.alpha) == log_euler_oracle(same, f));

    std::vector<RationalComplex> one = {RationalComplex(1)};
    std::vector<Poly> single = {P("z1", 2)};
    CHECK_THROWS(make_logarithmic(one, single));
    std::vector<Poly> with_zero = {P("z1", 2), Poly(2)};
    CHECK_THROWS(make_logarithmic(lam, with_zero));
    CHECK(!F.warnings.empty());
}

TEST_CASE("integrability examples") {
    CHECK(check_integrability(holo_one_form(2, {"z1", "z2"})).integrable);
    auto r = check_integrability(holo_one_form(3, {"z2", "0", "1"}));
    CHECK(!r.integrable);
    CHECK(r.witness.degree() == 3);
    CHECK(r.witness.terms().size() == 1);
    CHECK(r.witness.terms().begin()->first == PolyForm::Basis{0, 1, 2});
    Rng rng(31);
    for (int it = 0; it < 30; ++it) {
        auto u = flab::test::random_form(rng, 2, 1, 3, false);
        CHECK(check_integrability(u).integrable);
    }
}

TEST_CASE("random pencils and logarithmic forms are integrable with the Euler identity") {
    Rng rng(32);
    for (int it = 0; it < 30; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 2, 4));
        int d1 = static_cast<int>(flab::test::uniform_int(rng, 1, 3));
        int d2 = static_cast<int>(flab::test::uniform_int(rng, 1, 3));
        Poly f1 = flab::test::random_nonzero_poly(rng, n, d1, 3, d1);
        Poly f2 = flab::test::random_nonzero_poly(rng, n, d2, 3, d2);
        long a = flab::test::uniform_int(rng, 1, 4), b = flab::test::uniform_int(rng, 1, 4);
        auto F = make_pencil(a, b, f1, f2);
        CHECK(check_integrability(F).integrable);
        Poly oracle = (f1 * f2).scaled(RationalComplex(a * d2 - b * d1)).embed(2 * n);
        CHECK(radial_contraction(F.alpha) == oracle);
    }
    for (int it = 0; it < 20; ++it) {
        std::size_t n = static_cast<std::size_t>(flab::test::uniform_int(rng, 2, 3));
        std::size_t p = static_cast<std::size_t>(flab::test::uniform_int(rng, 2, 3));
        std::vector<Poly> f;
        std::vector<RationalComplex> lam;
        for (std::size_t i = 0; i < p; ++i) {
            int d = static_cast<int>(flab::test::uniform_int(rng, 1, 2));
            f.push_back(flab::test::random_nonzero_poly(rng, n, d, 3, d));
            lam.push_back(flab::test::random_coeff(rng));
        }
        auto F = make_logarithmic(lam, f);
        CHECK(check_integrability(F).integrable);
        CHECK(radial_contraction(F.alpha) == log_euler_oracle(lam, f));
    }
}

TEST_CASE("classify_point examples") {
    std::vector<cplx> zero2 = {0.0, 0.0};
    auto k = classify_point(holo_one_form(2, {"z2", "-z1"}), zero2);
    CHECK(k.cls == PointClass::Kupka);
    CHECK(k.dalpha_rank == 2);
    auto d = classify_point(holo_one_form(2, {"z1", "z2"}), zero2);
    CHECK(d.cls == PointClass::DegenerateSingular);
    CHECK(d.dalpha_rank == 0);
    std::vector<cplx> p = {cplx(0.3, 1), 2.0};
    CHECK(classify_point(holo_one_form(2, {"1", "0"}), p).cls == PointClass::Regular);
    CHECK(to_string(PointClass::Kupka) == "Kupka");
}

TEST_CASE("exact classification agrees with float classification") {
    std::vector<RationalComplex> zero = {RationalComplex(), RationalComplex()};
    CHECK(classify_point_exact(holo_one_form(2, {"z2", "-z1"}), zero).cls == PointClass::Kupka);
    CHECK(classify_point_exact(holo_one_form(2, {"z1", "z2"}), zero).cls == PointClass::DegenerateSingular);
    std::vector<RationalComplex> one = {RationalComplex(1), RationalComplex()};
    CHECK(classify_point_exact(holo_one_form(2, {"z1", "z2"}), one).cls == PointClass::Regular);
}

TEST_CASE("classification is invariant under constant rescaling") {
    Rng rng(33);
    std::vector<PolyForm> forms = {holo_one_form(2, {"z2", "-z1"}), holo_one_form(2, {"z1", "z2"}),
                                   holo_one_form(3, {"z2*z3", "z1*z3", "z1*z2"})};
    for (const auto& u : forms) {
        for (int it = 0; it < 20; ++it) {
            auto s = flab::test::random_coeff(rng);
            auto v = u.scaled(s);
            std::vector<cplx> p(u.n(), 0.0);
            if (it % 2) p = flab::test::random_point(rng, u.n());
            CHECK(classify_point(u, p).cls == classify_point(v, p).cls);
        }
    }
}

TEST_CASE("find_singular_points examples") {
    auto box = ComplexBox::cube(2, -1, 1);
    auto F = make_raw(holo_one_form(2, {"z1", "z2"}));
    auto pts = find_singular_points(F, box);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].cls == PointClass::DegenerateSingular);
    CHECK(std::abs(pts[0].point[0]) < 1e-8);

    auto G = make_pencil(1, 1, P("z1", 2), P("z2", 2));
    auto q = find_singular_points(G, box);
    REQUIRE(q.size() == 1);
    CHECK(q[0].cls == PointClass::Kupka);

    CHECK(find_singular_points(make_raw(holo_one_form(2, {"1", "0"})), box).empty());

    PolyForm anti = PolyForm::basis_one_form(2, 2) + holo_one_form(2, {"z1", "z2"});
    CHECK_THROWS(find_singular_points(make_raw(anti), box));
}

TEST_CASE("singular points have small residual and refinement gives a superset") {
    // Zeros of (z1^2 - 1/4) dz1 + z2 dz2 are (+-1/2, 0).
    auto F = make_raw(holo_one_form(2, {"z1^2 - 1/4", "z2"}));
    auto box = ComplexBox::cube(2, -1, 1);
    SingularSearchOptions coarse;
    coarse.grid = 2;
    SingularSearchOptions fine;
    fine.grid = 4;
    auto a = find_singular_points(F, box, coarse);
    auto b = find_singular_points(F, box, fine);
    for (const auto& r : b) CHECK(r.residual < fine.tol);
    for (const auto& r : a) {
        CHECK(r.residual < coarse.tol);
        bool found = std::any_of(b.begin(), b.end(), [&](const PointReport& s) {
            double d = 0;
            for (std::size_t k = 0; k < 2; ++k) d += std::norm(s.point[k] - r.point[k]);
            return std::sqrt(d) <= 10 * fine.tol;
        });
        CHECK(found);
    }
    CHECK(b.size() == 2);
}

TEST_CASE("raw foliations reject zero and fill in the twist") {
    CHECK_THROWS(make_raw(PolyForm(2, 1)));
    CHECK_THROWS(make_raw(PolyForm(2, 2)));
    auto F = make_raw(holo_one_form(2, {"z2", "-z1"}));
    REQUIRE(F.twist.has_value());
    CHECK(*F.twist == 2);
    CHECK(!make_raw(holo_one_form(2, {"z1", "z2"})).twist.has_value());
}

TEST_CASE("factored provenance") {
    auto F = make_factored(P("1 + z1", 2), P("z1*z2", 2), 2);
    CHECK(provenance_kind(F.provenance) == "factored");
    CHECK(check_integrability(F).integrable);
}
