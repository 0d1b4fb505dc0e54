#include <doctest.h>

#include <cmath>

#include "flab/holonomy.hpp"
#include "random.hpp"

using namespace flab;
using flab::test::Rng;

namespace {

Mat2 random_su2(Rng& rng) {
    double q[4];
    double s = 0;
    for (auto& x : q) {
        x = flab::test::uniform(rng, -1, 1);
        s += x * x;
    }
    s = std::sqrt(s);
    return su2_from_quaternion(q[0] / s, q[1] / s, q[2] / s, q[3] / s);
}

Representation random_rep(Rng& rng) {
    std::map<std::string, Mat2> images = {{"a", random_su2(rng)}, {"b", random_su2(rng)}, {"c", random_su2(rng)}};
    return Representation({"a", "b", "c"}, images);
}

Word random_word(Rng& rng, std::size_t max_len) {
    static const char* names[] = {"a", "b", "c"};
    Word w;
    auto len = static_cast<std::size_t>(flab::test::uniform_int(rng, 0, static_cast<long>(max_len)));
    for (std::size_t k = 0; k < len; ++k)
        w.push_back({names[flab::test::uniform_int(rng, 0, 2)], flab::test::uniform_int(rng, 0, 1) ? 1 : -1});
    return w;
}

PencilParameter random_lambda(Rng& rng) {
    return PencilParameter(cplx(flab::test::uniform(rng, -1, 1), flab::test::uniform(rng, -1, 1)),
                           cplx(flab::test::uniform(rng, -1, 1), flab::test::uniform(rng, -1, 1)));
}

Word concat(Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST_CASE("word parsing") {
    Word w = parse_word("a b^-1 * a^1");
    REQUIRE(w.size() == 3);
    CHECK(w[1] == Letter{"b", -1});
    CHECK(w[2] == Letter{"a", 1});
    CHECK(word_to_string(w) == "a b^-1 a");
    CHECK(inverse(w) == parse_word("a^-1 b a^-1"));
    CHECK(parse_word("").empty());
    CHECK_THROWS(parse_word("a^2"));
}

TEST_CASE("representation validation") {
    CHECK_THROWS(Representation({"a"}, {{"a", Mat2::Identity() * 2.0}}));
    CHECK_THROWS(Representation({"a"}, {}));
    CHECK_THROWS(Representation({"a"}, {{"a", Mat2::Identity()}, {"b", Mat2::Identity()}}));
    CHECK_THROWS(Representation({"a", "a"}, {{"a", Mat2::Identity()}}));
    // a^2 = -I holds for diag(i, -i); a = I fails the relation a^2 b = +-I when b is not central.
    Representation ok({"a"}, {{"a", su2_diagonal(M_PI / 2)}}, {parse_word("a a")});
    CHECK(ok.relations().size() == 1);
    CHECK_THROWS(Representation({"a"}, {{"a", su2_diagonal(1.0)}}, {parse_word("a a")}));
    CHECK_THROWS_AS(ok.image(parse_word("z")), UnknownGenerator);
}

TEST_CASE("holonomy examples") {
    Rng rng(71);
    auto triv = Representation::trivial({"a", "b"});
    for (int it = 0; it < 20; ++it) {
        auto lam = random_lambda(rng);
        auto out = holonomy_eval(triv, parse_word("a b^-1 a"), lam);
        CHECK(chordal_distance(out, lam) < 1e-12);
    }
    const double theta = 0.7;
    Representation diag({"g"}, {{"g", su2_diagonal(theta)}});
    cplx lambda(0.4, -1.3);
    auto out = holonomy_eval(diag, parse_word("g"), PencilParameter::affine(lambda));
    REQUIRE(out.affine_value());
    CHECK(std::abs(*out.affine_value() - std::exp(cplx(0, -2 * theta)) * lambda) < 1e-12);
    CHECK_THROWS_AS(holonomy_eval(diag, parse_word("h"), PencilParameter::affine(lambda)), UnknownGenerator);
}

TEST_CASE("holonomy composition, inverses and isometry") {
    Rng rng(72);
    for (int it = 0; it < 1000; ++it) {
        auto rho = random_rep(rng);
        Word w1 = random_word(rng, 6), w2 = random_word(rng, 6);
        auto lam = random_lambda(rng), mu = random_lambda(rng);
        auto lhs = holonomy_eval(rho, concat(w1, w2), lam);
        auto rhs = holonomy_eval(rho, w1, holonomy_eval(rho, w2, lam));
        CHECK(chordal_distance(lhs, rhs) < 1e-12);
        auto back = holonomy_eval(rho, concat(w1, inverse(w1)), lam);
        CHECK(chordal_distance(back, lam) < 1e-12);
        double before = chordal_distance(lam, mu);
        double after = chordal_distance(holonomy_eval(rho, w1, lam), holonomy_eval(rho, w1, mu));
        CHECK(std::abs(before - after) < 1e-12);
    }
}

TEST_CASE("pencil parameters") {
    PencilParameter p(cplx(3, 0), cplx(0, 4));
    CHECK(std::abs(std::norm(p.z1()) + std::norm(p.z2()) - 1.0) < 1e-15);
    CHECK(!PencilParameter::infinity().affine_value());
    CHECK_THROWS(PencilParameter(0.0, 0.0));
    CHECK(chordal_distance(PencilParameter::affine(0.0), PencilParameter::infinity()) == doctest::Approx(1.0));
    CHECK(chordal_distance(PencilParameter(1.0, 1.0), PencilParameter(cplx(0, 2), cplx(0, 2))) < 1e-15);
}

TEST_CASE("PU(2) triviality examples") {
    std::vector<Word> words = {parse_word("g"), parse_word("g g"), parse_word("g^-1")};
    Representation minus({"g"}, {{"g", -Mat2::Identity()}});
    CHECK(pu2_triviality(minus, words).trivial_in_pu2);
    Representation quarter({"g"}, {{"g", su2_diagonal(M_PI / 2)}});
    auto r = pu2_triviality(quarter, words);
    CHECK(!r.trivial_in_pu2);
    REQUIRE(r.witness);
    CHECK(*r.witness == parse_word("g"));
    CHECK(pu2_triviality(Representation::trivial({"g"}), words).trivial_in_pu2);
    CHECK_THROWS(pu2_triviality(minus, {}));
}

TEST_CASE("local pencil twisting") {
    std::vector<cplx> p = {cplx(1, 2), cplx(-0.5, 0.3), cplx(7, 7)};
    auto id = twist_local_pencil([](const std::vector<cplx>&) { return Mat2::Identity().eval(); }, p);
    CHECK(std::abs(*id.affine_value() - p[1] / p[0]) < 1e-12);
    const double theta = 0.3;
    auto rot = twist_local_pencil([&](const std::vector<cplx>&) { return su2_diagonal(theta); }, p);
    CHECK(std::abs(*rot.affine_value() - std::exp(cplx(0, -2 * theta)) * p[1] / p[0]) < 1e-12);
    std::vector<cplx> base = {0.0, 0.0, 1.0};
    CHECK_THROWS_AS(twist_local_pencil([](const std::vector<cplx>&) { return Mat2::Identity().eval(); }, base),
                    std::domain_error);
    CHECK_THROWS_AS(twist_local_pencil([](const std::vector<cplx>&) { return (2.0 * Mat2::Identity()).eval(); }, p),
                    std::invalid_argument);
}

TEST_CASE("orbit probe for an irrational rotation never returns") {
    auto probe = orbit_probe(su2_diagonal(1.0), PencilParameter::affine(cplx(0.6, 0.2)), 1000, 1e-6);
    CHECK(!probe.first_return);
    CHECK(probe.min_return_distance > 1e-6);
    auto finite = orbit_probe(su2_diagonal(M_PI / 3), PencilParameter::affine(cplx(0.6, 0.2)), 1000, 1e-6);
    REQUIRE(finite.first_return);
    CHECK(*finite.first_return == 3);
}
