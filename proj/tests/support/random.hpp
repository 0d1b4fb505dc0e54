#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "flab/forms.hpp"
#include "flab/poly.hpp"

namespace flab::test {

using Rng = std::mt19937_64;

inline long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline mpq_class random_rational(Rng& rng, long max_num = 5, long max_den = 4) {
    mpq_class q(uniform_int(rng, -max_num, max_num), uniform_int(rng, 1, max_den));
    q.canonicalize();
    return q;
}

inline mpq_class random_nonzero_rational(Rng& rng, long max_num = 5, long max_den = 4) {
    for (;;) {
        auto q = random_rational(rng, max_num, max_den);
        if (sgn(q) != 0) return q;
    }
}

// Real with probability 1/2, otherwise a general Gaussian rational.
inline RationalComplex random_coeff(Rng& rng) {
    if (uniform_int(rng, 0, 1) == 0) return {random_nonzero_rational(rng), 0};
    return {random_rational(rng), random_nonzero_rational(rng)};
}

inline Poly::Exponents random_exponents(Rng& rng, std::size_t nvars, int degree) {
    Poly::Exponents e(nvars, 0);
    for (int k = 0; k < degree; ++k) ++e[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(nvars) - 1))];
    return e;
}

// Up to max_terms terms of total degree <= max_deg (exactly `homogeneous` when >= 0).
inline Poly random_poly(Rng& rng, std::size_t nvars, int max_deg, int max_terms, int homogeneous = -1) {
    Poly p(nvars);
    int terms = static_cast<int>(uniform_int(rng, 1, max_terms));
    for (int t = 0; t < terms; ++t) {
        int d = homogeneous >= 0 ? homogeneous : static_cast<int>(uniform_int(rng, 0, max_deg));
        p.add_term(random_exponents(rng, nvars, d), random_coeff(rng));
    }
    return p;
}

inline Poly random_nonzero_poly(Rng& rng, std::size_t nvars, int max_deg, int max_terms, int homogeneous = -1) {
    for (;;) {
        Poly p = random_poly(rng, nvars, max_deg, max_terms, homogeneous);
        if (!p.is_zero()) return p;
    }
}

// Random form of the given degree; coefficients in 2n variables when conj is set.
inline PolyForm random_form(Rng& rng, std::size_t n, std::size_t degree, int coeff_deg, bool conj, int max_terms = 3) {
    PolyForm u(n, degree);
    const std::size_t symbols = conj ? 2 * n : n;
    int terms = static_cast<int>(uniform_int(rng, 1, max_terms));
    for (int t = 0; t < terms; ++t) {
        std::vector<std::uint8_t> basis;
        while (basis.size() < degree) {
            auto s = static_cast<std::uint8_t>(uniform_int(rng, 0, static_cast<long>(symbols) - 1));
            bool dup = false;
            for (auto b : basis) dup = dup || b == s;
            if (!dup) basis.push_back(s);
        }
        Poly c = random_poly(rng, conj ? 2 * n : n, coeff_deg, 3);
        u.add_term(basis, c.n_vars() == 2 * n ? c : c.embed(2 * n));
    }
    return u;
}

inline std::vector<cplx> random_point(Rng& rng, std::size_t n, double radius = 1.0) {
    std::vector<cplx> z(n);
    for (auto& x : z) x = {uniform(rng, -radius, radius), uniform(rng, -radius, radius)};
    return z;
}

inline std::vector<RationalComplex> random_rational_point(Rng& rng, std::size_t n) {
    std::vector<RationalComplex> z;
    for (std::size_t k = 0; k < n; ++k) z.emplace_back(random_rational(rng, 3, 3), random_rational(rng, 3, 3));
    return z;
}

}  // namespace flab::test
