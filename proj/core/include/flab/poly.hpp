#pragma once
//
// Sparse multivariate polynomials over Q(i).
//
// A Poly is a map from exponent vectors to nonzero exact coefficients. Forms
// use Polys in 2n formal variables (z_1..z_n, zbar_1..zbar_n); user-supplied
// holomorphic polynomials live in n variables and are lifted with embed().
//

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "flab/rational_complex.hpp"

namespace flab {

using cplx = std::complex<double>;

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DegreeCapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

// Process-wide bound on total degree of any constructed Poly (default 16).
int degree_cap();
void set_degree_cap(int cap);

class Poly {
public:
    using Exponents = std::vector<std::uint8_t>;
    using Terms = std::map<Exponents, RationalComplex>;

    explicit Poly(std::size_t n_vars = 1);
    Poly(std::size_t n_vars, Terms terms);

    static Poly constant(std::size_t n_vars, const RationalComplex& c);
    static Poly variable(std::size_t n_vars, std::size_t index);
    static Poly monomial(const Exponents& exps, const RationalComplex& c);

    std::size_t n_vars() const { return n_vars_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;

    // -1 for the zero polynomial.
    int total_degree() const;
    // Degree if every term has the same total degree; zero polynomial -> nullopt.
    std::optional<int> homogeneous_degree() const;
    bool depends_on(std::size_t var) const;

    void add_term(const Exponents& exps, const RationalComplex& c);
    RationalComplex coefficient(const Exponents& exps) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const;
    Poly scaled(const RationalComplex& c) const;
    Poly pow(unsigned k) const;

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly differentiate(std::size_t var) const;

    cplx evaluate(std::span<const cplx> p) const;
    RationalComplex evaluate(std::span<const RationalComplex> p) const;

    // Pads exponent vectors with zeros up to new_n variables (new_n >= n_vars).
    Poly embed(std::size_t new_n) const;
    // Substitutes variable i -> subs[i]; all subs share one variable count.
    Poly compose(std::span<const Poly> subs) const;
    // Coefficient-wise complex conjugation.
    Poly conj_coefficients() const;

    std::string to_string() const;

private:
    void check_same(const Poly& o, const char* op) const;

    std::size_t n_vars_;
    Terms terms_;
};

// Double-precision copy of a Poly for hot sampling loops.
class FloatPoly {
public:
    FloatPoly() = default;
    explicit FloatPoly(const Poly& p);

    std::size_t n_vars() const { return n_vars_; }
    cplx operator()(std::span<const cplx> p) const;

private:
    std::size_t n_vars_ = 0;
    int max_exp_ = 0;
    std::vector<cplx> coeffs_;
    std::vector<std::uint8_t> exps_;  // row-major, n_vars_ per term
};

// Parses "z1^2 - 3/2*z1*z2 + i*zbar1" style expressions. Variables are
// z1..zn, and zbar1..zbarn (indices n..2n-1) when with_conjugates is set.
// The imaginary unit is "i"; "x1" is accepted as an alias of "z1".
Poly parse_poly(const std::string& text, std::size_t n, bool with_conjugates);

}  // namespace flab
