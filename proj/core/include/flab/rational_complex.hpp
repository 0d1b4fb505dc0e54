#pragma once
//
// Exact complex rationals: the coefficient field Q(i) for every symbolic object.
//

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace flab {

class RationalComplex {
public:
    RationalComplex() = default;
    RationalComplex(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
    RationalComplex(mpq_class re, mpq_class im = 0);

    static RationalComplex i() { return {0, 1}; }

    // "p/q", "p" or a finite decimal such as "-0.125".
    static mpq_class parse_rational(std::string_view text);
    static RationalComplex from_strings(std::string_view re, std::string_view im);
    // Exact conversion of a binary double.
    static RationalComplex from_double(double re, double im = 0.0);

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

    RationalComplex conj() const { return {re_, -im_}; }
    mpq_class norm2() const { return re_ * re_ + im_ * im_; }
    RationalComplex inverse() const;  // throws std::domain_error on zero

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    RationalComplex& operator+=(const RationalComplex& o);
    RationalComplex& operator-=(const RationalComplex& o);
    RationalComplex& operator*=(const RationalComplex& o);
    RationalComplex& operator/=(const RationalComplex& o) { return *this *= o.inverse(); }

    friend RationalComplex operator+(RationalComplex a, const RationalComplex& b) { return a += b; }
    friend RationalComplex operator-(RationalComplex a, const RationalComplex& b) { return a -= b; }
    friend RationalComplex operator*(RationalComplex a, const RationalComplex& b) { return a *= b; }
    friend RationalComplex operator/(RationalComplex a, const RationalComplex& b) { return a /= b; }
    RationalComplex operator-() const { return {-re_, -im_}; }

    friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const RationalComplex& a, const RationalComplex& b) { return !(a == b); }

    // Human form, e.g. "3/2", "-i", "(1/2+3i)".
    std::string to_string() const;

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

std::string rational_to_string(const mpq_class& q);

}  // namespace flab
