#include "flab/rational_complex.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace flab {

RationalComplex::RationalComplex(mpq_class re, mpq_class im)
    : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

mpq_class RationalComplex::parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos || s.find_first_of("eE") != std::string::npos)
            throw std::invalid_argument("malformed rational literal '" + s + "'");
        bool negative = s.front() == '-';
        std::string body = (negative || s.front() == '+') ? s.substr(1) : s;
        dot = body.find('.');
        std::string digits = body.substr(0, dot) + body.substr(dot + 1);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("malformed rational literal '" + s + "'");
        mpz_class num(digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, body.size() - dot - 1);
        mpq_class q(num, den);
        q.canonicalize();
        return negative ? mpq_class(-q) : q;
    }

    if (s.front() == '+') s.erase(s.begin());
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

RationalComplex RationalComplex::from_strings(std::string_view re, std::string_view im) {
    return {parse_rational(re), parse_rational(im)};
}

RationalComplex RationalComplex::from_double(double re, double im) {
    if (!std::isfinite(re) || !std::isfinite(im))
        throw std::invalid_argument("non-finite value cannot become a rational");
    return {mpq_class(re), mpq_class(im)};
}

RationalComplex RationalComplex::inverse() const {
    mpq_class n = norm2();
    if (sgn(n) == 0) throw std::domain_error("division by zero in Q(i)");
    return {re_ / n, -im_ / n};
}

RationalComplex& RationalComplex::operator+=(const RationalComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

RationalComplex& RationalComplex::operator-=(const RationalComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

RationalComplex& RationalComplex::operator*=(const RationalComplex& o) {
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(10); }

std::string RationalComplex::to_string() const {
    if (sgn(im_) == 0) return rational_to_string(re_);
    std::string im_part;
    if (im_ == 1)
        im_part = "i";
    else if (im_ == -1)
        im_part = "-i";
    else
        im_part = rational_to_string(im_) + "i";
    if (sgn(re_) == 0) return im_part;
    std::string sep = sgn(im_) > 0 ? "+" : "";
    return "(" + rational_to_string(re_) + sep + im_part + ")";
}

}  // namespace flab
