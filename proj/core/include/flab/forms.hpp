#pragma once
//
// Polynomial differential forms on C^n in the basis dz_1..dz_n, dzbar_1..dzbar_n.
//
// Basis symbols are numbered 0..2n-1 with dz_k -> k and dzbar_k -> n + k.
// Coefficients are Polys in the 2n formal variables (z, zbar) using the same
// numbering, so d(var j) is basis symbol j.
//

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flab/poly.hpp"

namespace flab {

// Value of a 1-form at a point: alpha(p) = sum a_k dz_k + b_k dzbar_k.
struct Covector {
    std::vector<cplx> a;
    std::vector<cplx> b;

    Covector() = default;
    explicit Covector(std::size_t n) : a(n, 0.0), b(n, 0.0) {}
    Covector(std::vector<cplx> a_, std::vector<cplx> b_);

    std::size_t n() const { return a.size(); }
    // Euclidean norm of (a, b); equals the J0 metric norm.
    double norm() const;
    bool is_finite() const;

    Covector& operator+=(const Covector& o);
    friend Covector operator+(Covector x, const Covector& y) { return x += y; }
    Covector operator-(const Covector& o) const;
    Covector scaled(cplx s) const;
};

class PolyForm {
public:
    using Basis = std::vector<std::uint8_t>;  // strictly increasing symbol indices
    using Terms = std::map<Basis, Poly>;

    PolyForm(std::size_t n, std::size_t degree);

    // Degree-0 form from a coefficient poly (n or 2n variables).
    static PolyForm function(std::size_t n, const Poly& f);
    // Basis 1-form dz_k (k < n) or dzbar_{k-n} (k >= n).
    static PolyForm basis_one_form(std::size_t n, std::size_t symbol);
    // sum_k A_k dz_k + B_k dzbar_k; A, B each of length n (B may be empty).
    static PolyForm one_form(std::size_t n, std::span<const Poly> dz_coeffs, std::span<const Poly> dzbar_coeffs = {});
    // df for f in n (holomorphic) or 2n variables.
    static PolyForm differential(std::size_t n, const Poly& f);

    std::size_t n() const { return n_; }
    std::size_t degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Adds coeff * (symbols in the given order), sorting with the sign of the permutation.
    void add_term(std::vector<std::uint8_t> symbols, const Poly& coeff);
    Poly coefficient(const Basis& basis) const;

    // No dzbar basis elements and no zbar dependence in any coefficient.
    bool is_holomorphic() const;
    bool has_antiholomorphic_basis() const;

    PolyForm& operator+=(const PolyForm& o);
    PolyForm& operator-=(const PolyForm& o);
    friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
    friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
    PolyForm operator-() const { return scaled(-1); }
    PolyForm scaled(const RationalComplex& c) const;
    PolyForm times(const Poly& f) const;

    friend bool operator==(const PolyForm& a, const PolyForm& b) {
        return a.n_ == b.n_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const PolyForm& a, const PolyForm& b) { return !(a == b); }

    std::string symbol_name(std::size_t symbol) const;
    std::string to_string() const;

private:
    std::size_t n_;
    std::size_t degree_;
    Terms terms_;
};

PolyForm wedge(const PolyForm& u, const PolyForm& v);
PolyForm exterior_derivative(const PolyForm& u);

// Pullback along a holomorphic polynomial map F: C^m -> C^n given as n Polys in
// m source variables. zbar_j pulls back to conj(F_j)(zbar) and dzbar_j to the
// conjugate chain rule, so forms with antiholomorphic parts are supported.
PolyForm pullback(std::span<const Poly> map, const PolyForm& u);

// Coefficients of a 1-form evaluated at p (zbar variables take conj(p)).
Covector eval_form(const PolyForm& u, std::span<const cplx> p);

struct ExactCovector {
    std::vector<RationalComplex> a;
    std::vector<RationalComplex> b;
    bool is_zero() const;
};
ExactCovector eval_form_exact(const PolyForm& u, std::span<const RationalComplex> p);

// Values of a 2-form at p as a 2n x 2n antisymmetric complex matrix M with
// u = sum_{i<j} M_ij e_i ^ e_j over the 2n basis symbols.
std::vector<std::vector<cplx>> eval_two_form(const PolyForm& u, std::span<const cplx> p);
std::vector<std::vector<RationalComplex>> eval_two_form_exact(const PolyForm& u,
                                                             std::span<const RationalComplex> p);

// Double-precision evaluator for a 1-form (coefficients compiled once).
class FloatOneForm {
public:
    FloatOneForm() = default;
    explicit FloatOneForm(const PolyForm& u);
    std::size_t n() const { return n_; }
    Covector operator()(std::span<const cplx> p) const;

private:
    std::size_t n_ = 0;
    std::vector<FloatPoly> coeffs_;  // 2n entries: dz block then dzbar block
    std::vector<bool> present_;
};

// sum_i z_i A_i for a homogeneous holomorphic 1-form u = sum A_i dz_i.
// Throws std::invalid_argument on non-homogeneous or non-holomorphic input.
Poly radial_contraction(const PolyForm& u);

// Common homogeneous degree of all coefficients, if any.
std::optional<int> homogeneous_coefficient_degree(const PolyForm& u);

}  // namespace flab
