#include "flab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace flab {

Covector::Covector(std::vector<cplx> a_, std::vector<cplx> b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.size() != b.size()) throw DimensionMismatch("covector parts differ in length");
}

double Covector::norm() const {
    double s = 0;
    for (auto x : a) s += std::norm(x);
    for (auto x : b) s += std::norm(x);
    return std::sqrt(s);
}

bool Covector::is_finite() const {
    auto ok = [](cplx x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); };
    return std::all_of(a.begin(), a.end(), ok) && std::all_of(b.begin(), b.end(), ok);
}

Covector& Covector::operator+=(const Covector& o) {
    if (o.n() != n()) throw DimensionMismatch("covector dimension mismatch");
    for (std::size_t k = 0; k < n(); ++k) {
        a[k] += o.a[k];
        b[k] += o.b[k];
    }
    return *this;
}

Covector Covector::operator-(const Covector& o) const { return *this + o.scaled(-1.0); }

Covector Covector::scaled(cplx s) const {
    Covector out = *this;
    for (auto& x : out.a) x *= s;
    for (auto& x : out.b) x *= s;
    return out;
}

bool ExactCovector::is_zero() const {
    auto z = [](const RationalComplex& x) { return x.is_zero(); };
    return std::all_of(a.begin(), a.end(), z) && std::all_of(b.begin(), b.end(), z);
}

PolyForm::PolyForm(std::size_t n, std::size_t degree) : n_(n), degree_(degree) {
    if (n == 0) throw std::invalid_argument("forms need n >= 1");
    if (degree > 2 * n) throw std::invalid_argument("form degree exceeds 2n");
}

namespace {

Poly lift(std::size_t n, const Poly& f) {
    if (f.n_vars() == 2 * n) return f;
    if (f.n_vars() == n) return f.embed(2 * n);
    throw DimensionMismatch("coefficient has " + std::to_string(f.n_vars()) + " variables; expected " +
                            std::to_string(n) + " or " + std::to_string(2 * n));
}

}  // namespace

PolyForm PolyForm::function(std::size_t n, const Poly& f) {
    PolyForm out(n, 0);
    out.add_term({}, lift(n, f));
    return out;
}

PolyForm PolyForm::basis_one_form(std::size_t n, std::size_t symbol) {
    if (symbol >= 2 * n) throw std::out_of_range("basis symbol out of range");
    PolyForm out(n, 1);
    out.add_term({static_cast<std::uint8_t>(symbol)}, Poly::constant(2 * n, 1));
    return out;
}

PolyForm PolyForm::one_form(std::size_t n, std::span<const Poly> dz, std::span<const Poly> dzbar) {
    if (dz.size() != n || (!dzbar.empty() && dzbar.size() != n))
        throw DimensionMismatch("one_form needs n coefficients per basis block");
    PolyForm out(n, 1);
    for (std::size_t k = 0; k < n; ++k) {
        out.add_term({static_cast<std::uint8_t>(k)}, lift(n, dz[k]));
        if (!dzbar.empty()) out.add_term({static_cast<std::uint8_t>(n + k)}, lift(n, dzbar[k]));
    }
    return out;
}

PolyForm PolyForm::differential(std::size_t n, const Poly& f) {
    return exterior_derivative(function(n, f));
}

void PolyForm::add_term(std::vector<std::uint8_t> symbols, const Poly& coeff) {
    if (symbols.size() != degree_)
        throw DimensionMismatch("basis length " + std::to_string(symbols.size()) + " does not match degree " +
                                std::to_string(degree_));
    if (coeff.n_vars() != 2 * n_) throw DimensionMismatch("form coefficients must have 2n variables");
    for (auto s : symbols)
        if (s >= 2 * n_) throw std::out_of_range("basis symbol out of range");
    if (coeff.is_zero()) return;

    // Insertion sort tracking transpositions; a repeated symbol kills the term.
    bool negative = false;
    for (std::size_t i = 1; i < symbols.size(); ++i) {
        for (std::size_t j = i; j > 0 && symbols[j - 1] >= symbols[j]; --j) {
            if (symbols[j - 1] == symbols[j]) return;
            std::swap(symbols[j - 1], symbols[j]);
            negative = !negative;
        }
    }
    auto it = terms_.find(symbols);
    if (it == terms_.end()) {
        terms_.emplace(std::move(symbols), negative ? -coeff : coeff);
        return;
    }
    if (negative)
        it->second -= coeff;
    else
        it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
}

Poly PolyForm::coefficient(const Basis& basis) const {
    auto it = terms_.find(basis);
    return it == terms_.end() ? Poly(2 * n_) : it->second;
}

bool PolyForm::has_antiholomorphic_basis() const {
    for (const auto& [b, c] : terms_)
        if (std::any_of(b.begin(), b.end(), [this](auto s) { return s >= n_; })) return true;
    return false;
}

bool PolyForm::is_holomorphic() const {
    if (has_antiholomorphic_basis()) return false;
    for (const auto& [b, c] : terms_)
        for (std::size_t k = n_; k < 2 * n_; ++k)
            if (c.depends_on(k)) return false;
    return true;
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
    if (o.n_ != n_ || o.degree_ != degree_) throw DimensionMismatch("adding forms of different shape");
    for (const auto& [b, c] : o.terms_) add_term(b, c);
    return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
    if (o.n_ != n_ || o.degree_ != degree_) throw DimensionMismatch("subtracting forms of different shape");
    for (const auto& [b, c] : o.terms_) add_term(b, -c);
    return *this;
}

PolyForm PolyForm::scaled(const RationalComplex& c) const {
    PolyForm out(n_, degree_);
    if (c.is_zero()) return out;
    for (const auto& [b, p] : terms_) out.terms_.emplace(b, p.scaled(c));
    return out;
}

PolyForm PolyForm::times(const Poly& f) const {
    Poly g = lift(n_, f);
    PolyForm out(n_, degree_);
    for (const auto& [b, p] : terms_) out.add_term(b, p * g);
    return out;
}

std::string PolyForm::symbol_name(std::size_t symbol) const {
    return symbol < n_ ? "dz" + std::to_string(symbol + 1) : "dzbar" + std::to_string(symbol - n_ + 1);
}

std::string PolyForm::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "^" : " ") << symbol_name(b[i]);
    }
    return os.str();
}

PolyForm wedge(const PolyForm& u, const PolyForm& v) {
    if (u.n() != v.n()) throw DimensionMismatch("wedge of forms on different spaces");
    if (u.degree() + v.degree() > 2 * u.n()) throw std::invalid_argument("wedge degree exceeds 2n");
    PolyForm out(u.n(), u.degree() + v.degree());
    std::vector<std::uint8_t> symbols;
    for (const auto& [bu, cu] : u.terms()) {
        for (const auto& [bv, cv] : v.terms()) {
            symbols.assign(bu.begin(), bu.end());
            symbols.insert(symbols.end(), bv.begin(), bv.end());
            out.add_term(symbols, cu * cv);
        }
    }
    return out;
}

PolyForm exterior_derivative(const PolyForm& u) {
    if (u.degree() >= 2 * u.n()) throw std::invalid_argument("exterior derivative of a top-degree form");
    const std::size_t vars = 2 * u.n();
    PolyForm out(u.n(), u.degree() + 1);
    std::vector<std::uint8_t> symbols;
    for (const auto& [b, c] : u.terms()) {
        for (std::size_t j = 0; j < vars; ++j) {
            if (!c.depends_on(j)) continue;
            symbols.assign(1, static_cast<std::uint8_t>(j));
            symbols.insert(symbols.end(), b.begin(), b.end());
            out.add_term(symbols, c.differentiate(j));
        }
    }
    return out;
}

PolyForm pullback(std::span<const Poly> map, const PolyForm& u) {
    const std::size_t n = u.n();
    if (map.size() != n)
        throw DimensionMismatch("pullback map has " + std::to_string(map.size()) + " components, form lives on C^" +
                                std::to_string(n));
    const std::size_t m = map.front().n_vars();
    for (const auto& f : map)
        if (f.n_vars() != m) throw DimensionMismatch("pullback components disagree on source dimension");

    // Substitutions for the 2n target variables in the 2m source variables.
    std::vector<Poly> subs;
    subs.reserve(2 * n);
    for (const auto& f : map) subs.push_back(f.embed(2 * m));
    auto to_conj_block = [m](const Poly& f) {
        Poly out(2 * m);
        for (const auto& [e, c] : f.terms()) {
            Poly::Exponents g(2 * m, 0);
            std::copy(e.begin(), e.end(), g.begin() + static_cast<std::ptrdiff_t>(m));
            out.add_term(g, c.conj());
        }
        return out;
    };
    for (const auto& f : map) subs.push_back(to_conj_block(f));

    // Pulled-back basis 1-forms.
    std::vector<PolyForm> basis;
    basis.reserve(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        PolyForm dF(m, 1);
        for (std::size_t i = 0; i < m; ++i)
            dF.add_term({static_cast<std::uint8_t>(i)}, map[j].differentiate(i).embed(2 * m));
        basis.push_back(std::move(dF));
    }
    for (std::size_t j = 0; j < n; ++j) {
        PolyForm dFbar(m, 1);
        for (std::size_t i = 0; i < m; ++i)
            dFbar.add_term({static_cast<std::uint8_t>(m + i)}, to_conj_block(map[j].differentiate(i)));
        basis.push_back(std::move(dFbar));
    }

    if (u.degree() > 2 * m) throw std::invalid_argument("form degree exceeds source dimension");
    PolyForm out(m, u.degree());
    for (const auto& [b, c] : u.terms()) {
        PolyForm term = PolyForm::function(m, c.compose(subs));
        for (auto s : b) term = wedge(term, basis[s]);
        out += term;
    }
    return out;
}

namespace {

std::vector<cplx> doubled_point(std::span<const cplx> p) {
    std::vector<cplx> full(p.begin(), p.end());
    for (auto x : p) full.push_back(std::conj(x));
    return full;
}

std::vector<RationalComplex> doubled_point(std::span<const RationalComplex> p) {
    std::vector<RationalComplex> full(p.begin(), p.end());
    for (const auto& x : p) full.push_back(x.conj());
    return full;
}

}  // namespace

Covector eval_form(const PolyForm& u, std::span<const cplx> p) {
    if (u.degree() != 1) throw std::invalid_argument("eval_form needs a 1-form");
    if (p.size() != u.n()) throw DimensionMismatch("evaluation point dimension mismatch");
    auto full = doubled_point(p);
    const std::size_t n = u.n();
    Covector out(n);
    for (const auto& [b, c] : u.terms()) {
        cplx v = c.evaluate(std::span<const cplx>(full));
        if (b[0] < n)
            out.a[b[0]] = v;
        else
            out.b[b[0] - n] = v;
    }
    return out;
}

FloatOneForm::FloatOneForm(const PolyForm& u) : n_(u.n()) {
    if (u.degree() != 1) throw std::invalid_argument("FloatOneForm needs a 1-form");
    coeffs_.resize(2 * n_);
    present_.assign(2 * n_, false);
    for (const auto& [b, c] : u.terms()) {
        coeffs_[b[0]] = FloatPoly(c);
        present_[b[0]] = true;
    }
}

Covector FloatOneForm::operator()(std::span<const cplx> p) const {
    if (p.size() != n_) throw DimensionMismatch("evaluation point dimension mismatch");
    auto full = doubled_point(p);
    Covector out(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        if (present_[k]) out.a[k] = coeffs_[k](full);
        if (present_[n_ + k]) out.b[k] = coeffs_[n_ + k](full);
    }
    return out;
}

ExactCovector eval_form_exact(const PolyForm& u, std::span<const RationalComplex> p) {
    if (u.degree() != 1) throw std::invalid_argument("eval_form needs a 1-form");
    if (p.size() != u.n()) throw DimensionMismatch("evaluation point dimension mismatch");
    auto full = doubled_point(p);
    const std::size_t n = u.n();
    ExactCovector out{std::vector<RationalComplex>(n), std::vector<RationalComplex>(n)};
    for (const auto& [b, c] : u.terms()) {
        RationalComplex v = c.evaluate(std::span<const RationalComplex>(full));
        if (b[0] < n)
            out.a[b[0]] = v;
        else
            out.b[b[0] - n] = v;
    }
    return out;
}

std::vector<std::vector<cplx>> eval_two_form(const PolyForm& u, std::span<const cplx> p) {
    if (u.degree() != 2) throw std::invalid_argument("eval_two_form needs a 2-form");
    if (p.size() != u.n()) throw DimensionMismatch("evaluation point dimension mismatch");
    auto full = doubled_point(p);
    const std::size_t d = 2 * u.n();
    std::vector<std::vector<cplx>> M(d, std::vector<cplx>(d, 0.0));
    for (const auto& [b, c] : u.terms()) {
        cplx v = c.evaluate(std::span<const cplx>(full));
        M[b[0]][b[1]] = v;
        M[b[1]][b[0]] = -v;
    }
    return M;
}

std::vector<std::vector<RationalComplex>> eval_two_form_exact(const PolyForm& u,
                                                             std::span<const RationalComplex> p) {
    if (u.degree() != 2) throw std::invalid_argument("eval_two_form needs a 2-form");
    if (p.size() != u.n()) throw DimensionMismatch("evaluation point dimension mismatch");
    auto full = doubled_point(p);
    const std::size_t d = 2 * u.n();
    std::vector<std::vector<RationalComplex>> M(d, std::vector<RationalComplex>(d));
    for (const auto& [b, c] : u.terms()) {
        RationalComplex v = c.evaluate(std::span<const RationalComplex>(full));
        M[b[0]][b[1]] = v;
        M[b[1]][b[0]] = -v;
    }
    return M;
}

std::optional<int> homogeneous_coefficient_degree(const PolyForm& u) {
    std::optional<int> deg;
    for (const auto& [b, c] : u.terms()) {
        auto d = c.homogeneous_degree();
        if (!d || (deg && *deg != *d)) return std::nullopt;
        deg = d;
    }
    return deg;
}

Poly radial_contraction(const PolyForm& u) {
    if (u.degree() != 1) throw std::invalid_argument("radial contraction needs a 1-form");
    if (!u.is_holomorphic()) throw std::invalid_argument("radial contraction needs a holomorphic 1-form");
    if (!u.is_zero() && !homogeneous_coefficient_degree(u))
        throw std::invalid_argument("radial contraction needs coefficients homogeneous of one common degree");
    const std::size_t n = u.n();
    Poly out(2 * n);
    for (const auto& [b, c] : u.terms()) out += Poly::variable(2 * n, b[0]) * c;
    return out;
}

}  // namespace flab
