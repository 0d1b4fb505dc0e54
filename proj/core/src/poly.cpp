#include "flab/poly.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <numeric>
#include <sstream>

namespace flab {

namespace {

std::atomic<int> g_degree_cap{16};

int exps_degree(const Poly::Exponents& e) {
    return std::accumulate(e.begin(), e.end(), 0, [](int s, std::uint8_t x) { return s + x; });
}

void enforce_cap(int degree) {
    if (degree > g_degree_cap.load())
        throw DegreeCapExceeded("total degree " + std::to_string(degree) + " exceeds cap " +
                                std::to_string(g_degree_cap.load()));
}

}  // namespace

int degree_cap() { return g_degree_cap.load(); }

void set_degree_cap(int cap) {
    if (cap < 0 || cap > 255) throw std::invalid_argument("degree cap must lie in [0, 255]");
    g_degree_cap.store(cap);
}

Poly::Poly(std::size_t n_vars) : n_vars_(n_vars) {
    if (n_vars == 0) throw std::invalid_argument("Poly needs at least one variable");
}

Poly::Poly(std::size_t n_vars, Terms terms) : Poly(n_vars) {
    for (auto& [e, c] : terms) add_term(e, c);
}

Poly Poly::constant(std::size_t n_vars, const RationalComplex& c) {
    Poly p(n_vars);
    p.add_term(Exponents(n_vars, 0), c);
    return p;
}

Poly Poly::variable(std::size_t n_vars, std::size_t index) {
    if (index >= n_vars) throw std::out_of_range("variable index out of range");
    Exponents e(n_vars, 0);
    e[index] = 1;
    Poly p(n_vars);
    p.add_term(e, 1);
    return p;
}

Poly Poly::monomial(const Exponents& exps, const RationalComplex& c) {
    Poly p(exps.size());
    p.add_term(exps, c);
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && exps_degree(terms_.begin()->first) == 0);
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, exps_degree(e));
    return d;
}

std::optional<int> Poly::homogeneous_degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = exps_degree(terms_.begin()->first);
    for (const auto& [e, c] : terms_)
        if (exps_degree(e) != d) return std::nullopt;
    return d;
}

bool Poly::depends_on(std::size_t var) const {
    return std::any_of(terms_.begin(), terms_.end(), [var](const auto& t) { return t.first[var] != 0; });
}

void Poly::add_term(const Exponents& exps, const RationalComplex& c) {
    if (exps.size() != n_vars_)
        throw DimensionMismatch("exponent vector has length " + std::to_string(exps.size()) +
                                ", expected " + std::to_string(n_vars_));
    if (c.is_zero()) return;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        enforce_cap(exps_degree(exps));
        terms_.emplace(exps, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

RationalComplex Poly::coefficient(const Exponents& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? RationalComplex{} : it->second;
}

void Poly::check_same(const Poly& o, const char* op) const {
    if (n_vars_ != o.n_vars_)
        throw DimensionMismatch(std::string("variable-count mismatch in ") + op + ": " +
                                std::to_string(n_vars_) + " vs " + std::to_string(o.n_vars_));
}

Poly& Poly::operator+=(const Poly& o) {
    check_same(o, "add");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    check_same(o, "sub");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    a.check_same(b, "mul");
    Poly out(a.n_vars_);
    if (a.is_zero() || b.is_zero()) return out;
    enforce_cap(a.total_degree() + b.total_degree());
    Poly::Exponents e(a.n_vars_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t k = 0; k < e.size(); ++k) e[k] = static_cast<std::uint8_t>(ea[k] + eb[k]);
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

Poly Poly::operator-() const { return scaled(-1); }

Poly Poly::scaled(const RationalComplex& c) const {
    Poly out(n_vars_);
    if (c.is_zero()) return out;
    for (const auto& [e, k] : terms_) out.terms_.emplace(e, k * c);
    return out;
}

Poly Poly::pow(unsigned k) const {
    Poly out = constant(n_vars_, 1);
    Poly base = *this;
    while (k) {
        if (k & 1U) out *= base;
        k >>= 1U;
        if (k) base *= base;
    }
    return out;
}

Poly Poly::differentiate(std::size_t var) const {
    if (var >= n_vars_)
        throw std::out_of_range("differentiation index " + std::to_string(var) + " out of range");
    Poly out(n_vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        --d[var];
        out.add_term(d, c * RationalComplex(static_cast<long>(e[var])));
    }
    return out;
}

cplx Poly::evaluate(std::span<const cplx> p) const {
    if (p.size() != n_vars_)
        throw DimensionMismatch("evaluation point has length " + std::to_string(p.size()) +
                                ", expected " + std::to_string(n_vars_));
    cplx sum = 0;
    for (const auto& [e, c] : terms_) {
        cplx m = c.to_complex();
        for (std::size_t k = 0; k < n_vars_; ++k)
            for (int j = 0; j < e[k]; ++j) m *= p[k];
        sum += m;
    }
    return sum;
}

RationalComplex Poly::evaluate(std::span<const RationalComplex> p) const {
    if (p.size() != n_vars_)
        throw DimensionMismatch("evaluation point has length " + std::to_string(p.size()) +
                                ", expected " + std::to_string(n_vars_));
    RationalComplex sum;
    for (const auto& [e, c] : terms_) {
        RationalComplex m = c;
        for (std::size_t k = 0; k < n_vars_; ++k)
            for (int j = 0; j < e[k]; ++j) m *= p[k];
        sum += m;
    }
    return sum;
}

Poly Poly::embed(std::size_t new_n) const {
    if (new_n < n_vars_) throw DimensionMismatch("embed cannot drop variables");
    Poly out(new_n);
    for (const auto& [e, c] : terms_) {
        Exponents f(e);
        f.resize(new_n, 0);
        out.terms_.emplace(std::move(f), c);
    }
    return out;
}

Poly Poly::compose(std::span<const Poly> subs) const {
    if (subs.size() != n_vars_)
        throw DimensionMismatch("compose needs one substitution per variable");
    const std::size_t m = subs.front().n_vars();
    for (const auto& s : subs)
        if (s.n_vars() != m) throw DimensionMismatch("substitutions disagree on variable count");

    // Cache powers of each substitution.
    std::vector<std::vector<Poly>> powers(n_vars_);
    for (std::size_t k = 0; k < n_vars_; ++k) powers[k].push_back(constant(m, 1));

    Poly out(m);
    for (const auto& [e, c] : terms_) {
        Poly term = constant(m, c);
        for (std::size_t k = 0; k < n_vars_; ++k) {
            while (powers[k].size() <= e[k]) powers[k].push_back(powers[k].back() * subs[k]);
            if (e[k]) term *= powers[k][e[k]];
        }
        out += term;
    }
    return out;
}

Poly Poly::conj_coefficients() const {
    Poly out(n_vars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.conj());
    return out;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest degree first reads more naturally.
    std::vector<const Terms::value_type*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
        return exps_degree(a->first) > exps_degree(b->first);
    });
    for (const auto* t : order) {
        const auto& [e, c] = *t;
        std::string mono;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (!e[k]) continue;
            if (!mono.empty()) mono += "*";
            mono += "x" + std::to_string(k + 1);
            if (e[k] > 1) mono += "^" + std::to_string(e[k]);
        }
        std::string coef = c.to_string();
        bool negative = !coef.empty() && coef.front() == '-';
        if (negative) coef.erase(coef.begin());
        if (!first) os << (negative ? " - " : " + ");
        else if (negative) os << "-";
        if (mono.empty())
            os << coef;
        else if (coef == "1")
            os << mono;
        else
            os << coef << "*" << mono;
        first = false;
    }
    return os.str();
}

FloatPoly::FloatPoly(const Poly& p) : n_vars_(p.n_vars()) {
    for (const auto& [e, c] : p.terms()) {
        coeffs_.push_back(c.to_complex());
        exps_.insert(exps_.end(), e.begin(), e.end());
        for (auto x : e) max_exp_ = std::max<int>(max_exp_, x);
    }
}

cplx FloatPoly::operator()(std::span<const cplx> p) const {
    if (p.size() != n_vars_) throw DimensionMismatch("FloatPoly evaluation dimension mismatch");
    if (coeffs_.empty()) return 0;
    // Power table: pw[k*(max+1) + j] = p_k^j.
    const std::size_t stride = static_cast<std::size_t>(max_exp_) + 1;
    std::vector<cplx> pw(n_vars_ * stride);
    for (std::size_t k = 0; k < n_vars_; ++k) {
        pw[k * stride] = 1;
        for (std::size_t j = 1; j < stride; ++j) pw[k * stride + j] = pw[k * stride + j - 1] * p[k];
    }
    cplx sum = 0;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        cplx m = coeffs_[t];
        const std::uint8_t* e = &exps_[t * n_vars_];
        for (std::size_t k = 0; k < n_vars_; ++k)
            if (e[k]) m *= pw[k * stride + e[k]];
        sum += m;
    }
    return sum;
}

// Recursive-descent parser:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*' | '/')? factor)*     division only by nonzero constants
//   factor := ('+'|'-') factor | atom ('^' int)?
//   atom   := number | 'i' | var | '(' expr ')'
namespace {

class PolyParser {
public:
    PolyParser(const std::string& text, std::size_t n, bool conj)
        : s_(text), n_(n), total_(conj ? 2 * n : n), conj_(conj) {}

    Poly parse() {
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " + msg +
                                    " in \"" + s_ + "\"");
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool at_atom_start() {
        skip_ws();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == 'z' || c == 'x' || c == 'i' ||
               c == '.';
    }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                return acc;
        }
    }

    Poly term() {
        Poly acc = factor();
        for (;;) {
            if (eat('*')) {
                acc *= factor();
            } else if (eat('/')) {
                Poly d = factor();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
                acc = acc.scaled(d.terms().begin()->second.inverse());
            } else if (at_atom_start())
                acc *= factor();
            else
                return acc;
        }
    }

    Poly factor() {
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        Poly base = atom();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            base = base.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
        }
        return base;
    }

    Poly atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
            // Allow an immediate "/q" to form a rational literal.
            if (pos_ < s_.size() && s_[pos_] == '/' && pos_ + 1 < s_.size() &&
                std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
                ++pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
            mpq_class q;
            try {
                q = RationalComplex::parse_rational(s_.substr(start, pos_ - start));
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            return Poly::constant(total_, RationalComplex(q));
        }
        if (c == 'i' && !(pos_ + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
            ++pos_;
            return Poly::constant(total_, RationalComplex::i());
        }
        if (c == 'z' || c == 'x') {
            ++pos_;
            bool bar = false;
            if (s_.compare(pos_, 3, "bar") == 0) {
                bar = true;
                pos_ += 3;
            }
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected variable index");
            std::size_t idx = std::stoul(s_.substr(start, pos_ - start));
            if (idx == 0 || idx > n_) fail("variable index " + std::to_string(idx) + " out of range");
            if (bar && !conj_) fail("conjugate variable not allowed here");
            return Poly::variable(total_, idx - 1 + (bar ? n_ : 0));
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t n_;
    std::size_t total_;
    bool conj_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, std::size_t n, bool with_conjugates) {
    return PolyParser(text, n, with_conjugates).parse();
}

}  // namespace flab
