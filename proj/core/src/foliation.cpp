#include "flab/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "flab/geometry.hpp"
#include "flab/parallel.hpp"

namespace flab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void fill_twist(FoliationSpec& F) {
    if (!F.alpha.is_holomorphic()) return;
    auto deg = homogeneous_coefficient_degree(F.alpha);
    if (!deg) return;
    if (radial_contraction(F.alpha).is_zero()) F.twist = *deg + 1;
}

std::size_t exact_rank(std::vector<std::vector<RationalComplex>> m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        RationalComplex inv = m[rank][c].inverse();
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][c].is_zero()) continue;
            RationalComplex factor = m[r][c] * inv;
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= factor * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Drops the (unused) zbar block of a holomorphic coefficient.
Poly restrict_holomorphic(const Poly& p, std::size_t n) {
    Poly out(n);
    for (const auto& [e, c] : p.terms()) out.add_term(Poly::Exponents(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n)), c);
    return out;
}

}  // namespace

std::string provenance_kind(const Provenance& p) {
    return std::visit(overloaded{[](const RawProvenance&) { return std::string("raw"); },
                                 [](const PencilProvenance&) { return std::string("pencil"); },
                                 [](const LogarithmicProvenance&) { return std::string("logarithmic"); },
                                 [](const FactoredProvenance&) { return std::string("factored"); }},
                      p);
}

FoliationSpec make_raw(PolyForm alpha) {
    if (alpha.degree() != 1) throw std::invalid_argument("a foliation needs a 1-form");
    if (alpha.is_zero()) throw std::invalid_argument("foliation form vanishes identically");
    FoliationSpec F;
    F.n = alpha.n();
    F.alpha = std::move(alpha);
    F.provenance = RawProvenance{};
    fill_twist(F);
    return F;
}

FoliationSpec make_pencil(const mpq_class& a, const mpq_class& b, const Poly& f1, const Poly& f2) {
    if (f1.is_zero() || f2.is_zero()) throw std::invalid_argument("pencil needs nonzero polynomials");
    if (f1.n_vars() != f2.n_vars()) throw DimensionMismatch("pencil polynomials disagree on variable count");
    if (sgn(a) <= 0 || sgn(b) <= 0) throw std::invalid_argument("pencil exponents must be positive");
    const std::size_t n = f1.n_vars();

    PolyForm alpha = PolyForm::differential(n, f2).times(f1).scaled(RationalComplex(a)) -
                     PolyForm::differential(n, f1).times(f2).scaled(RationalComplex(b));
    if (alpha.is_zero()) throw std::invalid_argument("pencil form vanishes identically");

    FoliationSpec F;
    F.n = n;
    F.alpha = std::move(alpha);
    F.provenance = PencilProvenance{a, b, f1, f2};
    if (f1.homogeneous_degree() && f2.homogeneous_degree()) {
        F.projectivizable = radial_contraction(F.alpha).is_zero();
        if (*F.projectivizable) F.twist = *homogeneous_coefficient_degree(F.alpha) + 1;
    }
    return F;
}

FoliationSpec make_logarithmic(std::span<const RationalComplex> lambda, std::span<const Poly> f) {
    if (f.size() < 2) throw std::invalid_argument("logarithmic foliation needs at least 2 factors");
    if (lambda.size() != f.size()) throw std::invalid_argument("need one residue per factor");
    const std::size_t n = f.front().n_vars();
    for (const auto& fi : f) {
        if (fi.is_zero()) throw std::invalid_argument("logarithmic factor is zero");
        if (fi.n_vars() != n) throw DimensionMismatch("logarithmic factors disagree on variable count");
    }

    PolyForm alpha(n, 1);
    bool homogeneous = true;
    RationalComplex weighted_sum;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Poly others = Poly::constant(n, lambda[i]);
        for (std::size_t j = 0; j < f.size(); ++j)
            if (j != i) others *= f[j];
        alpha += PolyForm::differential(n, f[i]).times(others);
        auto d = f[i].homogeneous_degree();
        if (d)
            weighted_sum += lambda[i] * RationalComplex(static_cast<long>(*d));
        else
            homogeneous = false;
    }
    if (alpha.is_zero()) throw std::invalid_argument("logarithmic form vanishes identically");

    FoliationSpec F;
    F.n = n;
    F.alpha = std::move(alpha);
    F.provenance = LogarithmicProvenance{{lambda.begin(), lambda.end()}, {f.begin(), f.end()}};
    if (homogeneous) {
        F.projectivizable = weighted_sum.is_zero();
        if (*F.projectivizable) F.twist = *homogeneous_coefficient_degree(F.alpha) + 1;
    }
    if (f.size() < 3) F.warnings.emplace_back("fewer than 3 factors: not generic in the logarithmic sense");
    F.warnings.emplace_back("genericity (irreducible factors, normal crossings) not verified");
    return F;
}

FoliationSpec make_factored(const Poly& h, const Poly& f, std::size_t n) {
    if (h.is_zero()) throw std::invalid_argument("integrating factor is zero");
    PolyForm alpha = PolyForm::differential(n, f).times(h);
    FoliationSpec F = make_raw(std::move(alpha));
    F.provenance = FactoredProvenance{h, f};
    return F;
}

IntegrabilityResult check_integrability(const PolyForm& alpha) {
    if (alpha.degree() != 1) throw std::invalid_argument("integrability is defined for 1-forms");
    const std::size_t n = alpha.n();
    // Fewer than three real basis symbols: every 3-form vanishes.
    if (2 * n < 3) return {true, PolyForm(n, 0)};
    PolyForm w = wedge(alpha, exterior_derivative(alpha));
    bool ok = w.is_zero();
    return {ok, std::move(w)};
}

IntegrabilityResult check_integrability(const FoliationSpec& F) { return check_integrability(F.alpha); }

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::Regular: return "Regular";
        case PointClass::Kupka: return "Kupka";
        case PointClass::DegenerateSingular: return "DegenerateSingular";
    }
    return "?";
}

PointReport classify_point(const PolyForm& alpha, std::span<const cplx> p, double tol) {
    if (p.size() != alpha.n()) throw DimensionMismatch("classification point dimension mismatch");
    PointReport r;
    r.point.assign(p.begin(), p.end());
    r.alpha_at = eval_form(alpha, p);
    r.residual = r.alpha_at.norm();

    const std::size_t d = 2 * alpha.n();
    PolyForm da = exterior_derivative(alpha);
    auto M = eval_two_form(da, p);
    ComplexMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = M[i][j];
    r.dalpha_rank = numerical_rank(m, tol);
    r.radical_dim = d - r.dalpha_rank;

    if (r.residual > tol)
        r.cls = PointClass::Regular;
    else
        r.cls = r.dalpha_rank >= 2 ? PointClass::Kupka : PointClass::DegenerateSingular;
    return r;
}

PointReport classify_point(const FoliationSpec& F, std::span<const cplx> p, double tol) {
    return classify_point(F.alpha, p, tol);
}

PointReport classify_point_exact(const PolyForm& alpha, std::span<const RationalComplex> p) {
    if (p.size() != alpha.n()) throw DimensionMismatch("classification point dimension mismatch");
    PointReport r;
    for (const auto& x : p) r.point.push_back(x.to_complex());
    ExactCovector c = eval_form_exact(alpha, p);
    r.alpha_at = Covector(alpha.n());
    for (std::size_t k = 0; k < alpha.n(); ++k) {
        r.alpha_at.a[k] = c.a[k].to_complex();
        r.alpha_at.b[k] = c.b[k].to_complex();
    }
    r.residual = r.alpha_at.norm();
    r.dalpha_rank = exact_rank(eval_two_form_exact(exterior_derivative(alpha), p));
    r.radical_dim = 2 * alpha.n() - r.dalpha_rank;
    if (!c.is_zero())
        r.cls = PointClass::Regular;
    else
        r.cls = r.dalpha_rank >= 2 ? PointClass::Kupka : PointClass::DegenerateSingular;
    return r;
}

ComplexBox ComplexBox::cube(std::size_t n, double lo, double hi) {
    ComplexBox b;
    b.coords.assign(n, Interval{lo, hi, lo, hi});
    return b;
}

std::vector<PointReport> find_singular_points(const FoliationSpec& F, const ComplexBox& box,
                                              const SingularSearchOptions& opts) {
    const std::size_t n = F.n;
    if (box.n() != n) throw DimensionMismatch("search box dimension mismatch");
    if (n > 4) throw std::invalid_argument("find_singular_points supports n <= 4");
    if (opts.grid < 2) throw std::invalid_argument("grid needs at least 2 seeds per axis");
    if (!F.alpha.is_holomorphic())
        throw std::invalid_argument("find_singular_points needs a form without dzbar terms or zbar dependence");

    double seeds_d = std::pow(static_cast<double>(opts.grid), static_cast<double>(2 * n));
    if (seeds_d > static_cast<double>(opts.max_seeds))
        throw std::length_error("seed budget exceeded: " + std::to_string(static_cast<long long>(seeds_d)) +
                                " > " + std::to_string(opts.max_seeds));
    const std::size_t seeds = static_cast<std::size_t>(seeds_d);

    std::vector<FloatPoly> A;
    std::vector<std::vector<FloatPoly>> JA(n);
    for (std::size_t i = 0; i < n; ++i) {
        Poly Ai = restrict_holomorphic(F.alpha.coefficient({static_cast<std::uint8_t>(i)}), n);
        A.emplace_back(Ai);
        for (std::size_t j = 0; j < n; ++j) JA[i].emplace_back(Ai.differentiate(j));
    }
    auto residual_at = [&](const std::vector<cplx>& z, Eigen::VectorXcd& v) {
        for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = A[i](z);
        return v.norm();
    };

    struct Hit {
        bool ok = false;
        std::vector<cplx> z;
    };
    std::vector<Hit> hits(seeds);
    parallel_for(seeds, [&](std::size_t s) {
        std::vector<cplx> z(n);
        std::size_t idx = s;
        auto axis = [&](double lo, double hi) {
            std::size_t k = idx % opts.grid;
            idx /= opts.grid;
            return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(opts.grid - 1);
        };
        for (std::size_t k = 0; k < n; ++k) {
            const auto& iv = box.coords[k];
            double re = axis(iv.re_lo, iv.re_hi);
            double im = axis(iv.im_lo, iv.im_hi);
            z[k] = {re, im};
        }
        Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
        Eigen::MatrixXcd J(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        double res = residual_at(z, v);
        for (int it = 0; it < opts.newton_iters && res > 0.0; ++it) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = JA[i][j](z);
            Eigen::VectorXcd step = J.completeOrthogonalDecomposition().solve(-v);
            if (!step.allFinite()) break;
            double zn = 0;
            for (std::size_t k = 0; k < n; ++k) {
                z[k] += step(static_cast<Eigen::Index>(k));
                zn = std::max(zn, std::abs(z[k]));
            }
            if (zn > 1e8) return;  // diverged
            res = residual_at(z, v);
            if (step.norm() <= 1e-15 * (1.0 + zn)) break;
        }
        if (!(res < opts.tol)) return;
        const double slack = 10 * opts.tol;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& iv = box.coords[k];
            if (z[k].real() < iv.re_lo - slack || z[k].real() > iv.re_hi + slack || z[k].imag() < iv.im_lo - slack ||
                z[k].imag() > iv.im_hi + slack)
                return;
        }
        hits[s] = {true, std::move(z)};
    });

    std::vector<std::vector<cplx>> found;
    for (auto& h : hits)
        if (h.ok) found.push_back(std::move(h.z));
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (x[k].real() != y[k].real()) return x[k].real() < y[k].real();
            if (x[k].imag() != y[k].imag()) return x[k].imag() < y[k].imag();
        }
        return false;
    });
    std::vector<std::vector<cplx>> unique;
    for (auto& z : found) {
        bool dup = std::any_of(unique.begin(), unique.end(), [&](const auto& u) {
            double d = 0;
            for (std::size_t k = 0; k < n; ++k) d += std::norm(u[k] - z[k]);
            return std::sqrt(d) <= 10 * opts.tol;
        });
        if (!dup) unique.push_back(std::move(z));
    }

    std::vector<PointReport> out;
    out.reserve(unique.size());
    for (const auto& z : unique) out.push_back(classify_point(F, z, opts.tol));
    return out;
}

}  // namespace flab
