#pragma once
//
// Foliation 1-forms: constructors (pencil, logarithmic, raw, factored), exact
// integrability, pointwise classification and a Newton-based singular-point
// locator.
//

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "flab/forms.hpp"

namespace flab {

struct RawProvenance {};

// alpha = a f1 df2 - b f2 df1.
struct PencilProvenance {
    mpq_class a;
    mpq_class b;
    Poly f1;
    Poly f2;
};

// alpha = sum_i lambda_i (prod_{j != i} f_j) df_i.
struct LogarithmicProvenance {
    std::vector<RationalComplex> lambda;
    std::vector<Poly> f;
};

// alpha = h df; the only provenance that certifies a local integrating factor.
struct FactoredProvenance {
    Poly h;
    Poly f;
};

using Provenance = std::variant<RawProvenance, PencilProvenance, LogarithmicProvenance, FactoredProvenance>;

std::string provenance_kind(const Provenance& p);

struct FoliationSpec {
    std::size_t n = 0;
    PolyForm alpha{1, 1};
    // Normal-bundle degree N, present when alpha is a homogeneous twisted form
    // with vanishing radial contraction (coefficient degree N - 1).
    std::optional<int> twist;
    Provenance provenance;
    // Computed when every input polynomial is homogeneous.
    std::optional<bool> projectivizable;
    std::vector<std::string> warnings;
};

// Wraps a user 1-form; validates degree and non-vanishing and fills in twist.
FoliationSpec make_raw(PolyForm alpha);
FoliationSpec make_pencil(const mpq_class& a, const mpq_class& b, const Poly& f1, const Poly& f2);
FoliationSpec make_logarithmic(std::span<const RationalComplex> lambda, std::span<const Poly> f);
FoliationSpec make_factored(const Poly& h, const Poly& f, std::size_t n);

struct IntegrabilityResult {
    bool integrable = false;
    PolyForm witness{1, 0};  // alpha ^ d alpha (zero iff integrable)
};

IntegrabilityResult check_integrability(const FoliationSpec& F);
IntegrabilityResult check_integrability(const PolyForm& alpha);

enum class PointClass { Regular, Kupka, DegenerateSingular };
std::string to_string(PointClass c);

struct PointReport {
    std::vector<cplx> point;
    PointClass cls = PointClass::Regular;
    Covector alpha_at;
    std::size_t dalpha_rank = 0;
    std::size_t radical_dim = 0;
    double residual = 0;  // |alpha(p)|
};

inline constexpr double kDefaultClassifyTol = 1e-9;

PointReport classify_point(const FoliationSpec& F, std::span<const cplx> p, double tol = kDefaultClassifyTol);
PointReport classify_point(const PolyForm& alpha, std::span<const cplx> p, double tol = kDefaultClassifyTol);

// Exact classification at a point of Q(i)^n: Regular iff alpha(p) != 0, Kupka
// iff alpha(p) = 0 and d alpha(p) != 0; the rank is exact (Gaussian elimination).
PointReport classify_point_exact(const PolyForm& alpha, std::span<const RationalComplex> p);

struct ComplexBox {
    // Per complex coordinate: real part in [re_lo, re_hi], imaginary part in [im_lo, im_hi].
    struct Interval {
        double re_lo, re_hi, im_lo, im_hi;
    };
    std::vector<Interval> coords;

    static ComplexBox cube(std::size_t n, double lo, double hi);
    std::size_t n() const { return coords.size(); }
};

struct SingularSearchOptions {
    std::size_t grid = 3;
    int newton_iters = 50;
    double tol = 1e-9;
    std::size_t max_seeds = 1'000'000;
};

// Newton from a grid of grid^(2n) seeds on the dz-coefficients. Requires a
// holomorphic form and n <= 4. Converged points (|alpha| < tol) are sorted,
// deduplicated at distance 10 tol, and classified.
std::vector<PointReport> find_singular_points(const FoliationSpec& F, const ComplexBox& box,
                                              const SingularSearchOptions& opts = {});

}  // namespace flab
