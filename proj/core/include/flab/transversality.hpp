#pragma once
//
// Sampling-based estimated transversality.
//
// A map s: C^n -> C^m is eta-transverse to 0 on a sample set when every sample
// with |s(x)| < eta has sigma_min(Ds(x)) > eta, where Ds is the 2m x 2n real
// Jacobian in the coordinates (x_1..x_n, y_1..y_n) and sigma_min is taken over
// min(2m, 2n) singular values.
//

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flab/geometry.hpp"
#include "flab/sampling.hpp"

namespace flab {

inline constexpr double kFiniteDifferenceStep = 1e-5;

class SampledMap {
public:
    using Eval = std::function<std::vector<cplx>(const std::vector<cplx>&)>;
    using Jacobian = std::function<RealMatrix(const std::vector<cplx>&)>;

    // Jacobian defaults to central differences with step kFiniteDifferenceStep.
    SampledMap(std::size_t n, std::size_t m, Region domain, Eval eval, std::optional<Jacobian> jacobian = {});

    // Components are Polys in n (holomorphic) or 2n (z, zbar) variables; the
    // Jacobian is analytic.
    static SampledMap polynomial(const std::vector<Poly>& components, Region domain);
    // The (1,0)-part of a 1-form relative to `frame`, as a map to C^n (standard
    // frame) or C^{2n} coefficient pairs (general frame); analytic Jacobian.
    static SampledMap one_zero_part(const PolyForm& alpha, const SymplecticFrame& frame, Region domain);

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    const Region& domain() const { return domain_; }

    std::vector<cplx> operator()(const std::vector<cplx>& z) const { return eval_(z); }
    RealMatrix jacobian(const std::vector<cplx>& z) const;
    RealMatrix finite_difference_jacobian(const std::vector<cplx>& z, double h = kFiniteDifferenceStep) const;
    bool has_analytic_jacobian() const { return jacobian_.has_value(); }

    // Same map on a different domain.
    SampledMap with_domain(Region domain) const;
    // z -> s(z) - w.
    SampledMap shifted(const std::vector<cplx>& w) const;

private:
    std::size_t n_;
    std::size_t m_;
    Region domain_;
    Eval eval_;
    std::optional<Jacobian> jacobian_;
};

// Relative deviation between analytic and finite-difference Jacobians at x.
double jacobian_cross_check(const SampledMap& s, const std::vector<cplx>& x);

struct SampleRow {
    std::vector<cplx> x;
    double abs_s = 0;
    double sigma_min = 0;
};

// Value and sigma_min at `samples` points of the domain (prefix-stable in samples).
std::vector<SampleRow> sample_map(const SampledMap& s, std::size_t samples, std::uint64_t seed);

// CSV with header x1..x{2n},abs_s,sigma_min; 17 significant digits.
void write_sample_csv(std::ostream& os, const std::vector<SampleRow>& rows);

struct TransversalityEstimate {
    // inf of sigma_min over samples with |s| < eta; +inf when the sublevel set is not hit.
    double value = std::numeric_limits<double>::infinity();
    std::size_t hits = 0;
    std::size_t samples = 0;
    bool hit() const { return hits > 0; }
};

TransversalityEstimate transversality_estimate(const SampledMap& s, double eta, std::size_t samples,
                                               std::uint64_t seed);
TransversalityEstimate transversality_estimate(const std::vector<SampleRow>& rows, double eta);

// Largest eta for which the samples certify eta-transversality:
// min over samples of max(|s(x)|, sigma_min(x)).
double transversality_level(const std::vector<SampleRow>& rows);

struct BadPoint {
    std::vector<cplx> x;
    double norm10 = 0;
    double norm01 = 0;
};

using CovectorField = std::function<Covector(const std::vector<cplx>&)>;

// Samples where |alpha_{1,0}| <= |alpha_{0,1}|, in sample order.
std::vector<BadPoint> bad_set_scan(const CovectorField& alpha, const SymplecticFrame& frame, const Region& region,
                                   std::size_t samples, std::uint64_t seed);
std::vector<BadPoint> bad_set_scan(const FoliationSpec& F, const SymplecticFrame& frame, const Region& region,
                                   std::size_t samples, std::uint64_t seed);

struct RegularityReport {
    double gamma = 0;
    double epsilon = 0;
    double kupka_margin = 0;
    double leaf_angle_max = 0;
    std::size_t tube_samples = 0;
    std::size_t outer_samples = 0;
    std::vector<BadPoint> bad_points;
    std::vector<std::string> notes;
};

// Finite-scale regularity check:
//  (ii) leaf_angle_max = max angle_M(ker alpha, J ker alpha) over samples in the
//       gamma-tube around kupka_points (excluding the points and zeros of alpha);
//  (iii) epsilon = transversality_level of the (1,0)-part outside the tube;
//  (i) kupka_margin = min over kupka_points of the second singular value of
//      d alpha there (0 if none are given);
//  (iv) exact check of alpha = h df when the provenance carries (h, f).
RegularityReport regularity_report(const FoliationSpec& F, const SymplecticFrame& frame,
                                   const std::vector<std::vector<cplx>>& kupka_points, double gamma,
                                   const Region& region, std::size_t samples, std::uint64_t seed);

struct WSearchOptions {
    std::size_t candidates = 256;
    std::size_t samples = 2000;  // points of B(0, 9/10) for the objective
    std::size_t refine_starts = 4;
    int refine_iters = 200;
    std::uint64_t seed = 0;
};

struct WSearchResult {
    std::vector<cplx> w;
    double achieved = 0;  // transversality_level of t - w on B(0, 9/10)
    std::size_t evaluations = 0;
    bool budget_exhausted = false;
};

// Objective for the search: transversality level of t - w over fixed samples.
class ShiftObjective {
public:
    ShiftObjective(const SampledMap& t, std::size_t samples, std::uint64_t seed);
    double operator()(const std::vector<cplx>& w) const;
    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<std::vector<cplx>> values_;
    std::vector<double> sigma_;
};

// Searches |w| <= delta (quasi-random candidates, then compass refinement from
// the best few) maximizing the transversality of t - w on B(0, 9/10).
WSearchResult local_perturbation_search(const SampledMap& t, double delta, const WSearchOptions& opts = {});

}  // namespace flab
